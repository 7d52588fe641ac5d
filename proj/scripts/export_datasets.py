#!/usr/bin/env python3
"""Export the UCI tabular datasets bundled with scikit-learn to the plain-text layout.

Each dataset directory gets features.tsv, labels.tsv and
splits.json with a stratified train set sized to the usual label rate, a
validation set, and every remaining node as test. Wine and Cancer columns are
z-scored; Digits pixels share one 0-16 range and are divided by 16.
"""
import argparse
import json
from pathlib import Path

import numpy as np
from sklearn import datasets

# name -> (loader, train size, val size, scaling)
SOURCES = {
    "wine": (datasets.load_wine, 10, 20, "zscore"),
    "cancer": (datasets.load_breast_cancer, 10, 20, "zscore"),
    "digits": (datasets.load_digits, 50, 100, "unit"),
}


def stratified_take(labels, pool, count, rng):
    classes = np.unique(labels)
    per_class = {c: rng.permutation([i for i in pool if labels[i] == c]).tolist() for c in classes}
    picked = []
    while len(picked) < count:
        for c in classes:
            if per_class[c] and len(picked) < count:
                picked.append(per_class[c].pop())
    return sorted(picked)


def export(name, out_root, seed):
    loader, n_train, n_val, scaling = SOURCES[name]
    data = loader()
    x = np.asarray(data.data, dtype=np.float64)
    if scaling == "zscore":
        std = x.std(axis=0)
        std[std == 0] = 1.0
        x = (x - x.mean(axis=0)) / std
    else:
        x = x / x.max()
    y = np.asarray(data.target, dtype=np.int64)

    rng = np.random.default_rng(seed)
    everything = list(range(len(y)))
    train = stratified_take(y, everything, n_train, rng)
    rest = sorted(set(everything) - set(train))
    val = stratified_take(y, rest, n_val, rng)
    test = sorted(set(rest) - set(val))

    out = Path(out_root) / name
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "features.tsv", "w") as f:
        for row in x:
            f.write("\t".join(repr(float(v)) for v in row) + "\n")
    with open(out / "labels.tsv", "w") as f:
        f.writelines(f"{int(v)}\n" for v in y)
    with open(out / "splits.json", "w") as f:
        json.dump({"train": train, "val": val, "test": test}, f)
    print(f"{name}: n={len(y)} d={x.shape[1]} classes={len(np.unique(y))} -> {out}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("names", nargs="*", default=sorted(SOURCES))
    args = parser.parse_args()
    for name in args.names:
        export(name, args.out, args.seed)


if __name__ == "__main__":
    main()
