#!/usr/bin/env python3
"""Convert raw Planetoid citation files (ind.<name>.x, .y, .tx, .ty, .allx, .ally,
.graph, .test.index) into the plain-text dataset layout.

Uses the standard public split: the first len(y) nodes train, the next 500
validate, and the listed test indices test. Features are row-normalized.
The raw files are not bundled; fetch them from the Planetoid repository first.
"""
import argparse
import json
import pickle
import sys
from pathlib import Path

import numpy as np
import scipy.sparse as sp

PARTS = ["x", "y", "tx", "ty", "allx", "ally", "graph"]


def load_raw(raw_dir, name):
    objs = {}
    for part in PARTS:
        with open(Path(raw_dir) / f"ind.{name}.{part}", "rb") as f:
            objs[part] = pickle.load(f, encoding="latin1")
    test_index = [int(line) for line in open(Path(raw_dir) / f"ind.{name}.test.index")]
    return objs, test_index


def export(raw_dir, name, out_root):
    o, test_index = load_raw(raw_dir, name)
    test_sorted = np.sort(test_index)
    tx, ty = o["tx"], o["ty"]
    if name == "citeseer":
        # isolated test nodes are missing from tx/ty; pad them with zeros
        full = range(test_sorted.min(), test_sorted.max() + 1)
        tx_ext = sp.lil_matrix((len(full), o["x"].shape[1]))
        tx_ext[test_sorted - test_sorted.min(), :] = tx
        ty_ext = np.zeros((len(full), o["y"].shape[1]))
        ty_ext[test_sorted - test_sorted.min(), :] = ty
        tx, ty = tx_ext, ty_ext

    features = sp.vstack((o["allx"], tx)).tolil()
    features[test_index, :] = features[test_sorted, :]
    features = np.asarray(features.todense(), dtype=np.float64)
    sums = features.sum(axis=1, keepdims=True)
    sums[sums == 0] = 1.0
    features /= sums

    onehot = np.vstack((o["ally"], ty))
    onehot[test_index, :] = onehot[test_sorted, :]
    labels = onehot.argmax(axis=1)
    n = len(labels)

    edges = set()
    for i, nbrs in o["graph"].items():
        for j in nbrs:
            if i != j and i < n and j < n:
                edges.add((min(i, j), max(i, j)))

    n_train = o["y"].shape[0]
    splits = {
        "train": list(range(n_train)),
        "val": list(range(n_train, n_train + min(500, max(0, n - n_train - len(test_sorted))))),
        "test": sorted(int(i) for i in test_sorted if i < n),
    }

    out = Path(out_root) / name
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "features.tsv", "w") as f:
        for row in features:
            f.write("\t".join(repr(float(v)) for v in row) + "\n")
    with open(out / "labels.tsv", "w") as f:
        f.writelines(f"{int(v)}\n" for v in labels)
    with open(out / "edges.tsv", "w") as f:
        f.writelines(f"{i}\t{j}\n" for i, j in sorted(edges))
    with open(out / "splits.json", "w") as f:
        json.dump(splits, f)
    print(f"{name}: n={n} d={features.shape[1]} edges={len(edges)} classes={onehot.shape[1]} -> {out}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("raw_dir", help="directory holding the ind.<name>.* files")
    parser.add_argument("--name", default="cora")
    parser.add_argument("--out", default="data")
    args = parser.parse_args()
    if not (Path(args.raw_dir) / f"ind.{args.name}.x").exists():
        sys.exit(f"missing {args.raw_dir}/ind.{args.name}.x")
    export(args.raw_dir, args.name, args.out)


if __name__ == "__main__":
    main()
