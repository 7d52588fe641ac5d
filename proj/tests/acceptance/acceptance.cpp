// Acceptance checks. `acceptance` runs every criterion, `acceptance 3 8` runs a subset.
// Prints one PASS/FAIL line per criterion; exits nonzero if any selected criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "learngraph/augment.hpp"
#include "learngraph/cli.hpp"
#include "learngraph/config.hpp"
#include "learngraph/contrastive.hpp"
#include "learngraph/data_io.hpp"
#include "learngraph/evaluation.hpp"
#include "learngraph/graph_learner.hpp"
#include "learngraph/knn.hpp"
#include "learngraph/post_process.hpp"
#include "learngraph/trainer.hpp"
#include "support/testing.hpp"

namespace fs = std::filesystem;
using namespace lg;
using lg::testing::contracted;
using lg::testing::gradient_error;
using lg::testing::random_matrix;
using lg::testing::random_symmetric;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const fs::path kSource = LG_SOURCE_DIR;
const fs::path kWork = LG_WORK_DIR;

fs::path fresh_dir(const std::string& name) {
  fs::path p = kWork / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool dataset_present(const RunConfig& cfg) { return fs::exists(cfg.dataset / "features.tsv"); }

// ---- downstream reproductions ----

Outcome tabular(const std::string& name, double min_mean, double budget) {
  RunConfig cfg = load_config(kSource / "configs" / (name + ".conf"));
  if (!dataset_present(cfg))
    return {false, "dataset missing at " + cfg.dataset.string() + " (run scripts/export_datasets.py)"};
  const auto t0 = std::chrono::steady_clock::now();
  RunReport r = cmd_train(Task::inference, cfg, fresh_dir(name), false);
  const double secs = seconds_since(t0);
  const bool ok = r.accuracy.mean >= min_mean && secs < budget;
  return {ok, fmt("%s mean=%.4f std=%.4f (need >= %.3f) seconds=%.0f (need < %.0f)", name.c_str(), r.accuracy.mean,
                  r.accuracy.std, min_mean, secs, budget)};
}

RunConfig cora_config() { return load_config(kSource / "configs" / "cora.conf"); }

Outcome cora_unavailable(const RunConfig& cfg) {
  return {false, "dataset unavailable: " + cfg.dataset.string() + " not found (see scripts/export_planetoid.py)"};
}

Outcome cora_refinement() {
  RunConfig cfg = cora_config();
  if (!dataset_present(cfg)) return cora_unavailable(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  RunReport r = cmd_train(Task::refinement, cfg, fresh_dir("cora"), false);
  const double secs = seconds_since(t0);
  Dataset data = load_dataset(cfg.dataset);
  ClassifyStats identity = eval_classify(Matrix::identity(data.num_nodes()), data, cfg.seeds, cfg.classifier);
  const double gap = r.accuracy.mean - identity.mean;
  const bool ok = r.accuracy.mean >= 0.80 && gap >= 0.02 && secs < 3600;
  return {ok, fmt("mean=%.4f (need >= 0.80) identity=%.4f gap=%.4f (need >= 0.02) seconds=%.0f (need < 3600)",
                  r.accuracy.mean, identity.mean, gap, secs)};
}

Outcome cora_bootstrap_ablation() {
  RunConfig cfg = cora_config();
  if (!dataset_present(cfg)) return cora_unavailable(cfg);
  cfg.train.tau = 0.9999;
  const double with = cmd_train(Task::refinement, cfg, fresh_dir("cora_tau"), false).accuracy.mean;
  cfg.train.tau = 1.0;
  const double without = cmd_train(Task::refinement, cfg, fresh_dir("cora_tau1"), false).accuracy.mean;
  return {with > without, fmt("tau=0.9999 mean=%.4f tau=1 mean=%.4f (need strictly greater)", with, without)};
}

Outcome cora_robustness() {
  RunConfig cfg = cora_config();
  if (!dataset_present(cfg)) return cora_unavailable(cfg);
  double refined = 0.0, corrupted = 0.0;
  const std::vector<std::uint64_t> seeds{0, 1, 2};
  for (std::uint64_t seed : seeds) {
    const fs::path noisy = fresh_dir("cora_delete50_" + std::to_string(seed));
    cmd_perturb(cfg.dataset, PerturbMode::remove, 0.5, seed, noisy);
    RunConfig run = cfg;
    run.dataset = noisy;
    run.seeds = {seed};
    refined += cmd_train(Task::refinement, run, fresh_dir("cora_refined_" + std::to_string(seed)), false).accuracy.mean;
    Dataset data = load_dataset(noisy);
    corrupted += eval_classify(*data.adjacency, data, {seed}, cfg.classifier).mean;
  }
  refined /= static_cast<double>(seeds.size());
  corrupted /= static_cast<double>(seeds.size());
  return {refined - corrupted >= 0.03,
          fmt("refined=%.4f corrupted=%.4f gap=%.4f (need >= 0.03)", refined, corrupted, refined - corrupted)};
}

Outcome cora_clustering() {
  RunConfig cfg = cora_config();
  if (!dataset_present(cfg)) return cora_unavailable(cfg);
  RunReport r = cmd_train(Task::refinement, cfg, fresh_dir("cora_cluster"), true);
  const ClusterScores& c = *r.clustering;
  return {c.cacc >= 0.63 && c.nmi >= 0.45,
          fmt("C-ACC=%.4f (need >= 0.63) NMI=%.4f (need >= 0.45) F1=%.4f ARI=%.4f", c.cacc, c.nmi, c.f1, c.ari)};
}

// ---- property suites ----

Matrix away_from_kinks(Matrix x) {
  for (double& v : x.values())
    if (std::abs(v) < 1e-2) v += 0.05;
  return x;
}

std::unique_ptr<GraphLearner> jittered_learner(LearnerKind kind, const Matrix& x, const Matrix& adj, std::size_t k,
                                               std::size_t layers, Rng& rng) {
  auto learner = init_learner(kind, x, &adj, k, layers);
  for (Parameter* p : learner->parameters())
    for (double& v : p->value.values()) v += rng.uniform(-0.2, 0.2);
  return learner;
}

Outcome gradient_suite() {
  Rng rng(8);
  std::map<std::string, double> worst;
  auto record = [&](const std::string& name, double err) { worst[name] = std::max(worst[name], err); };
  const std::vector<LearnerKind> kinds{LearnerKind::fgp, LearnerKind::attentive, LearnerKind::mlp, LearnerKind::gnn};

  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = away_from_kinks(random_matrix(3, 4, rng));
    const Matrix b = random_matrix(4, 3, rng);
    const Matrix c = random_matrix(3, 4, rng);
    const Matrix left = random_matrix(2, 3, rng);
    const Matrix row = random_matrix(1, 4, rng);
    const Matrix w34 = random_matrix(3, 4, rng);
    const Matrix w33 = random_matrix(3, 3, rng);
    const Matrix w24 = random_matrix(2, 4, rng);
    const Matrix w43 = random_matrix(4, 3, rng);
    const Matrix r14 = random_matrix(1, 4, rng);

    record("matmul(x,B)", gradient_error(contracted([&](Tape& t, const Var& v) { return matmul(v, t.constant(b)); }, w33), x));
    record("matmul(A,x)", gradient_error(contracted([&](Tape& t, const Var& v) { return matmul(t.constant(left), v); }, w24), x));
    record("matmul_nt", gradient_error(contracted([&](Tape& t, const Var& v) { return matmul_nt(v, t.constant(c)); }, w33), x));
    record("matmul_nt(x,x)", gradient_error(contracted([](Tape&, const Var& v) { return matmul_nt(v, v); }, w33), x));
    record("transpose", gradient_error(contracted([](Tape&, const Var& v) { return transpose(v); }, w43), x));
    record("add", gradient_error(contracted([&](Tape& t, const Var& v) { return add(v, t.constant(c)); }, w34), x));
    record("sub", gradient_error(contracted([&](Tape& t, const Var& v) { return sub(t.constant(c), v); }, w34), x));
    record("hadamard", gradient_error(contracted([](Tape&, const Var& v) { return hadamard(v, v); }, w34), x));
    record("scale", gradient_error(contracted([](Tape&, const Var& v) { return scale(v, -1.7); }, w34), x));
    record("add_row", gradient_error(contracted([&](Tape& t, const Var& v) { return add_row(v, t.constant(row)); }, w34), x));
    record("add_row(row)", gradient_error(contracted([&](Tape& t, const Var& v) { return add_row(t.constant(c), v); }, w34), r14));
    record("mul_row", gradient_error(contracted([&](Tape& t, const Var& v) { return mul_row(v, t.constant(row)); }, w34), x));
    record("mul_row(row)", gradient_error(contracted([&](Tape& t, const Var& v) { return mul_row(t.constant(c), v); }, w34), r14));
    for (Activation a : {Activation::identity, Activation::relu, Activation::elu, Activation::tanh})
      record("activation:" + to_string(a),
             gradient_error(contracted([&](Tape&, const Var& v) { return activation(v, a); }, w34), x));
    record("row_normalize", gradient_error(contracted([](Tape&, const Var& v) { return row_normalize(v); }, w34), x));
    record("cosine_similarity", gradient_error(contracted([](Tape&, const Var& v) { return cosine_similarity_matrix(v); }, w33), x));
    record("sum", gradient_error([](Tape&, const Var& v) { return sum(v); }, x));

    // Post-processing on well separated entries so the top-k choice is stable under the probe.
    Matrix s(6, 6);
    std::vector<double> vals(36);
    std::iota(vals.begin(), vals.end(), 0.0);
    std::shuffle(vals.begin(), vals.end(), rng.engine());
    for (std::size_t i = 0; i < 36; ++i) s.values()[i] = vals[i] / 36.0 + 0.01;
    const Matrix w66 = random_matrix(6, 6, rng);
    const Matrix sym = random_symmetric(6, rng, 0.1, 1.0);
    record("topk_sparsify", gradient_error(contracted([](Tape&, const Var& v) { return topk_sparsify(v, 3); }, w66), s));
    record("activate_symmetrize:relu",
           gradient_error(contracted([](Tape&, const Var& v) { return activate_symmetrize(v, LearnerKind::mlp); }, w66), s));
    record("activate_symmetrize:elu",
           gradient_error(contracted([](Tape&, const Var& v) { return activate_symmetrize(v, LearnerKind::fgp); }, w66), s));
    record("normalize_sym", gradient_error(contracted([](Tape&, const Var& v) { return normalize_sym(v); }, w66), sym));
    for (LearnerKind kind : kinds)
      record("process:" + to_string(kind),
             gradient_error(contracted([&](Tape&, const Var& v) { return process(v, 3, kind); }, w66), s));

    // Contrastive pieces.
    const Matrix feats = random_matrix(6, 3, rng);
    const Matrix za = random_matrix(6, 4, rng);
    const Matrix z = random_matrix(6, 4, rng);
    const double temp = rng.uniform(0.1, 1.0);
    record("nt_xent", gradient_error([&](Tape& t, const Var& v) { return nt_xent(v, t.constant(za), temp); }, z));
    record("gcn_normalize", gradient_error(contracted([](Tape&, const Var& v) { return gcn_normalize(v); }, w66), sym));
    ContrastiveModel model = init_contrastive_model(3, 5, 4, rng);
    const Matrix w64 = random_matrix(6, 4, rng);
    record("gcn_encode+mlp_project (adjacency)",
           gradient_error(contracted([&](Tape& t, const Var& v) {
                            return mlp_project(gcn_encode(v, t.constant(feats), model.encoder), model.projector);
                          }, w64), sym));
    record("gcn_encode+mlp_project (features)",
           gradient_error(contracted([&](Tape& t, const Var& v) {
                            return mlp_project(gcn_encode(t.constant(sym), v, model.encoder), model.projector);
                          }, w64), away_from_kinks(feats)));
  }

  // Full learner -> loss pipeline, every learner kind, checked against its parameters.
  for (int trial = 0; trial < 10; ++trial) {
    for (LearnerKind kind : kinds) {
      const Matrix x = random_matrix(8, 3, rng, 0.0, 1.0);
      const Matrix adj = build_knn_graph(x, 2);
      auto learner = jittered_learner(kind, x, adj, 3, 2, rng);
      ContrastiveModel model = init_contrastive_model(3, 6, 4, rng);
      const std::uint64_t mask_seed = rng.split();
      auto loss = [&](Tape& tape) {
        Rng masks(mask_seed);
        Var s = process(learner->forward(tape, x), 3, kind);
        AugmentedViews v = augment_views(s, adj, x, {0.3, 0.3, 0.2}, masks);
        Var zl = mlp_project(gcn_encode(v.learner_adjacency, tape.constant(v.learner_features), model.encoder),
                             model.projector);
        Var zb = mlp_project(gcn_encode(tape.constant(v.anchor_adjacency), tape.constant(v.anchor_features),
                                        model.encoder),
                             model.projector);
        return nt_xent(zl, zb, 0.2);
      };
      std::vector<Parameter*> params = learner->parameters();
      for (Parameter* p : model.parameters()) params.push_back(p);
      record("pipeline:" + to_string(kind), lg::testing::parameter_gradient_error(loss, params, 1e-5, 10, &rng));
    }
  }

  auto top = std::max_element(worst.begin(), worst.end(), [](auto& a, auto& b) { return a.second < b.second; });
  return {top->second < 1e-4,
          fmt("%zu checks, max rel err %.3g at %s (need < 1e-4)", worst.size(), top->second, top->first.c_str())};
}

// Each row keeps k entries, then symmetrization adds one entry per row that kept it. The row
// bound is therefore k plus that in-count; 2k holds only when no node is a hub.
Outcome post_processor_suite() {
  Rng rng(9);
  const std::vector<LearnerKind> kinds{LearnerKind::fgp, LearnerKind::attentive, LearnerKind::mlp, LearnerKind::gnn};
  std::size_t failures = 0, hub_rows = 0;
  double worst_asym = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const LearnerKind kind = kinds[static_cast<std::size_t>(trial) % kinds.size()];
    const std::size_t n = 4 + rng.uniform_index(20);
    const std::size_t k = 1 + rng.uniform_index(n - 1);
    const Matrix x = random_matrix(n, 1 + rng.uniform_index(6), rng);
    const Matrix adj = build_knn_graph(x, std::min<std::size_t>(k, n - 1));
    auto learner = jittered_learner(kind, x, adj, k, 1 + rng.uniform_index(2), rng);
    Tape tape;
    Var sketch = learner->forward(tape, x);
    Var sparse = kind == LearnerKind::fgp ? sketch : topk_sparsify(sketch, k);
    const Matrix kept = sparse.value();
    const Matrix sym = activate_symmetrize(sparse, kind).value();
    const Matrix out = process(sketch, k, kind).value();

    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t nonzeros = 0, kept_by_others = 0;
      for (std::size_t j = 0; j < n; ++j) {
        worst_asym = std::max(worst_asym, std::abs(out(i, j) - out(j, i)));
        if (sym(i, j) == 0.0 && out(i, j) != 0.0) ok = false;
        if (kind != LearnerKind::fgp && (out(i, j) < 0.0 || out(i, j) > 1.0)) ok = false;
        if (out(i, j) != 0.0) ++nonzeros;
        if (j != i && kept(j, i) != 0.0 && kept(i, j) == 0.0) ++kept_by_others;
      }
      if (kind != LearnerKind::fgp) {
        if (nonzeros > k + kept_by_others) ok = false;
        if (nonzeros > 2 * k) ++hub_rows;
      }
    }
    if (!ok) ++failures;
  }
  return {failures == 0 && worst_asym <= 1e-12,
          fmt("200 instances, %zu violate range/zero-pattern/row-nonzero bounds, max asymmetry %.3g (need <= 1e-12); "
              "%zu hub rows exceed 2k nonzeros, all within k + in-count",
              failures, worst_asym, hub_rows)};
}

double brute_force_nt_xent(const Matrix& zl, const Matrix& za, double t) {
  const std::size_t n = zl.rows();
  auto cosine = [](const Matrix& a, std::size_t i, const Matrix& b, std::size_t k) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      dot += a(i, j) * b(k, j);
      na += a(i, j) * a(i, j);
      nb += b(k, j) * b(k, j);
    }
    return na == 0.0 || nb == 0.0 ? 0.0 : dot / (std::sqrt(na) * std::sqrt(nb));
  };
  auto ell = [&](const Matrix& a, const Matrix& b, std::size_t i) {
    double denom = 0.0;
    for (std::size_t k = 0; k < n; ++k) denom += std::exp(cosine(a, i, b, k) / t);
    return std::log(std::exp(cosine(a, i, b, i) / t) / denom);
  };
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += ell(zl, za, i) + ell(za, zl, i);
  return -total / (2.0 * static_cast<double>(n));
}

Outcome nt_xent_oracle() {
  Rng rng(10);
  auto loss_of = [](const Matrix& a, const Matrix& b, double t) {
    Tape tape;
    return nt_xent(tape.constant(a), tape.constant(b), t).value()(0, 0);
  };
  double worst = 0.0, worst_scale = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(16);
    const std::size_t d = 1 + rng.uniform_index(8);
    const double t = rng.uniform(0.1, 1.0);
    const Matrix zl = random_matrix(n, d, rng);
    const Matrix za = random_matrix(n, d, rng);
    const double loss = loss_of(zl, za, t);
    worst = std::max(worst, std::abs(loss - brute_force_nt_xent(zl, za, t)));
    Matrix scaled_l = zl, scaled_a = za;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = rng.uniform(0.01, 100.0), b = rng.uniform(0.01, 100.0);
      for (double& v : scaled_l.row(i)) v *= a;
      for (double& v : scaled_a.row(i)) v *= b;
    }
    worst_scale = std::max(worst_scale, std::abs(loss - loss_of(scaled_l, scaled_a, t)));
  }
  return {worst < 1e-10 && worst_scale < 1e-9,
          fmt("100 instances, max |loss - brute force| %.3g (need < 1e-10), max rescaling change %.3g (need < 1e-9)",
              worst, worst_scale)};
}

// Row-wise stable sort descending: equal values keep ascending column order.
Matrix topk_oracle(const Matrix& s, std::size_t k) {
  Matrix out(s.rows(), s.cols());
  for (std::size_t i = 0; i < s.rows(); ++i) {
    std::vector<std::size_t> idx(s.cols());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s(i, a) > s(i, b); });
    for (std::size_t r = 0; r < k; ++r) out(i, idx[r]) = s(i, idx[r]);
  }
  return out;
}

Matrix knn_oracle(const Matrix& x, std::size_t k) {
  const std::size_t n = x.rows();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double v : x.row(i)) s += v * v;
    norms[i] = std::sqrt(s);
  }
  Matrix cos(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < x.cols(); ++c) dot += x(i, c) * x(j, c);
      cos(i, j) = norms[i] == 0.0 || norms[j] == 0.0 ? 0.0 : dot / (norms[i] * norms[j]);
    }
  Matrix kept = topk_oracle(cos, k);
  Matrix sym(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sym(i, j) = (std::max(kept(i, j), 0.0) + std::max(kept(j, i), 0.0)) / 2.0;
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = 0.0;
    for (double v : sym.row(i)) d += v;
    r[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sym(i, j) *= r[i] * r[j];
  return sym;
}

Outcome topk_knn_oracle() {
  Rng rng(11);
  std::size_t topk_mismatch = 0, pattern_mismatch = 0;
  double worst_value = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(49);
    const std::size_t k = 1 + rng.uniform_index(n - 1);
    // Few distinct levels so rows are full of ties.
    const std::size_t levels = 1 + rng.uniform_index(6);
    Matrix s(n, n);
    for (double& v : s.values()) v = static_cast<double>(rng.uniform_index(levels)) / static_cast<double>(levels) - 0.3;
    Tape tape;
    if (!(topk_sparsify(tape.constant(s), k).value() == topk_oracle(s, k))) ++topk_mismatch;

    // Features built from a few prototypes, so duplicate rows tie exactly.
    const std::size_t d = 1 + rng.uniform_index(5);
    const Matrix protos = random_matrix(1 + rng.uniform_index(n), d, rng);
    Matrix x(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t p = rng.uniform_index(protos.rows());
      for (std::size_t c = 0; c < d; ++c) x(i, c) = protos(p, c);
    }
    const Matrix got = build_knn_graph(x, k);
    const Matrix want = knn_oracle(x, k);
    for (std::size_t i = 0; i < got.size(); ++i) {
      if ((got.values()[i] == 0.0) != (want.values()[i] == 0.0)) {
        ++pattern_mismatch;
        break;
      }
      worst_value = std::max(worst_value, std::abs(got.values()[i] - want.values()[i]));
    }
  }
  return {topk_mismatch == 0 && pattern_mismatch == 0 && worst_value < 1e-12,
          fmt("100 instances: topk mismatches %zu, knn edge-set mismatches %zu, max knn weight diff %.3g",
              topk_mismatch, pattern_mismatch, worst_value)};
}

Outcome bootstrap_convexity() {
  Rng rng(12);
  std::size_t outside = 0, identity_fail = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(12);
    const Matrix a = random_matrix(n, n, rng, -2.0, 2.0);
    const Matrix s = random_matrix(n, n, rng, -2.0, 2.0);
    const double tau = rng.uniform();
    const Matrix out = bootstrap_update(a, s, tau);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double lo = std::min(a.values()[i], s.values()[i]);
      const double hi = std::max(a.values()[i], s.values()[i]);
      if (out.values()[i] < lo || out.values()[i] > hi) ++outside;
    }
    if (!(bootstrap_update(a, s, 1.0) == a) || !(bootstrap_update(a, s, 0.0) == s)) ++identity_fail;
  }
  return {outside == 0 && identity_fail == 0,
          fmt("1000 instances: %zu entries outside [min, max], %zu tau in {0,1} identity failures", outside,
              identity_fail)};
}

Outcome determinism() {
  RunConfig cfg = load_config(kSource / "configs" / "wine.conf");
  if (!dataset_present(cfg)) return {false, "dataset missing at " + cfg.dataset.string()};
  cfg.seeds = {cfg.seeds.front()};
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  cmd_train(Task::inference, cfg, fresh_dir("determinism_a"), false);
  cmd_train(Task::inference, cfg, fresh_dir("determinism_b"), false);
  const std::string a = read(kWork / "determinism_a" / "learned_adjacency.tsv");
  const std::string b = read(kWork / "determinism_b" / "learned_adjacency.tsv");
  return {!a.empty() && a == b, fmt("two seed-%llu Wine runs, learned_adjacency.tsv %zu bytes, %s",
                                    static_cast<unsigned long long>(cfg.seeds.front()), a.size(),
                                    a == b ? "bitwise identical" : "DIFFERENT")};
}

const std::vector<std::function<Outcome()>>& criteria() {
  static const std::vector<std::function<Outcome()>> all{
      [] { return tabular("wine", 0.94, 300); },
      [] { return tabular("cancer", 0.93, 600); },
      [] { return tabular("digits", 0.89, 1800); },
      cora_refinement,
      cora_bootstrap_ablation,
      cora_robustness,
      cora_clustering,
      gradient_suite,
      post_processor_suite,
      nt_xent_oracle,
      topk_knn_oracle,
      bootstrap_convexity,
      determinism,
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const long id = std::strtol(argv[i], nullptr, 10);
    if (id < 1 || id > static_cast<long>(criteria().size())) {
      std::fprintf(stderr, "unknown criterion '%s' (expected 1..%zu)\n", argv[i], criteria().size());
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(id));
  }
  if (selected.empty()) {
    selected.resize(criteria().size());
    std::iota(selected.begin(), selected.end(), std::size_t{1});
  }
  int failed = 0;
  for (std::size_t id : selected) {
    Outcome o;
    try {
      o = criteria()[id - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %2zu: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
