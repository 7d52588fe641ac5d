#include "learngraph/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "learngraph/errors.hpp"
#include "learngraph/graph_learner.hpp"
#include "learngraph/trainer.hpp"

namespace lg {

double classification_accuracy(const std::vector<int>& pred, const std::vector<int>& truth,
                               const std::vector<std::size_t>& mask) {
  if (pred.size() != truth.size()) throw ContractError("classification_accuracy: length mismatch");
  if (mask.empty()) throw ContractError("classification_accuracy: empty mask");
  std::size_t correct = 0;
  for (std::size_t i : mask) {
    if (i >= pred.size()) throw ContractError("classification_accuracy: mask index out of range");
    if (pred[i] == truth[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(mask.size());
}

namespace {

// P * x for a constant symmetric P kept outside the tape.
Var propagate(const Matrix& p, const Var& x) {
  return x.tape().record(matmul(p, x.value()), {x},
                         [&p](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
                           if (grads[0]) matmul_accumulate(p, Transpose::yes, g, Transpose::no, *grads[0]);
                         });
}

Var dropout(const Var& x, double rate, Rng& rng) {
  if (rate <= 0.0) return x;
  Matrix mask(x.rows(), x.cols());
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double& m : mask.values()) m = rng.bernoulli(rate) ? 0.0 : keep_scale;
  return hadamard(x, x.tape().constant(std::move(mask)));
}

// Mean softmax cross-entropy over the rows in `rows`.
Var masked_cross_entropy(const Var& logits, const std::vector<int>& labels, const std::vector<std::size_t>& rows) {
  const Matrix& z = logits.value();
  Matrix prob(z.rows(), z.cols());
  double total = 0.0;
  for (std::size_t i : rows) {
    auto r = z.row(i);
    const double top = *std::max_element(r.begin(), r.end());
    double acc = 0.0;
    for (double v : r) acc += std::exp(v - top);
    const double lse = top + std::log(acc);
    total += lse - r[static_cast<std::size_t>(labels[i])];
    auto p = prob.row(i);
    for (std::size_t c = 0; c < r.size(); ++c) p[c] = std::exp(r[c] - lse);
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  return logits.tape().record(
      Matrix(1, 1, total * inv), {logits},
      [prob = std::move(prob), &labels, &rows, inv](const Matrix&, const Matrix& g, std::span<Matrix* const> grads) {
        if (!grads[0]) return;
        const double s = g(0, 0) * inv;
        for (std::size_t i : rows) {
          auto out = grads[0]->row(i);
          auto p = prob.row(i);
          for (std::size_t c = 0; c < out.size(); ++c) out[c] += s * p[c];
          out[static_cast<std::size_t>(labels[i])] -= s;
        }
      });
}

std::vector<int> argmax_rows(const Matrix& m) {
  std::vector<int> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    out[i] = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return out;
}

}  // namespace

double train_gcn_classifier(const Matrix& adjacency, const Dataset& data, std::uint64_t seed,
                            const ClassifierConfig& cfg) {
  if (!data.splits) throw ConfigError("dataset '" + data.name + "' has no train/val/test splits");
  const Splits& sp = *data.splits;
  if (sp.train.empty() || sp.val.empty() || sp.test.empty()) throw ConfigError("train/val/test splits must be non-empty");
  const std::size_t n = data.num_nodes();
  if (!adjacency.is_square() || adjacency.rows() != n) {
    throw DimensionError("classifier adjacency " + adjacency.shape_string() + " for " + std::to_string(n) + " nodes");
  }
  const Matrix p = gcn_propagation_matrix(adjacency);
  const std::size_t classes = data.num_classes();

  Rng rng(seed);
  Parameter w1(glorot_uniform(data.features.cols(), cfg.hidden, rng), "w1");
  Parameter b1(Matrix(1, cfg.hidden), "b1");
  Parameter w2(glorot_uniform(cfg.hidden, classes, rng), "w2");
  Parameter b2(Matrix(1, classes), "b2");
  Adam optimizer({&w1, &b1, &w2, &b2}, cfg.lr, cfg.weight_decay);

  auto forward = [&](Tape& tape, bool training) {
    Var x = tape.constant(data.features);
    if (training) x = dropout(x, cfg.dropout, rng);
    Var h = activation(add_row(propagate(p, matmul(x, tape.parameter(w1))), tape.parameter(b1)), Activation::relu);
    if (training) h = dropout(h, cfg.dropout, rng);
    return add_row(propagate(p, matmul(h, tape.parameter(w2))), tape.parameter(b2));
  };

  double best_val = -1.0;
  double test_at_best = 0.0;
  std::size_t since_best = 0;
  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    {
      Tape tape;
      Var loss = masked_cross_entropy(forward(tape, true), data.labels, sp.train);
      tape.backward(loss);
      optimizer.step();
    }
    Tape tape;
    const std::vector<int> pred = argmax_rows(forward(tape, false).value());
    const double val = classification_accuracy(pred, data.labels, sp.val);
    if (val > best_val) {
      best_val = val;
      test_at_best = classification_accuracy(pred, data.labels, sp.test);
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  return test_at_best;
}

ClassifyStats eval_classify(const Matrix& adjacency, const Dataset& data, const std::vector<std::uint64_t>& seeds,
                            const ClassifierConfig& cfg) {
  if (!data.splits) throw ConfigError("dataset '" + data.name + "' has no train/val/test splits");
  if (seeds.empty()) throw ConfigError("eval_classify: no seeds");
  ClassifyStats stats;
  for (std::uint64_t s : seeds) stats.per_seed.push_back(train_gcn_classifier(adjacency, data, s, cfg));
  const double n = static_cast<double>(seeds.size());
  stats.mean = std::accumulate(stats.per_seed.begin(), stats.per_seed.end(), 0.0) / n;
  double var = 0.0;
  for (double a : stats.per_seed) var += (a - stats.mean) * (a - stats.mean);
  stats.std = std::sqrt(var / n);
  return stats;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

std::size_t count_distinct_rows(const Matrix& m, std::size_t stop_at) {
  std::vector<std::size_t> order(m.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ra = m.row(a), rb = m.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  std::size_t distinct = m.rows() > 0 ? 1 : 0;
  for (std::size_t i = 1; i < order.size() && distinct < stop_at; ++i) {
    auto ra = m.row(order[i - 1]), rb = m.row(order[i]);
    if (!std::equal(ra.begin(), ra.end(), rb.begin())) ++distinct;
  }
  return distinct;
}

// Draws an index with probability proportional to weights (total > 0).
std::size_t sample_weighted(const std::vector<double>& weights, double total, Rng& rng) {
  const double r = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (r < acc) return i;
  }
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return i;
  return 0;
}

Matrix greedy_kmeanspp(const Matrix& x, std::size_t k, Rng& rng) {
  const std::size_t n = x.rows();
  const std::size_t trials = 2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));
  Matrix centers(k, x.cols());
  std::size_t first = rng.uniform_index(n);
  std::copy(x.row(first).begin(), x.row(first).end(), centers.row(0).begin());
  std::vector<double> closest(n);
  for (std::size_t i = 0; i < n; ++i) closest[i] = squared_distance(x.row(i), centers.row(0));
  double potential = std::accumulate(closest.begin(), closest.end(), 0.0);

  std::vector<double> candidate_dist(n);
  for (std::size_t c = 1; c < k; ++c) {
    std::size_t best = 0;
    double best_potential = std::numeric_limits<double>::infinity();
    std::vector<double> best_dist;
    for (std::size_t t = 0; t < trials; ++t) {
      const std::size_t cand = sample_weighted(closest, potential, rng);
      double pot = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        candidate_dist[i] = std::min(closest[i], squared_distance(x.row(i), x.row(cand)));
        pot += candidate_dist[i];
      }
      if (pot < best_potential) {
        best_potential = pot;
        best = cand;
        best_dist = candidate_dist;
      }
    }
    std::copy(x.row(best).begin(), x.row(best).end(), centers.row(c).begin());
    closest = std::move(best_dist);
    potential = best_potential;
  }
  return centers;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, std::size_t k, Rng& rng, std::size_t max_iter, double tol) {
  if (k == 0) throw ConfigError("kmeans: k must be positive");
  if (count_distinct_rows(points, k) < k) {
    throw DegenerateInputError("kmeans: fewer distinct points than the " + std::to_string(k) + " requested clusters");
  }
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  KMeansResult res;
  res.centroids = greedy_kmeanspp(points, k, rng);
  res.assignment.assign(n, 0);
  std::vector<double> dist(n);
  double previous = std::numeric_limits<double>::infinity();

  for (std::size_t it = 0; it < max_iter; ++it) {
    res.iterations = it + 1;
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (std::size_t c = 0; c < k; ++c) {
        const double dd = squared_distance(points.row(i), res.centroids.row(c));
        if (dd < best) {
          best = dd;
          arg = static_cast<int>(c);
        }
      }
      res.assignment[i] = arg;
      dist[i] = best;
      inertia += best;
    }
    res.inertia = inertia;
    if (previous - inertia <= tol * previous) break;
    previous = inertia;

    Matrix sums(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(res.assignment[i]);
      ++counts[c];
      auto s = sums.row(c);
      auto p = points.row(i);
      for (std::size_t j = 0; j < d; ++j) s[j] += p[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Empty cluster: restart it at the point farthest from its centroid.
        const auto far = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
        std::copy(points.row(far).begin(), points.row(far).end(), res.centroids.row(c).begin());
        dist[far] = 0.0;
        continue;
      }
      auto s = sums.row(c);
      auto out = res.centroids.row(c);
      for (std::size_t j = 0; j < d; ++j) out[j] = s[j] / static_cast<double>(counts[c]);
    }
  }
  return res;
}

std::vector<std::size_t> max_weight_assignment(const Matrix& weights) {
  // Hungarian algorithm with potentials on cost = -weight; 1-based internally.
  const std::size_t n = weights.rows();
  const std::size_t m = weights.cols();
  if (n > m) throw ContractError("max_weight_assignment: more rows than columns");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = -weights(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(n, 0);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  return assignment;
}

namespace {

// Labels remapped to 0..k-1 in order of first appearance of the sorted values.
std::vector<std::size_t> dense_labels(const std::vector<int>& labels, std::size_t& count) {
  std::map<int, std::size_t> ids;
  for (int l : labels) ids.emplace(l, 0);
  std::size_t next = 0;
  for (auto& [label, id] : ids) id = next++;
  count = next;
  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = ids[labels[i]];
  return out;
}

struct Contingency {
  std::vector<std::size_t> truth, cluster;
  std::size_t classes = 0, clusters = 0;
  Matrix table;  // classes x clusters counts
};

Contingency contingency(const std::vector<int>& truth, const std::vector<int>& clusters) {
  if (truth.size() != clusters.size()) throw ContractError("clustering metrics: length mismatch");
  if (truth.empty()) throw ContractError("clustering metrics: no samples");
  Contingency c;
  c.truth = dense_labels(truth, c.classes);
  c.cluster = dense_labels(clusters, c.clusters);
  c.table = Matrix(c.classes, c.clusters);
  for (std::size_t i = 0; i < truth.size(); ++i) c.table(c.truth[i], c.cluster[i]) += 1.0;
  return c;
}

// Class assigned to each cluster by maximum-weight matching; unmatched clusters map past the last class.
std::vector<std::size_t> match_clusters(const Contingency& c) {
  const std::size_t size = std::max(c.classes, c.clusters);
  Matrix w(size, size);
  for (std::size_t k = 0; k < c.clusters; ++k)
    for (std::size_t l = 0; l < c.classes; ++l) w(k, l) = c.table(l, k);
  std::vector<std::size_t> a = max_weight_assignment(w);
  a.resize(c.clusters);
  return a;
}

double comb2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

double clustering_accuracy(const std::vector<int>& truth, const std::vector<int>& clusters) {
  const Contingency c = contingency(truth, clusters);
  const std::vector<std::size_t> map = match_clusters(c);
  double hits = 0.0;
  for (std::size_t k = 0; k < c.clusters; ++k)
    if (map[k] < c.classes) hits += c.table(map[k], k);
  return hits / static_cast<double>(truth.size());
}

double normalized_mutual_info(const std::vector<int>& truth, const std::vector<int>& clusters) {
  const Contingency c = contingency(truth, clusters);
  const double n = static_cast<double>(truth.size());
  std::vector<double> a(c.classes, 0.0), b(c.clusters, 0.0);
  for (std::size_t l = 0; l < c.classes; ++l)
    for (std::size_t k = 0; k < c.clusters; ++k) {
      a[l] += c.table(l, k);
      b[k] += c.table(l, k);
    }
  auto entropy = [n](const std::vector<double>& counts) {
    double h = 0.0;
    for (double x : counts)
      if (x > 0.0) h -= (x / n) * std::log(x / n);
    return h;
  };
  const double ha = entropy(a), hb = entropy(b);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  double mi = 0.0;
  for (std::size_t l = 0; l < c.classes; ++l)
    for (std::size_t k = 0; k < c.clusters; ++k) {
      const double nij = c.table(l, k);
      if (nij > 0.0) mi += (nij / n) * std::log(n * nij / (a[l] * b[k]));
    }
  mi = std::max(mi, 0.0);
  return mi / (0.5 * (ha + hb));
}

double macro_f1_matched(const std::vector<int>& truth, const std::vector<int>& clusters) {
  const Contingency c = contingency(truth, clusters);
  const std::vector<std::size_t> map = match_clusters(c);
  const std::size_t labels = std::max(c.classes, c.clusters);
  std::vector<double> tp(labels, 0.0), predicted(labels, 0.0), actual(labels, 0.0);
  std::vector<char> present(labels, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const std::size_t pred = map[c.cluster[i]];
    const std::size_t t = c.truth[i];
    predicted[pred] += 1.0;
    actual[t] += 1.0;
    present[pred] = present[t] = 1;
    if (pred == t) tp[t] += 1.0;
  }
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t l = 0; l < labels; ++l) {
    if (!present[l]) continue;
    ++count;
    const double denom = predicted[l] + actual[l];
    if (denom > 0.0) total += 2.0 * tp[l] / denom;
  }
  return total / static_cast<double>(count);
}

double adjusted_rand_index(const std::vector<int>& truth, const std::vector<int>& clusters) {
  const Contingency c = contingency(truth, clusters);
  const double n = static_cast<double>(truth.size());
  double sum_cells = 0.0;
  std::vector<double> a(c.classes, 0.0), b(c.clusters, 0.0);
  for (std::size_t l = 0; l < c.classes; ++l)
    for (std::size_t k = 0; k < c.clusters; ++k) {
      sum_cells += comb2(c.table(l, k));
      a[l] += c.table(l, k);
      b[k] += c.table(l, k);
    }
  double sum_a = 0.0, sum_b = 0.0;
  for (double x : a) sum_a += comb2(x);
  for (double x : b) sum_b += comb2(x);
  const double expected = sum_a * sum_b / comb2(n);
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (sum_cells - expected) / (max_index - expected);
}

ClusterScores score_clustering(const std::vector<int>& truth, const std::vector<int>& clusters) {
  return {clustering_accuracy(truth, clusters), normalized_mutual_info(truth, clusters),
          macro_f1_matched(truth, clusters), adjusted_rand_index(truth, clusters)};
}

ClusterScores eval_cluster(ContrastiveModel& model, const Matrix& adjacency, const Matrix& features,
                           const std::vector<int>& labels, std::size_t runs, std::uint64_t seed) {
  if (runs == 0) throw ConfigError("eval_cluster: runs must be positive");
  if (labels.size() != features.rows()) throw DimensionError("eval_cluster: one label per node required");
  Matrix h;
  {
    Tape tape;
    h = gcn_encode(tape.constant(adjacency), tape.constant(features), model.encoder).value();
  }
  std::size_t k = 0;
  dense_labels(labels, k);
  Rng rng(seed);
  ClusterScores mean;
  for (std::size_t r = 0; r < runs; ++r) {
    const KMeansResult km = kmeans(h, k, rng);
    const ClusterScores s = score_clustering(labels, km.assignment);
    mean.cacc += s.cacc;
    mean.nmi += s.nmi;
    mean.f1 += s.f1;
    mean.ari += s.ari;
  }
  const double inv = 1.0 / static_cast<double>(runs);
  mean.cacc *= inv;
  mean.nmi *= inv;
  mean.f1 *= inv;
  mean.ari *= inv;
  return mean;
}

}  // namespace lg
