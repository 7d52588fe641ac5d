#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "learngraph/contrastive.hpp"
#include "learngraph/data_io.hpp"

namespace lg {

/// Downstream classifier recipe.
struct ClassifierConfig {
  std::size_t hidden = 32;
  double lr = 0.01;
  double weight_decay = 5e-4;
  double dropout = 0.5;
  std::size_t max_epochs = 1000;
  std::size_t patience = 100;  // epochs without a strictly better validation accuracy
};

struct ClassifyStats {
  std::vector<double> per_seed;  // test accuracy per seed
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

/// Fraction of masked indices where pred == truth. Throws ContractError on an empty mask
/// or mismatched lengths.
double classification_accuracy(const std::vector<int>& pred, const std::vector<int>& truth,
                               const std::vector<std::size_t>& mask);

/// Trains a two-layer GCN on (adjacency, features) and returns the test accuracy at the
/// epoch with the best validation accuracy. `adjacency` is used as a constant and
/// normalized with self loops.
double train_gcn_classifier(const Matrix& adjacency, const Dataset& data, std::uint64_t seed,
                            const ClassifierConfig& cfg = {});

/// train_gcn_classifier once per seed. Throws ConfigError when the dataset has no splits.
ClassifyStats eval_classify(const Matrix& adjacency, const Dataset& data, const std::vector<std::uint64_t>& seeds,
                            const ClassifierConfig& cfg = {});

struct KMeansResult {
  std::vector<int> assignment;
  Matrix centroids;
  double inertia = 0.0;
  std::size_t iterations = 0;
};

/// Lloyd's algorithm from a greedy k-means++ start; stops after `max_iter` rounds or when
/// inertia improves by less than `tol` relative. Throws DegenerateInputError when there are
/// fewer distinct points than clusters.
KMeansResult kmeans(const Matrix& points, std::size_t k, Rng& rng, std::size_t max_iter = 300, double tol = 1e-6);

struct ClusterScores {
  double cacc = 0.0;
  double nmi = 0.0;
  double f1 = 0.0;
  double ari = 0.0;
};

/// assignment[r] = column matched to row r, maximizing the total weight (rows <= cols).
std::vector<std::size_t> max_weight_assignment(const Matrix& weights);

ClusterScores score_clustering(const std::vector<int>& truth, const std::vector<int>& clusters);
double clustering_accuracy(const std::vector<int>& truth, const std::vector<int>& clusters);
double normalized_mutual_info(const std::vector<int>& truth, const std::vector<int>& clusters);
double macro_f1_matched(const std::vector<int>& truth, const std::vector<int>& clusters);
double adjusted_rand_index(const std::vector<int>& truth, const std::vector<int>& clusters);

/// Encodes (adjacency, features) without augmentation and clusters the representations
/// into #classes groups `runs` times; scores are averaged over runs.
ClusterScores eval_cluster(ContrastiveModel& model, const Matrix& adjacency, const Matrix& features,
                           const std::vector<int>& labels, std::size_t runs, std::uint64_t seed);

}  // namespace lg
