#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "learngraph/matrix.hpp"
#include "learngraph/rng.hpp"

namespace lg {

struct Splits {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

struct Dataset {
  std::string name;
  Matrix features;                   // n x d
  std::optional<Matrix> adjacency;   // n x n, symmetric
  std::vector<int> labels;           // n entries, 0-based classes
  std::optional<Splits> splits;

  std::size_t num_nodes() const { return features.rows(); }
  std::size_t num_classes() const;
};

/// Reads features.tsv, labels.tsv and the optional splits.json and edges.tsv from `dir`.
/// Edge lines are `i<TAB>j[<TAB>w]`; repeated lines add up and the two directions are
/// merged with max. Throws IoError for missing required files and ParseError naming the
/// file and line for malformed content.
Dataset load_dataset(const std::filesystem::path& dir);

/// Throws ContractError unless splits are in range and pairwise disjoint.
void validate_splits(const Splits& splits, std::size_t n);

/// Writes `adjacency` as `# n=<n>` followed by `i<TAB>j<TAB>w` for every nonzero entry with
/// i <= j, weights in 17 significant digits. Throws ContractError on asymmetric input.
void save_adjacency(const Matrix& adjacency, const std::filesystem::path& path);
Matrix load_adjacency(const std::filesystem::path& path);

/// Writes the upper-triangle edges of `adjacency` in the dataset edges.tsv format.
void save_edges(const Matrix& adjacency, const std::filesystem::path& path);

enum class PerturbMode { remove, add };

PerturbMode parse_perturb_mode(const std::string& name);

/// Number of undirected non-self edges (nonzero entries above the diagonal).
std::size_t count_edges(const Matrix& adjacency);

/// Deletes or inserts floor(rate * m) uniformly chosen undirected edges, m = count_edges(A).
/// Inserted edges get weight 1; self loops are never touched. Throws ConfigError unless
/// 0 <= rate <= 1 and ContractError when there are not enough absent pairs to add.
Matrix perturb_edges(const Matrix& adjacency, double rate, PerturbMode mode, Rng& rng);

}  // namespace lg
