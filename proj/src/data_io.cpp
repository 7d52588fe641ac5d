#include "learngraph/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "learngraph/errors.hpp"

namespace lg {

namespace fs = std::filesystem;

std::size_t Dataset::num_classes() const {
  int top = -1;
  for (int y : labels) top = std::max(top, y);
  return static_cast<std::size_t>(top + 1);
}

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

bool skip_line(std::string_view line) { return line.empty() || line.front() == '#'; }

std::string where(const fs::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

double parse_real(std::string_view text, const fs::path& path, std::size_t line) {
  std::string s(text);
  if (!s.empty() && s.back() == '\r') s.pop_back();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ParseError(where(path, line) + ": expected a real number, got '" + s + "'");
  }
  if (!std::isfinite(v)) throw ParseError(where(path, line) + ": non-finite value '" + s + "'");
  return v;
}

long long parse_integer(std::string_view text, const fs::path& path, std::size_t line) {
  if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(where(path, line) + ": expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::size_t parse_index(std::string_view text, std::size_t n, const fs::path& path, std::size_t line) {
  const long long v = parse_integer(text, path, line);
  if (v < 0 || static_cast<std::size_t>(v) >= n) {
    throw ParseError(where(path, line) + ": index " + std::to_string(v) + " out of range for " +
                     std::to_string(n) + " nodes");
  }
  return static_cast<std::size_t>(v);
}

Matrix read_features(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<double> data;
  std::size_t cols = 0, rows = 0, lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    auto fields = split_tabs(line);
    if (rows == 0) {
      cols = fields.size();
    } else if (fields.size() != cols) {
      throw ParseError(where(path, lineno) + ": expected " + std::to_string(cols) + " columns, got " +
                       std::to_string(fields.size()));
    }
    for (auto f : fields) data.push_back(parse_real(f, path, lineno));
    ++rows;
  }
  if (rows == 0) throw ParseError(path.string() + ": no feature rows");
  return Matrix(rows, cols, std::move(data));
}

std::vector<int> read_labels(const fs::path& path, std::size_t n) {
  std::ifstream in = open_input(path);
  std::vector<int> labels;
  std::size_t lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    const long long v = parse_integer(line, path, lineno);
    if (v < 0 || v > 1'000'000) throw ParseError(where(path, lineno) + ": label must be a small nonnegative integer");
    labels.push_back(static_cast<int>(v));
  }
  if (labels.size() != n) {
    throw ParseError(path.string() + ": " + std::to_string(labels.size()) + " labels for " + std::to_string(n) +
                     " feature rows");
  }
  return labels;
}

Splits read_splits(const fs::path& path, std::size_t n) {
  std::ifstream in = open_input(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  auto list = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_array()) throw ParseError(path.string() + ": missing list '" + key + "'");
    std::vector<std::size_t> out;
    for (const auto& v : doc[key]) {
      if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<std::size_t>() >= n) {
        throw ParseError(path.string() + ": bad index " + v.dump() + " in '" + key + "'");
      }
      out.push_back(v.get<std::size_t>());
    }
    return out;
  };
  Splits s{list("train"), list("val"), list("test")};
  try {
    validate_splits(s, n);
  } catch (const ContractError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return s;
}

Matrix read_edges(const fs::path& path, std::size_t n) {
  std::ifstream in = open_input(path);
  Matrix directed(n, n);
  std::size_t lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError(where(path, lineno) + ": expected i<TAB>j[<TAB>w]");
    }
    const std::size_t i = parse_index(fields[0], n, path, lineno);
    const std::size_t j = parse_index(fields[1], n, path, lineno);
    const double w = fields.size() == 3 ? parse_real(fields[2], path, lineno) : 1.0;
    if (w < 0.0) throw ParseError(where(path, lineno) + ": negative edge weight");
    directed(i, j) += w;
  }
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = std::max(directed(i, j), directed(j, i));
  return a;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

void validate_splits(const Splits& splits, std::size_t n) {
  std::vector<char> seen(n, 0);
  for (const auto* part : {&splits.train, &splits.val, &splits.test}) {
    for (std::size_t i : *part) {
      if (i >= n) throw ContractError("split index " + std::to_string(i) + " out of range");
      if (seen[i]) throw ContractError("split index " + std::to_string(i) + " appears twice");
      seen[i] = 1;
    }
  }
}

Dataset load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("dataset directory not found: " + dir.string());
  Dataset ds;
  ds.name = fs::absolute(dir).lexically_normal().filename().string();
  if (ds.name.empty()) ds.name = fs::absolute(dir).lexically_normal().parent_path().filename().string();
  ds.features = read_features(dir / "features.tsv");
  const std::size_t n = ds.features.rows();
  ds.labels = read_labels(dir / "labels.tsv", n);
  if (fs::exists(dir / "splits.json")) ds.splits = read_splits(dir / "splits.json", n);
  if (fs::exists(dir / "edges.tsv")) ds.adjacency = read_edges(dir / "edges.tsv", n);
  return ds;
}

void save_adjacency(const Matrix& adjacency, const fs::path& path) {
  if (!adjacency.is_square() || !is_symmetric(adjacency)) {
    throw ContractError("save_adjacency: matrix must be square and symmetric");
  }
  std::ofstream out = open_output(path);
  const std::size_t n = adjacency.rows();
  out << "# n=" << n << '\n';
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (adjacency(i, j) != 0.0) out << i << '\t' << j << '\t' << format_real(adjacency(i, j)) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

Matrix load_adjacency(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# n=", 0) != 0) {
    throw ParseError(where(path, 1) + ": expected header '# n=<nodes>'");
  }
  const long long n = parse_integer(std::string_view(line).substr(4), path, 1);
  if (n < 0) throw ParseError(where(path, 1) + ": negative node count");
  Matrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3) throw ParseError(where(path, lineno) + ": expected i<TAB>j<TAB>w");
    const std::size_t i = parse_index(fields[0], a.rows(), path, lineno);
    const std::size_t j = parse_index(fields[1], a.rows(), path, lineno);
    const double w = parse_real(fields[2], path, lineno);
    a(i, j) = w;
    a(j, i) = w;
  }
  return a;
}

void save_edges(const Matrix& adjacency, const fs::path& path) {
  std::ofstream out = open_output(path);
  for (std::size_t i = 0; i < adjacency.rows(); ++i)
    for (std::size_t j = i + 1; j < adjacency.cols(); ++j)
      if (adjacency(i, j) != 0.0) out << i << '\t' << j << '\t' << format_real(adjacency(i, j)) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

PerturbMode parse_perturb_mode(const std::string& name) {
  if (name == "delete" || name == "remove") return PerturbMode::remove;
  if (name == "add") return PerturbMode::add;
  throw ConfigError("unknown perturbation mode '" + name + "' (expected delete or add)");
}

std::size_t count_edges(const Matrix& adjacency) {
  std::size_t m = 0;
  for (std::size_t i = 0; i < adjacency.rows(); ++i)
    for (std::size_t j = i + 1; j < adjacency.cols(); ++j)
      if (adjacency(i, j) != 0.0) ++m;
  return m;
}

Matrix perturb_edges(const Matrix& adjacency, double rate, PerturbMode mode, Rng& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw ConfigError("perturb_edges: rate must lie in [0, 1]");
  if (!adjacency.is_square() || !is_symmetric(adjacency)) {
    throw ContractError("perturb_edges: adjacency must be square and symmetric");
  }
  const std::size_t n = adjacency.rows();
  const std::size_t m = count_edges(adjacency);
  const auto target = static_cast<std::size_t>(std::floor(rate * static_cast<double>(m)));
  Matrix out = adjacency;
  if (target == 0) return out;

  // Candidate pairs (i < j): existing edges for deletion, absent pairs for insertion.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pool;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((adjacency(i, j) != 0.0) == (mode == PerturbMode::remove))
        pool.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  if (pool.size() < target) {
    throw ContractError("perturb_edges: only " + std::to_string(pool.size()) + " absent pairs, cannot add " +
                        std::to_string(target));
  }
  // Partial Fisher-Yates: the first `target` slots become a uniform sample.
  for (std::size_t r = 0; r < target; ++r) {
    const std::size_t pick = r + rng.uniform_index(pool.size() - r);
    std::swap(pool[r], pool[pick]);
    const auto [i, j] = pool[r];
    const double w = mode == PerturbMode::remove ? 0.0 : 1.0;
    out(i, j) = w;
    out(j, i) = w;
  }
  return out;
}

}  // namespace lg
