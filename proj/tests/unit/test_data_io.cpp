#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "learngraph/data_io.hpp"
#include "learngraph/errors.hpp"
#include "support/testing.hpp"

using namespace lg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("lg_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path / name) << text; }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("load the toy fixture") {
  Dataset ds = load_dataset(LG_FIXTURE_DIR "/toy");
  CHECK(ds.name == "toy");
  CHECK(ds.num_nodes() == 6);
  CHECK(ds.num_classes() == 2);
  REQUIRE(ds.adjacency);
  CHECK((*ds.adjacency)(0, 1) == 1.0);
  CHECK((*ds.adjacency)(1, 0) == 1.0);
  CHECK((*ds.adjacency)(4, 0) == 0.5);
  CHECK(ds.splits->test == std::vector<std::size_t>{4, 5});
}

TEST_CASE("two-node directory and edge merging") {
  TempDir dir("two");
  dir.write("features.tsv", "1\t2\n3\t4\n");
  dir.write("labels.tsv", "0\n1\n");
  Dataset plain = load_dataset(dir.path);
  CHECK(plain.num_nodes() == 2);
  CHECK(!plain.adjacency);
  CHECK(!plain.splits);

  dir.write("edges.tsv", "0\t1\t0.25\n");
  Dataset once = load_dataset(dir.path);
  CHECK((*once.adjacency)(0, 1) == 0.25);
  CHECK((*once.adjacency)(1, 0) == 0.25);

  // duplicates add up, then the larger direction wins
  dir.write("edges.tsv", "0\t1\t0.25\n0\t1\t0.25\n1\t0\t0.3\n");
  Dataset merged = load_dataset(dir.path);
  CHECK((*merged.adjacency)(0, 1) == 0.5);
  CHECK((*merged.adjacency)(1, 0) == 0.5);
}

TEST_CASE("parse errors name the line") {
  TempDir dir("bad");
  dir.write("labels.tsv", "0\n1\n");
  dir.write("features.tsv", "1\t2\n3\n");
  CHECK_THROWS_WITH_AS(load_dataset(dir.path), doctest::Contains("features.tsv:2"), ParseError);
  dir.write("features.tsv", "1\t2\n3\tnan\n");
  CHECK_THROWS_WITH_AS(load_dataset(dir.path), doctest::Contains("features.tsv:2"), ParseError);
  dir.write("features.tsv", "1\t2\n3\t4\n");
  dir.write("edges.tsv", "0\t1\n1\t7\n");
  CHECK_THROWS_WITH_AS(load_dataset(dir.path), doctest::Contains("edges.tsv:2"), ParseError);
  dir.write("edges.tsv", "0\t1\n");
  dir.write("splits.json", R"({"train": [0], "val": [0], "test": [1]})");
  CHECK_THROWS_AS(load_dataset(dir.path), ParseError);
  fs::remove(dir.path / "features.tsv");
  CHECK_THROWS_AS(load_dataset(dir.path), IoError);
}

TEST_CASE("adjacency round trip") {
  TempDir dir("adj");
  Rng rng(1);
  Matrix a = lg::testing::random_symmetric(7, rng);
  a(2, 5) = a(5, 2) = 0.0;
  save_adjacency(a, dir.path / "a.tsv");
  CHECK(load_adjacency(dir.path / "a.tsv") == a);

  save_adjacency(Matrix(3, 3), dir.path / "empty.tsv");
  CHECK(read_file(dir.path / "empty.tsv") == "# n=3\n");
  CHECK(load_adjacency(dir.path / "empty.tsv") == Matrix(3, 3));

  Matrix one(2, 2);
  one(0, 1) = one(1, 0) = 0.25;
  save_adjacency(one, dir.path / "one.tsv");
  CHECK(read_file(dir.path / "one.tsv") == "# n=2\n0\t1\t0.25\n");

  CHECK_THROWS_AS(save_adjacency(Matrix::from_rows({{0, 1}, {0, 0}}), dir.path / "x.tsv"), ContractError);
  CHECK_THROWS_AS(save_adjacency(a, dir.path / "missing" / "x.tsv"), IoError);
  CHECK_THROWS_AS(load_adjacency(dir.path / "nope.tsv"), IoError);
}

TEST_CASE("perturb_edges") {
  Matrix ring(10, 10);
  for (std::size_t i = 0; i < 10; ++i) {
    ring(i, (i + 1) % 10) = ring((i + 1) % 10, i) = 1.0;
  }
  Rng rng(2);
  CHECK(count_edges(ring) == 10);
  CHECK(perturb_edges(ring, 0.0, PerturbMode::remove, rng) == ring);

  Matrix half = perturb_edges(ring, 0.5, PerturbMode::remove, rng);
  CHECK(count_edges(half) == 5);
  CHECK(is_symmetric(half));
  for (std::size_t i = 0; i < half.size(); ++i) CHECK((half.values()[i] == 0.0 || ring.values()[i] != 0.0));

  Matrix none = perturb_edges(ring, 1.0, PerturbMode::remove, rng);
  CHECK(count_edges(none) == 0);

  Matrix more = perturb_edges(ring, 0.5, PerturbMode::add, rng);
  CHECK(count_edges(more) == 15);
  for (std::size_t i = 0; i < ring.size(); ++i) CHECK((ring.values()[i] == 0.0 || more.values()[i] != 0.0));
  for (std::size_t i = 0; i < 10; ++i) CHECK(more(i, i) == 0.0);

  Rng a(7), b(7);
  CHECK(perturb_edges(ring, 0.3, PerturbMode::remove, a) == perturb_edges(ring, 0.3, PerturbMode::remove, b));

  Matrix full = Matrix::ones(4, 4);
  CHECK_THROWS_AS(perturb_edges(full, 0.5, PerturbMode::add, rng), ContractError);
  CHECK_THROWS_AS(perturb_edges(ring, 1.5, PerturbMode::remove, rng), ConfigError);
  CHECK(parse_perturb_mode("delete") == PerturbMode::remove);
}
