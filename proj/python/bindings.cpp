#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "learngraph/config.hpp"
#include "learngraph/data_io.hpp"
#include "learngraph/errors.hpp"
#include "learngraph/evaluation.hpp"
#include "learngraph/knn.hpp"
#include "learngraph/post_process.hpp"
#include "learngraph/trainer.hpp"

namespace py = pybind11;
using lg::Matrix;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw lg::DimensionError("expected a 2-d array, got " + std::to_string(a.ndim()) + "-d");
  Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  if (m.size() != 0) std::memcpy(m.data(), a.data(), m.size() * sizeof(double));
  return m;
}

Array to_array(const Matrix& m) {
  Array out({m.rows(), m.cols()});
  if (m.size() != 0) std::memcpy(out.mutable_data(), m.data(), m.size() * sizeof(double));
  return out;
}

// Keyword options go through the same parser as config files.
lg::RunConfig run_config(const py::kwargs& options) {
  lg::RunConfig cfg;
  for (const auto& [key, value] : options) lg::set_config_value(cfg, py::str(key), py::str(value));
  if (!cfg.seeds.empty()) cfg.train.seed = cfg.seeds.front();
  cfg.train.validate();
  return cfg;
}

py::dict dataset_dict(const lg::Dataset& d) {
  py::dict out;
  out["name"] = d.name;
  out["features"] = to_array(d.features);
  out["labels"] = d.labels;
  out["adjacency"] = d.adjacency ? py::object(to_array(*d.adjacency)) : py::object(py::none());
  if (d.splits) {
    py::dict s;
    s["train"] = d.splits->train;
    s["val"] = d.splits->val;
    s["test"] = d.splits->test;
    out["splits"] = s;
  } else {
    out["splits"] = py::none();
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Contrastive graph structure learning on a dense float64 core.";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const lg::IoError& e) {
      PyErr_SetString(PyExc_OSError, e.what());
    } catch (const lg::NumericalError& e) {
      PyErr_SetString(PyExc_ArithmeticError, e.what());
    }
  });

  m.def("build_knn_graph", [](const Array& x, std::size_t k) { return to_array(lg::build_knn_graph(to_matrix(x), k)); },
        py::arg("features"), py::arg("k"), "Normalized cosine kNN graph.");

  m.def(
      "process",
      [](const Array& sketch, std::size_t k, const std::string& learner) {
        lg::Tape tape;
        return to_array(lg::process(tape.constant(to_matrix(sketch)), k, lg::parse_learner_kind(learner)).value());
      },
      py::arg("sketch"), py::arg("k"), py::arg("learner") = "mlp",
      "Top-k (skipped for fgp), activation, symmetrization and degree normalization.");

  m.def(
      "nt_xent",
      [](const Array& zl, const Array& za, double temperature) {
        lg::Tape tape;
        return lg::nt_xent(tape.constant(to_matrix(zl)), tape.constant(to_matrix(za)), temperature).value()(0, 0);
      },
      py::arg("z_learner"), py::arg("z_anchor"), py::arg("temperature"));

  m.def(
      "bootstrap_update",
      [](const Array& anchor, const Array& learned, double tau) {
        return to_array(lg::bootstrap_update(to_matrix(anchor), to_matrix(learned), tau));
      },
      py::arg("anchor"), py::arg("learned"), py::arg("tau"));

  m.def(
      "train",
      [](const Array& features, std::optional<Array> adjacency, const py::kwargs& options) {
        lg::RunConfig cfg = run_config(options);
        const Matrix x = to_matrix(features);
        std::optional<Matrix> a;
        if (adjacency) a = to_matrix(*adjacency);
        lg::TrainResult r;
        {
          py::gil_scoped_release release;
          r = lg::train(x, a ? &*a : nullptr, cfg.train);
        }
        py::dict out;
        out["learned"] = to_array(r.learned);
        out["anchor"] = to_array(r.anchor);
        out["losses"] = r.losses;
        out["log"] = r.log;
        out["clamped_rows"] = r.diagnostics.clamped_rows;
        return out;
      },
      py::arg("features"), py::arg("adjacency") = py::none(),
      "Runs the contrastive training loop. Keyword options use the config file keys.");

  m.def("load_dataset", [](const std::filesystem::path& dir) { return dataset_dict(lg::load_dataset(dir)); },
        py::arg("path"));

  m.def(
      "eval_classify",
      [](const Array& adjacency, const std::filesystem::path& dataset, const std::vector<std::uint64_t>& seeds,
         const py::kwargs& options) {
        lg::RunConfig cfg = run_config(options);
        const lg::Dataset data = lg::load_dataset(dataset);
        const Matrix a = to_matrix(adjacency);
        lg::ClassifyStats s;
        {
          py::gil_scoped_release release;
          s = lg::eval_classify(a, data, seeds, cfg.classifier);
        }
        py::dict out;
        out["per_seed"] = s.per_seed;
        out["mean"] = s.mean;
        out["std"] = s.std;
        return out;
      },
      py::arg("adjacency"), py::arg("dataset"), py::arg("seeds") = std::vector<std::uint64_t>{0, 1, 2, 3, 4},
      "Downstream GCN test accuracy on a fixed structure. Keyword options use the clf_* config keys.");

  m.def(
      "score_clustering",
      [](const std::vector<int>& truth, const std::vector<int>& clusters) {
        const lg::ClusterScores s = lg::score_clustering(truth, clusters);
        py::dict out;
        out["cacc"] = s.cacc;
        out["nmi"] = s.nmi;
        out["f1"] = s.f1;
        out["ari"] = s.ari;
        return out;
      },
      py::arg("truth"), py::arg("clusters"));

  m.def("config_keys", &lg::config_keys);
}
