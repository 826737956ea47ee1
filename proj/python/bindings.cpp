#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zol/advtrain.hpp"
#include "zol/attack.hpp"
#include "zol/baselines.hpp"
#include "zol/dataset.hpp"
#include "zol/loss.hpp"
#include "zol/mlp01.hpp"
#include "zol/parallel.hpp"
#include "zol/scd01.hpp"
#include "zol/serialize.hpp"

namespace py = pybind11;
using namespace zol;

namespace {

Dataset dataset_from_arrays(py::array_t<float, py::array::c_style | py::array::forcecast> features,
                            py::array_t<std::int8_t, py::array::c_style | py::array::forcecast>
                                labels) {
  if (features.ndim() != 2) throw ArgumentError("features must be a 2-D array");
  if (labels.ndim() != 1) throw ArgumentError("labels must be a 1-D array");
  Dataset ds;
  ds.n = static_cast<std::size_t>(features.shape(0));
  ds.d = static_cast<std::size_t>(features.shape(1));
  ds.features.assign(features.data(), features.data() + ds.n * ds.d);
  ds.labels.assign(labels.data(), labels.data() + labels.shape(0));
  ds.validate();
  return ds;
}

py::array features_array(const Dataset& ds) {
  py::array_t<float> out({ds.n, ds.d});
  std::copy(ds.features.begin(), ds.features.end(), out.mutable_data());
  return out;
}

py::array labels_array(const Dataset& ds) {
  py::array_t<std::int8_t> out(static_cast<py::ssize_t>(ds.n));
  std::copy(ds.labels.begin(), ds.labels.end(), out.mutable_data());
  return out;
}

std::vector<float> row_from_array(
    py::array_t<float, py::array::c_style | py::array::forcecast> x) {
  if (x.ndim() != 1) throw ArgumentError("expected a 1-D feature vector");
  return {x.data(), x.data() + x.shape(0)};
}

Predictor predictor_from_python(py::object target) {
  // C++ models pass through untouched; anything callable becomes a
  // query-only closure.
  try {
    return predictor_of(target.cast<AnyModel>());
  } catch (const py::cast_error&) {
  }
  if (!py::isinstance<py::function>(target) && !py::hasattr(target, "__call__"))
    throw ArgumentError("target must be a zol model or a callable");
  py::function fn = target;
  return [fn](std::span<const float> x) {
    py::array_t<float> arr(static_cast<py::ssize_t>(x.size()));
    std::copy(x.begin(), x.end(), arr.mutable_data());
    return py::cast<int>(fn(arr));
  };
}

template <class Model>
void bind_ensemble(py::module_& m, const char* name) {
  py::class_<Ensemble<Model>>(m, name)
      .def(py::init<>())
      .def_readonly("members", &Ensemble<Model>::members)
      .def("predict",
           [](const Ensemble<Model>& e, py::array_t<float, py::array::c_style |
                                                              py::array::forcecast> x) {
             const auto row = row_from_array(x);
             return e.predict(row);
           })
      .def("__len__", [](const Ensemble<Model>& e) { return e.members.size(); });
}

AnyModel as_any(py::object model) {
  return model.cast<AnyModel>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linear and single-hidden-layer 01-loss solvers with convex "
            "baselines and a black-box attack harness";

  py::register_exception<Error>(m, "ZolError");

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&dataset_from_arrays), py::arg("features"), py::arg("labels"))
      .def_property_readonly("features", &features_array)
      .def_property_readonly("labels", &labels_array)
      .def_readonly("n", &Dataset::n)
      .def_readonly("d", &Dataset::d)
      .def("validate", &Dataset::validate);

  py::class_<SplitSpec>(m, "SplitSpec")
      .def(py::init<>())
      .def_readwrite("train_fraction", &SplitSpec::train_fraction)
      .def_readwrite("seed", &SplitSpec::seed)
      .def_readwrite("stratified", &SplitSpec::stratified);

  m.def("load_idx", &load_idx, py::arg("image_path"), py::arg("label_path"), py::arg("class_a"),
        py::arg("class_b"));
  m.def("save_idx", &save_idx, py::arg("dataset"), py::arg("image_path"), py::arg("label_path"),
        py::arg("class_neg"), py::arg("class_pos"), py::arg("rows"), py::arg("cols"));
  m.def("load_matrix", &load_matrix, py::arg("feature_path"), py::arg("label_path"));
  m.def("save_matrix", &save_matrix, py::arg("dataset"), py::arg("feature_path"),
        py::arg("label_path"));
  m.def("gen_simple", &gen_simple, py::arg("n_per_class"), py::arg("gap"), py::arg("seed"));
  m.def("gen_complex", &gen_complex, py::arg("n_per_class"), py::arg("overlap"), py::arg("seed"));
  m.def("split", &split, py::arg("dataset"), py::arg("spec"));
  m.def("set_max_threads", &set_max_threads, py::arg("n"));

  py::class_<Hyperplane>(m, "Hyperplane")
      .def(py::init<>())
      .def_readwrite("w", &Hyperplane::w)
      .def_readwrite("w0", &Hyperplane::w0)
      .def("predict",
           [](const Hyperplane& h,
              py::array_t<float, py::array::c_style | py::array::forcecast> x) {
             return h.predict(row_from_array(x));
           })
      .def("norm", &Hyperplane::norm)
      .def("normalized", &Hyperplane::normalized);

  py::class_<Mlp01Model>(m, "Mlp01Model")
      .def(py::init<>())
      .def_readonly("d", &Mlp01Model::d)
      .def_readonly("h", &Mlp01Model::h)
      .def_readwrite("W", &Mlp01Model::W)
      .def_readwrite("W0", &Mlp01Model::W0)
      .def_readwrite("u", &Mlp01Model::u)
      .def_readwrite("u0", &Mlp01Model::u0)
      .def("predict", [](const Mlp01Model& mm, py::array_t<float, py::array::c_style |
                                                                      py::array::forcecast> x) {
        return mm.predict(row_from_array(x));
      });

  py::class_<LinearSvmModel>(m, "LinearSvmModel")
      .def(py::init<>())
      .def_readwrite("w", &LinearSvmModel::w)
      .def_readwrite("w0", &LinearSvmModel::w0)
      .def_readwrite("reg_lambda", &LinearSvmModel::reg_lambda)
      .def("predict",
           [](const LinearSvmModel& mm,
              py::array_t<float, py::array::c_style | py::array::forcecast> x) {
             return mm.predict(row_from_array(x));
           })
      .def("as_unit_hyperplane", &LinearSvmModel::as_unit_hyperplane);

  py::class_<LogisticMlpModel>(m, "LogisticMlpModel")
      .def(py::init<>())
      .def_readonly("layer_sizes", &LogisticMlpModel::layer_sizes)
      .def("predict",
           [](const LogisticMlpModel& mm,
              py::array_t<float, py::array::c_style | py::array::forcecast> x) {
             return mm.predict(row_from_array(x));
           })
      .def("logit", [](const LogisticMlpModel& mm, py::array_t<float, py::array::c_style |
                                                                          py::array::forcecast>
                                                        x) {
        return mm.logit(row_from_array(x));
      });

  bind_ensemble<Hyperplane>(m, "ScdEnsemble");
  bind_ensemble<Mlp01Model>(m, "Mlp01Ensemble");
  bind_ensemble<LinearSvmModel>(m, "SvmEnsemble");
  bind_ensemble<LogisticMlpModel>(m, "LogMlpEnsemble");

  py::class_<ScdConfig>(m, "ScdConfig")
      .def(py::init<>())
      .def_readwrite("w_inc", &ScdConfig::w_inc)
      .def_readwrite("pool_size", &ScdConfig::pool_size)
      .def_readwrite("window_half_width", &ScdConfig::window_half_width)
      .def_readwrite("outer_iters", &ScdConfig::outer_iters)
      .def_readwrite("batch_fraction", &ScdConfig::batch_fraction)
      .def_readwrite("votes", &ScdConfig::votes)
      .def_readwrite("seed", &ScdConfig::seed);

  py::class_<Mlp01Config>(m, "Mlp01Config")
      .def(py::init<>())
      .def_readwrite("hidden", &Mlp01Config::hidden)
      .def_readwrite("votes", &Mlp01Config::votes)
      .def_readwrite("iters_per_vote", &Mlp01Config::iters_per_vote)
      .def_readwrite("batch_fraction", &Mlp01Config::batch_fraction)
      .def_readwrite("w_inc", &Mlp01Config::w_inc)
      .def_readwrite("w_inc2", &Mlp01Config::w_inc2)
      .def_readwrite("pool_size", &Mlp01Config::pool_size)
      .def_readwrite("seed", &Mlp01Config::seed);

  py::class_<LogisticMlpConfig>(m, "LogisticMlpConfig")
      .def(py::init<>())
      .def_readwrite("hidden", &LogisticMlpConfig::hidden)
      .def_readwrite("lr", &LogisticMlpConfig::lr)
      .def_readwrite("epochs", &LogisticMlpConfig::epochs)
      .def_readwrite("batch_size", &LogisticMlpConfig::batch_size)
      .def_readwrite("seed", &LogisticMlpConfig::seed);

  py::class_<AttackConfig>(m, "AttackConfig")
      .def(py::init<>())
      .def_readwrite("epsilon", &AttackConfig::epsilon)
      .def_readwrite("epochs", &AttackConfig::epochs)
      .def_readwrite("seed_count", &AttackConfig::seed_count)
      .def_readwrite("substitute_layers", &AttackConfig::substitute_layers)
      .def_readwrite("augment_lambda", &AttackConfig::augment_lambda)
      .def_readwrite("max_seed_set", &AttackConfig::max_seed_set)
      .def_readwrite("seed", &AttackConfig::seed)
      .def_readwrite("substitute_lr", &AttackConfig::substitute_lr)
      .def_readwrite("substitute_epochs", &AttackConfig::substitute_epochs)
      .def_readwrite("substitute_batch", &AttackConfig::substitute_batch);

  py::class_<AdvTrainConfig>(m, "AdvTrainConfig")
      .def(py::init<>())
      .def_readwrite("iterations", &AdvTrainConfig::iterations)
      .def_readwrite("sample_fraction", &AdvTrainConfig::sample_fraction)
      .def_readwrite("overshoot", &AdvTrainConfig::overshoot)
      .def_readwrite("seed", &AdvTrainConfig::seed)
      .def_readwrite("vote_all", &AdvTrainConfig::vote_all)
      .def_readwrite("accumulate", &AdvTrainConfig::accumulate);

  py::class_<AttackEpochRecord>(m, "AttackEpochRecord")
      .def_readonly("epoch", &AttackEpochRecord::epoch)
      .def_readonly("target_adv_accuracy", &AttackEpochRecord::target_adv_accuracy)
      .def_readonly("substitute_test_accuracy", &AttackEpochRecord::substitute_test_accuracy)
      .def_readonly("seed_set_size", &AttackEpochRecord::seed_set_size);

  py::class_<AttackTrace>(m, "AttackTrace")
      .def_readonly("records", &AttackTrace::records)
      .def_readonly("valid", &AttackTrace::valid)
      .def_readonly("epsilon", &AttackTrace::epsilon)
      .def("clean_accuracy", &AttackTrace::clean_accuracy)
      .def("final_adv_accuracy", &AttackTrace::final_adv_accuracy);

  m.def("loss01_linear", &loss01_linear, py::arg("hyperplane"), py::arg("dataset"));
  m.def("loss01_mlp", &loss01_mlp, py::arg("model"), py::arg("dataset"));

  m.def(
      "train_scd01",
      [](const Dataset& train, const ScdConfig& cfg) {
        Rng rng(cfg.seed);
        return train_scd01(train, cfg, rng);
      },
      py::arg("train"), py::arg("config"));
  m.def("train_scd01_majvote", &train_scd01_majvote, py::arg("train"), py::arg("config"));
  m.def(
      "train_mlp01_single",
      [](const Dataset& train, const Mlp01Config& cfg) {
        Rng rng(cfg.seed);
        return train_mlp01_single(train, cfg, rng);
      },
      py::arg("train"), py::arg("config"));
  m.def("train_mlp01", &train_mlp01, py::arg("train"), py::arg("config"));
  m.def("train_hinge", &train_hinge, py::arg("train"), py::arg("reg_lambda") = 1e-4,
        py::arg("epochs") = 50, py::arg("seed") = 0);
  m.def(
      "train_logistic_mlp",
      [](const Dataset& train, const LogisticMlpConfig& cfg) {
        return train_logistic_mlp(train, cfg);
      },
      py::arg("train"), py::arg("config"));
  m.def(
      "input_gradient",
      [](const LogisticMlpModel& model,
         py::array_t<float, py::array::c_style | py::array::forcecast> x, int y) {
        return input_gradient(model, row_from_array(x), y);
      },
      py::arg("model"), py::arg("x"), py::arg("y"));

  m.def(
      "accuracy",
      [](py::object model, const Dataset& ds) {
        return accuracy(predictor_from_python(std::move(model)), ds);
      },
      py::arg("model"), py::arg("dataset"));

  m.def(
      "blackbox_attack",
      [](py::object target, const Dataset& test, const AttackConfig& cfg,
         bool return_adv) -> py::object {
        Dataset adv;
        auto trace =
            blackbox_attack(predictor_from_python(std::move(target)), test, cfg, &adv);
        if (return_adv) return py::make_tuple(trace, adv);
        return py::make_tuple(trace, py::none());
      },
      py::arg("target"), py::arg("test"), py::arg("config"), py::arg("return_adversaries") = false);
  m.def("whitebox_linear_attack", &whitebox_linear_attack, py::arg("hyperplane"),
        py::arg("dataset"), py::arg("overshoot") = 0.001, py::arg("clip") = true);
  m.def(
      "scd01_substitute_attack",
      [](py::object target, const Dataset& test, const AttackConfig& cfg,
         const ScdConfig& sub_cfg) {
        return scd01_substitute_attack(predictor_from_python(std::move(target)), test, cfg,
                                       sub_cfg);
      },
      py::arg("target"), py::arg("test"), py::arg("config"), py::arg("substitute_config"));
  m.def(
      "transfer_matrix",
      [](const std::vector<std::pair<std::string, py::object>>& models, const Dataset& test,
         const AttackConfig& cfg) {
        std::vector<NamedPredictor> named;
        for (const auto& [name, obj] : models)
          named.push_back({name, predictor_from_python(obj)});
        const auto result = transfer_matrix(named, test, cfg);
        return py::make_tuple(result.names, result.accuracy);
      },
      py::arg("models"), py::arg("test"), py::arg("config"));

  m.def(
      "adv_train_scd01",
      [](const Dataset& train, const Hyperplane& init, const AdvTrainConfig& cfg,
         const ScdConfig& scd_cfg) { return adv_train_scd01(train, init, cfg, scd_cfg); },
      py::arg("train"), py::arg("init"), py::arg("config"), py::arg("scd_config"));
  m.def(
      "adv_train_hinge",
      [](const Dataset& train, const AdvTrainConfig& cfg, double reg_lambda,
         std::size_t epochs) { return adv_train_hinge(train, cfg, reg_lambda, epochs); },
      py::arg("train"), py::arg("config"), py::arg("reg_lambda") = 1e-4,
      py::arg("epochs") = 50);

  m.def(
      "save_model", [](py::object model, const std::string& path) {
        save_model(as_any(std::move(model)), path);
      },
      py::arg("model"), py::arg("path"));
  m.def(
      "load_model",
      [](const std::string& path) {
        return std::visit([](auto&& mm) { return py::cast(std::move(mm)); },
                          load_model(path));
      },
      py::arg("path"));
}
