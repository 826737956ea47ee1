#include "zol/attack.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace zol {

void AttackConfig::check() const {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ArgumentError("epsilon must be in (0,1]");
  if (epochs < 1) throw ArgumentError("epochs must be >= 1");
  if (seed_count < 1) throw ArgumentError("seed_count must be >= 1");
  if (max_seed_set < seed_count) throw ArgumentError("max_seed_set must be >= seed_count");
  if (!(augment_lambda > 0.0)) throw ArgumentError("augment_lambda must be > 0");
}

namespace {

float clip01(double v) { return static_cast<float>(std::min(1.0, std::max(0.0, v))); }

struct SeedSet {
  std::vector<float> features;
  std::vector<std::int8_t> labels;  // target predictions, not ground truth
  std::size_t d = 0;

  std::size_t size() const { return labels.size(); }
  Dataset as_dataset() const {
    Dataset ds;
    ds.features = features;
    ds.labels = labels;
    ds.n = labels.size();
    ds.d = d;
    return ds;
  }
  void add(std::span<const float> x, int label) {
    features.insert(features.end(), x.begin(), x.end());
    labels.push_back(static_cast<std::int8_t>(label));
  }
};

/// Shared attack-loop skeleton. Substitute specifics are injected through
/// three callbacks: retrain, adversary generation for one sample, and the
/// augmentation step for one seed sample.
template <class Retrain, class Adversary, class Augment>
AttackTrace run_attack_loop(const Predictor& target, const Dataset& test, const AttackConfig& cfg,
                            Dataset* final_adversaries, Retrain&& retrain, Adversary&& adversary,
                            Augment&& augment) {
  cfg.check();
  test.validate();
  if (test.n <= cfg.seed_count)
    throw ArgumentError("test set must be larger than the attack seed count");

  Rng rng(derive_seed(cfg.seed, 0xA7));
  std::vector<std::uint32_t> idx(test.n);
  for (std::uint32_t i = 0; i < test.n; ++i) idx[i] = i;
  rng.shuffle(idx);

  SeedSet seeds;
  seeds.d = test.d;
  for (std::size_t i = 0; i < cfg.seed_count; ++i) {
    const auto x = test.row(idx[i]);
    seeds.add(x, target(x));
  }
  std::vector<std::uint32_t> held(idx.begin() + static_cast<std::ptrdiff_t>(cfg.seed_count),
                                  idx.end());
  std::sort(held.begin(), held.end());
  const Dataset held_ds = take_rows(test, held);

  AttackTrace trace;
  trace.epsilon = cfg.epsilon;
  trace.seed = cfg.seed;
  trace.records.push_back({0, accuracy(target, held_ds), std::nullopt, seeds.size()});

  Dataset adv = held_ds;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (!retrain(seeds.as_dataset(), epoch)) {
      trace.valid = false;
      break;
    }
    const double subst_acc = [&] {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < held_ds.n; ++i)
        hits += adversary.substitute_predict(held_ds.row(i)) == held_ds.label(i);
      return static_cast<double>(hits) / static_cast<double>(held_ds.n);
    }();

    for (std::size_t i = 0; i < held_ds.n; ++i) {
      const auto x = held_ds.row(i);
      adversary.make(x, target(x), adv.features.data() + i * adv.d);
    }
    const double adv_acc = [&] {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < adv.n; ++i) hits += target(adv.row(i)) == adv.label(i);
      return static_cast<double>(hits) / static_cast<double>(adv.n);
    }();
    trace.records.push_back({epoch, adv_acc, subst_acc, seeds.size()});

    if (epoch < cfg.epochs && seeds.size() < cfg.max_seed_set) {
      const std::size_t current = seeds.size();
      std::vector<float> fresh(test.d);
      for (std::size_t i = 0; i < current && seeds.size() < cfg.max_seed_set; ++i) {
        augment({seeds.features.data() + i * test.d, test.d}, seeds.labels[i], fresh.data());
        seeds.add(fresh, target(fresh));
      }
    }
  }
  if (final_adversaries) *final_adversaries = std::move(adv);
  return trace;
}

}  // namespace

AttackTrace blackbox_attack(const Predictor& target, const Dataset& test, const AttackConfig& cfg,
                            Dataset* final_adversaries) {
  struct SubstituteOps {
    const AttackConfig* cfg;
    LogisticMlpModel model;

    int substitute_predict(std::span<const float> x) const { return model.predict(x); }
    void make(std::span<const float> x, int target_label, float* out) const {
      const auto grad = input_gradient(model, x, target_label);
      for (std::size_t j = 0; j < x.size(); ++j)
        out[j] = clip01(x[j] + cfg->epsilon * sign01(grad[j]));
    }
    void operator()(std::span<const float> x, int target_label, float* out) const {
      const auto grad = input_gradient(model, x, target_label);
      for (std::size_t j = 0; j < x.size(); ++j)
        out[j] = clip01(x[j] + cfg->augment_lambda * sign01(grad[j]));
    }
  };
  SubstituteOps ops{&cfg, {}};

  auto retrain = [&](const Dataset& seed_ds, std::size_t epoch) {
    LogisticMlpConfig sub;
    sub.hidden = cfg.substitute_layers;
    sub.lr = cfg.substitute_lr;
    sub.epochs = cfg.substitute_epochs;
    sub.batch_size = cfg.substitute_batch;
    sub.seed = derive_seed(cfg.seed, 0x5E00 + epoch);
    try {
      ops.model = train_logistic_mlp(seed_ds, sub);
    } catch (const TrainingError&) {
      return false;
    }
    return true;
  };
  return run_attack_loop(target, test, cfg, final_adversaries, retrain, ops, ops);
}

Dataset whitebox_linear_attack(const Hyperplane& h, const Dataset& ds, double overshoot,
                               bool clip) {
  ds.validate();
  if (h.w.size() != ds.d) throw DimensionError("hyperplane/dataset dimension mismatch");
  if (std::abs(h.norm() - 1.0) > 1e-9)
    throw ArgumentError("white-box attack requires a unit-norm weight vector");
  Dataset adv = ds;
  for (std::size_t i = 0; i < ds.n; ++i) {
    const auto x = ds.row(i);
    const double score = h.score(x);
    float* out = adv.features.data() + i * ds.d;
    for (std::size_t j = 0; j < ds.d; ++j) {
      const double v = x[j] - (1.0 + overshoot) * score * h.w[j];
      out[j] = clip ? clip01(v) : static_cast<float>(v);
    }
  }
  return adv;
}

AttackTrace scd01_substitute_attack(const Predictor& target, const Dataset& test,
                                    const AttackConfig& cfg, const ScdConfig& substitute_cfg) {
  struct SubstituteOps {
    const AttackConfig* cfg;
    Hyperplane model;

    int substitute_predict(std::span<const float> x) const { return model.predict(x); }
    void make(std::span<const float> x, int, float* out) const {
      // Step epsilon along the substitute normal, against the predicted side.
      const int yhat = model.predict(x);
      for (std::size_t j = 0; j < x.size(); ++j)
        out[j] = clip01(x[j] - cfg->epsilon * yhat * model.w[j]);
    }
    void operator()(std::span<const float> x, int, float* out) const {
      const int yhat = model.predict(x);
      for (std::size_t j = 0; j < x.size(); ++j)
        out[j] = clip01(x[j] + cfg->augment_lambda * sign01(-yhat * model.w[j]));
    }
  };
  SubstituteOps ops{&cfg, {}};

  auto retrain = [&](const Dataset& seed_ds, std::size_t) {
    Rng rng(substitute_cfg.seed);
    ops.model = train_scd01(seed_ds, substitute_cfg, rng);
    return true;
  };
  return run_attack_loop(target, test, cfg, nullptr, retrain, ops, ops);
}

TransferResult transfer_matrix(const std::vector<NamedPredictor>& models, const Dataset& test,
                               const AttackConfig& cfg) {
  if (models.size() < 2) throw ArgumentError("transfer matrix needs at least two models");
  TransferResult result;
  for (const auto& m : models) result.names.push_back(m.name);
  result.accuracy.assign(models.size(), std::vector<double>(models.size(), 0.0));
  for (std::size_t i = 0; i < models.size(); ++i) {
    Dataset adv;
    auto trace = blackbox_attack(models[i].predict, test, cfg, &adv);
    trace.target_id = models[i].name;
    for (std::size_t j = 0; j < models.size(); ++j)
      result.accuracy[i][j] = accuracy(models[j].predict, adv);
    result.traces.push_back(std::move(trace));
  }
  return result;
}

namespace {

std::string format_double(double v) {
  nlohmann::json j = v;
  return j.dump();
}

}  // namespace

std::string trace_file_stem(const AttackTrace& trace) {
  std::ostringstream ss;
  ss << "trace_" << (trace.target_id.empty() ? "target" : trace.target_id) << "_"
     << (trace.dataset_id.empty() ? "data" : trace.dataset_id) << "_eps"
     << format_double(trace.epsilon) << "_seed" << trace.seed;
  return ss.str();
}

void write_trace_csv(const AttackTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << "epoch,target_adv_acc,subst_acc,seed_set_size\n";
  for (const auto& r : trace.records) {
    out << r.epoch << "," << format_double(r.target_adv_accuracy) << ",";
    if (r.substitute_test_accuracy) out << format_double(*r.substitute_test_accuracy);
    out << "," << r.seed_set_size << "\n";
  }
  if (!out) throw FormatError("short write on " + path);
}

void write_trace_json(const AttackTrace& trace, const std::string& path) {
  nlohmann::json j;
  j["target"] = trace.target_id;
  j["dataset"] = trace.dataset_id;
  j["epsilon"] = trace.epsilon;
  j["seed"] = trace.seed;
  j["valid"] = trace.valid;
  j["records"] = nlohmann::json::array();
  for (const auto& r : trace.records) {
    nlohmann::json rec;
    rec["epoch"] = r.epoch;
    rec["target_adv_acc"] = r.target_adv_accuracy;
    if (r.substitute_test_accuracy)
      rec["subst_acc"] = *r.substitute_test_accuracy;
    else
      rec["subst_acc"] = nullptr;
    rec["seed_set_size"] = r.seed_set_size;
    j["records"].push_back(rec);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

void write_transfer_csv(const TransferResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << "attacked";
  for (const auto& name : result.names) out << "," << name;
  out << "\n";
  for (std::size_t i = 0; i < result.names.size(); ++i) {
    out << result.names[i];
    for (const auto v : result.accuracy[i]) out << "," << format_double(v);
    out << "\n";
  }
  if (!out) throw FormatError("short write on " + path);
}

}  // namespace zol
