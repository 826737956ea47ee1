#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zol/baselines.hpp"
#include "zol/dataset.hpp"
#include "zol/ensemble.hpp"
#include "zol/loss.hpp"
#include "zol/scd01.hpp"

namespace zol {

struct AttackConfig {
  double epsilon = 0.0625;
  std::size_t epochs = 20;
  std::size_t seed_count = 200;
  std::vector<std::size_t> substitute_layers{200, 200};
  double augment_lambda = 0.1;
  std::size_t max_seed_set = 6400;
  std::uint64_t seed = 0;
  // Substitute trainer knobs (retrained from scratch each epoch).
  double substitute_lr = 0.5;
  std::size_t substitute_epochs = 40;
  std::size_t substitute_batch = 32;

  void check() const;
};

struct AttackEpochRecord {
  std::size_t epoch = 0;
  double target_adv_accuracy = 0.0;  // clean accuracy at epoch 0
  std::optional<double> substitute_test_accuracy;  // absent at epoch 0
  std::size_t seed_set_size = 0;
};

struct AttackTrace {
  std::vector<AttackEpochRecord> records;
  bool valid = true;

  // echoed into serialized traces
  std::string target_id;
  std::string dataset_id;
  double epsilon = 0.0;
  std::uint64_t seed = 0;

  double clean_accuracy() const { return records.front().target_adv_accuracy; }
  double final_adv_accuracy() const { return records.back().target_adv_accuracy; }
};

void write_trace_csv(const AttackTrace& trace, const std::string& path);
void write_trace_json(const AttackTrace& trace, const std::string& path);

/// File stem embedding target id, dataset id, epsilon and seed.
std::string trace_file_stem(const AttackTrace& trace);

/// Substitute-model black-box attack: a held-out/seed partition of `test`
/// under cfg.seed, a logistic network substitute retrained each epoch on
/// target-labeled samples, FGSM adversaries from its input gradients, and
/// doubling Jacobian-style augmentation capped at cfg.max_seed_set. The
/// target is only ever queried for labels.
AttackTrace blackbox_attack(const Predictor& target, const Dataset& test, const AttackConfig& cfg,
                            Dataset* final_adversaries = nullptr);

/// Boundary projection along the unit normal: x' = clip(x - (1+overshoot) *
/// (w.x + w0) * w). With overshoot 0 and clipping off the images land
/// exactly on the hyperplane.
Dataset whitebox_linear_attack(const Hyperplane& h, const Dataset& ds, double overshoot,
                               bool clip = true);

/// Same protocol as blackbox_attack but with a single-run linear 01-loss
/// substitute; adversaries step epsilon along the substitute normal against
/// the predicted label.
AttackTrace scd01_substitute_attack(const Predictor& target, const Dataset& test,
                                    const AttackConfig& cfg, const ScdConfig& substitute_cfg);

struct NamedPredictor {
  std::string name;
  Predictor predict;
};

struct TransferResult {
  std::vector<std::string> names;
  // accuracy[i][j]: accuracy of model j on the final-epoch adversaries
  // generated while attacking model i.
  std::vector<std::vector<double>> accuracy;
  std::vector<AttackTrace> traces;
};

TransferResult transfer_matrix(const std::vector<NamedPredictor>& models, const Dataset& test,
                               const AttackConfig& cfg);

void write_transfer_csv(const TransferResult& result, const std::string& path);

}  // namespace zol
