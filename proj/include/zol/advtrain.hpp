#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zol/baselines.hpp"
#include "zol/dataset.hpp"
#include "zol/ensemble.hpp"
#include "zol/scd01.hpp"

namespace zol {

struct AdvTrainConfig {
  std::size_t iterations = 100;
  double sample_fraction = 0.10;
  double overshoot = 0.001;
  std::uint64_t seed = 0;
  bool vote_all = true;     // vote over every iteration's model (the linear 01 solver default)
  bool accumulate = false;  // keep adversaries from earlier iterations in the pool

  void check() const;
};

struct AdvTrainLog {
  struct Row {
    std::size_t iteration = 0;
    double clean_loss = 0.0;
    double mixed_loss = 0.0;  // on clean + adversarial pool of that iteration
  };
  std::vector<Row> rows;
};

void write_advtrain_log_csv(const AdvTrainLog& log, const std::string& path);

/// Iterative adversarial training of the linear 01-loss model: each round
/// projects a random sample of training points just past the current
/// boundary (original labels kept), then retrains warm-started on clean plus
/// adversarial data. Returns the vote over every round's model (or only the
/// final model when cfg.vote_all is false).
Ensemble<Hyperplane> adv_train_scd01(const Dataset& train, const Hyperplane& init,
                                     const AdvTrainConfig& cfg, const ScdConfig& scd_cfg,
                                     AdvTrainLog* log = nullptr);

/// Same loop with the hinge trainer; only the final-iteration model is kept.
LinearSvmModel adv_train_hinge(const Dataset& train, const AdvTrainConfig& cfg, double reg_lambda,
                               std::size_t epochs, AdvTrainLog* log = nullptr);

}  // namespace zol
