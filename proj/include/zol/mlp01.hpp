#pragma once

#include <cstdint>
#include <vector>

#include "zol/dataset.hpp"
#include "zol/ensemble.hpp"
#include "zol/loss.hpp"
#include "zol/rng.hpp"

namespace zol {

struct Mlp01Config {
  std::size_t hidden = 20;
  std::size_t votes = 32;
  std::size_t iters_per_vote = 2000;
  double batch_fraction = 0.75;
  double w_inc = 0.1;    // output-node step
  double w_inc2 = 0.02;  // hidden-node step
  std::size_t pool_size = 128;
  std::size_t window_half_width = 10;
  std::uint64_t seed = 0;

  void check() const;
};

struct Mlp01TrainLog {
  std::vector<double> full_loss;
  std::vector<double> best_full_loss;
};

/// One voting run: random init, median thresholds, then per-iteration batch
/// coordinate descent over the output node and every hidden node in turn,
/// tracking the best full-train network loss.
Mlp01Model train_mlp01_single(const Dataset& train, const Mlp01Config& cfg, Rng& rng,
                              Mlp01TrainLog* log = nullptr);

/// cfg.votes independent runs, majority vote. Member order depends only on
/// cfg.seed.
Ensemble<Mlp01Model> train_mlp01(const Dataset& train, const Mlp01Config& cfg);

}  // namespace zol
