#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "zol/dataset.hpp"
#include "zol/detail/descent.hpp"
#include "zol/ensemble.hpp"
#include "zol/loss.hpp"
#include "zol/rng.hpp"

namespace zol {

struct ScdConfig {
  double w_inc = 0.17;
  std::size_t pool_size = 128;
  std::size_t window_half_width = 10;
  std::size_t outer_iters = 1000;
  double batch_fraction = 0.75;
  std::size_t votes = 100;
  std::uint64_t seed = 0;

  void check() const;
};

/// Greedy pooled coordinate descent on the whole dataset. If `init` is null
/// the direction starts uniform on (-1,1)^d, normalized. Returns the trained
/// separator and its exact 01 loss on ds.
std::pair<Hyperplane, double> coordinate_descent(const Dataset& ds, const Hyperplane* init,
                                                 const ScdConfig& cfg, Rng& rng,
                                                 DescentStats* stats = nullptr);

struct ScdTrainLog {
  std::vector<double> full_loss;       // loss of the working model per outer iteration
  std::vector<double> best_full_loss;  // running minimum (non-increasing)
};

/// Stochastic outer loop: each iteration descends on a random batch
/// (without replacement) warm-started from the working model, then scores
/// it on the full set; the best-seen parameters are returned.
Hyperplane train_scd01(const Dataset& train, const ScdConfig& cfg, Rng& rng,
                       const Hyperplane* warm = nullptr, ScdTrainLog* log = nullptr);

/// cfg.votes independently seeded runs; majority vote with ties to +1.
/// Member order depends only on cfg.seed, never on thread scheduling.
Ensemble<Hyperplane> train_scd01_majvote(const Dataset& train, const ScdConfig& cfg);

}  // namespace zol
