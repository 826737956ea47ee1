#include "zol/scd01.hpp"

#include <cmath>

#include "zol/parallel.hpp"

namespace zol {

void ScdConfig::check() const {
  if (!(w_inc > 0.0)) throw ArgumentError("w_inc must be > 0");
  if (pool_size < 1) throw ArgumentError("pool_size must be >= 1");
  if (!(batch_fraction > 0.0 && batch_fraction <= 1.0))
    throw ArgumentError("batch_fraction must be in (0,1]");
  if (votes < 1) throw ArgumentError("votes must be >= 1");
  if (outer_iters < 1) throw ArgumentError("outer_iters must be >= 1");
}

namespace {

detail::FeatureView view_of(const Dataset& ds, const ColMajor& cm) {
  return {ds.features.data(), cm.values.data(), ds.n, ds.d};
}

std::vector<std::uint32_t> all_rows(std::size_t n) {
  std::vector<std::uint32_t> rows(n);
  for (std::uint32_t i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

std::vector<std::int8_t> slot_labels(const Dataset& ds, std::span<const std::uint32_t> rows) {
  std::vector<std::int8_t> out(rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t) out[t] = ds.labels[rows[t]];
  return out;
}

}  // namespace

std::pair<Hyperplane, double> coordinate_descent(const Dataset& ds, const Hyperplane* init,
                                                 const ScdConfig& cfg, Rng& rng,
                                                 DescentStats* stats) {
  cfg.check();
  ds.validate();
  const ColMajor cm = ColMajor::from(ds);
  const auto rows = all_rows(ds.n);
  const auto labels = slot_labels(ds, rows);

  Hyperplane h;
  if (init) {
    if (init->w.size() != ds.d) throw DimensionError("init dimension mismatch");
    h = *init;
  }
  detail::DescentScratch scratch;
  const detail::DescentParams params{cfg.w_inc, cfg.pool_size, cfg.window_half_width};
  const auto err = detail::descend(view_of(ds, cm), rows, LinearSweep{labels}, h.w, h.w0,
                                   params, rng, scratch, stats);
  return {h, static_cast<double>(err) / static_cast<double>(ds.n)};
}

Hyperplane train_scd01(const Dataset& train, const ScdConfig& cfg, Rng& rng,
                       const Hyperplane* warm, ScdTrainLog* log) {
  cfg.check();
  train.validate();
  const ColMajor cm = ColMajor::from(train);
  const auto view = view_of(train, cm);
  const auto batch_size = std::min<std::size_t>(
      train.n,
      static_cast<std::size_t>(std::ceil(cfg.batch_fraction * static_cast<double>(train.n))));
  const auto full = all_rows(train.n);

  Hyperplane work;
  bool have = false;
  if (warm) {
    if (warm->w.size() != train.d) throw DimensionError("warm-start dimension mismatch");
    work = *warm;
    have = true;
  }
  Hyperplane best;
  double best_loss = std::numeric_limits<double>::infinity();

  detail::DescentScratch scratch;
  const detail::DescentParams params{cfg.w_inc, cfg.pool_size, cfg.window_half_width};
  std::vector<std::uint32_t> rows;
  std::vector<std::int8_t> labels;

  for (std::size_t iter = 0; iter < cfg.outer_iters; ++iter) {
    if (batch_size == train.n) {
      rows = full;
    } else {
      rows = rng.pick_distinct(static_cast<std::uint32_t>(train.n),
                               static_cast<std::uint32_t>(batch_size));
      std::sort(rows.begin(), rows.end());
    }
    labels = slot_labels(train, rows);
    if (!have) work.w.clear();
    detail::descend(view, rows, LinearSweep{labels}, work.w, work.w0, params, rng, scratch);
    have = true;

    const double full_loss = loss01_linear(work, train);
    if (full_loss < best_loss) {
      best_loss = full_loss;
      best = work;
    }
    if (log) {
      log->full_loss.push_back(full_loss);
      log->best_full_loss.push_back(best_loss);
    }
  }
  return best;
}

Ensemble<Hyperplane> train_scd01_majvote(const Dataset& train, const ScdConfig& cfg) {
  cfg.check();
  Ensemble<Hyperplane> ens;
  ens.members.resize(cfg.votes);
  parallel_for(cfg.votes, [&](std::size_t v) {
    Rng rng(derive_seed(cfg.seed, v));
    ens.members[v] = train_scd01(train, cfg, rng);
  });
  return ens;
}

}  // namespace zol
