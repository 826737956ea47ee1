#include "zol/advtrain.hpp"

#include <cmath>
#include <fstream>

#include "zol/attack.hpp"

namespace zol {

void AdvTrainConfig::check() const {
  if (iterations < 1) throw ArgumentError("iterations must be >= 1");
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0))
    throw ArgumentError("sample_fraction must be in (0,1]");
  if (overshoot < 0.0) throw ArgumentError("overshoot must be >= 0");
}

void write_advtrain_log_csv(const AdvTrainLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << "iteration,clean_loss,mixed_loss\n";
  for (const auto& row : log.rows)
    out << row.iteration << "," << row.clean_loss << "," << row.mixed_loss << "\n";
  if (!out) throw FormatError("short write on " + path);
}

namespace {

Dataset append_rows(const Dataset& base, const Dataset& extra) {
  Dataset out = base;
  out.features.insert(out.features.end(), extra.features.begin(), extra.features.end());
  out.labels.insert(out.labels.end(), extra.labels.begin(), extra.labels.end());
  out.n += extra.n;
  return out;
}

std::vector<std::uint32_t> sample_rows(Rng& rng, std::size_t n, double fraction) {
  const auto count = std::max<std::size_t>(
      1, std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(fraction * n))));
  auto rows = rng.pick_distinct(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(count));
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace

Ensemble<Hyperplane> adv_train_scd01(const Dataset& train, const Hyperplane& init,
                                     const AdvTrainConfig& cfg, const ScdConfig& scd_cfg,
                                     AdvTrainLog* log) {
  cfg.check();
  train.validate();
  if (init.w.size() != train.d) throw DimensionError("init dimension mismatch");

  Rng rng(derive_seed(cfg.seed, 0xAD));
  Hyperplane current = init.normalized();
  Ensemble<Hyperplane> ens;
  ens.members.reserve(cfg.iterations);
  Dataset accumulated;  // used only with cfg.accumulate

  for (std::size_t iter = 1; iter <= cfg.iterations; ++iter) {
    const auto rows = sample_rows(rng, train.n, cfg.sample_fraction);
    const Dataset picked = take_rows(train, rows);
    const Dataset adversaries = whitebox_linear_attack(current, picked, cfg.overshoot);
    const Dataset& extra = cfg.accumulate
                               ? (accumulated = accumulated.n == 0
                                      ? adversaries
                                      : append_rows(accumulated, adversaries))
                               : adversaries;
    const Dataset pool = append_rows(train, extra);
    current = train_scd01(pool, scd_cfg, rng, &current);
    ens.members.push_back(current);
    if (log)
      log->rows.push_back({iter, loss01_linear(current, train), loss01_linear(current, pool)});
  }
  if (!cfg.vote_all && !ens.members.empty()) {
    Ensemble<Hyperplane> final_only;
    final_only.members.push_back(ens.members.back());
    return final_only;
  }
  return ens;
}

LinearSvmModel adv_train_hinge(const Dataset& train, const AdvTrainConfig& cfg, double reg_lambda,
                               std::size_t epochs, AdvTrainLog* log) {
  cfg.check();
  train.validate();

  Rng rng(derive_seed(cfg.seed, 0xAE));
  LinearSvmModel current = train_hinge(train, reg_lambda, epochs, derive_seed(cfg.seed, 0));
  Dataset accumulated;

  for (std::size_t iter = 1; iter <= cfg.iterations; ++iter) {
    const auto rows = sample_rows(rng, train.n, cfg.sample_fraction);
    const Dataset picked = take_rows(train, rows);
    const Dataset adversaries =
        whitebox_linear_attack(current.as_unit_hyperplane(), picked, cfg.overshoot);
    const Dataset& extra = cfg.accumulate
                               ? (accumulated = accumulated.n == 0
                                      ? adversaries
                                      : append_rows(accumulated, adversaries))
                               : adversaries;
    const Dataset pool = append_rows(train, extra);
    current = train_hinge(pool, reg_lambda, epochs, derive_seed(cfg.seed, iter));
    if (log) {
      Hyperplane as_plane{current.w, current.w0};
      log->rows.push_back(
          {iter, loss01_linear(as_plane, train), loss01_linear(as_plane, pool)});
    }
  }
  return current;
}

}  // namespace zol
