#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "zol/insertion_sort.hpp"
#include "zol/loss.hpp"
#include "zol/rng.hpp"

namespace zol {

struct DescentStats {
  std::uint64_t pool_passes = 0;
  std::uint64_t coordinate_evals = 0;  // pooled coordinates examined
  std::uint64_t scan_calls = 0;        // threshold scans (two signs per coordinate)
  std::uint64_t commits = 0;
  std::uint64_t sort_elements = 0;  // elements handed to insertion sort
  std::uint64_t sort_moves = 0;     // shifts it performed
  std::vector<double> committed_losses;
};

namespace detail {

/// Feature matrix in both layouts: rows for projection rebuilds, columns for
/// single-coordinate updates.
struct FeatureView {
  const float* row_major = nullptr;
  const float* col_major = nullptr;
  std::size_t n = 0;
  std::size_t d = 0;

  std::span<const float> row(std::size_t i) const { return {row_major + i * d, d}; }
  const float* col(std::size_t j) const { return col_major + j * n; }
};

struct DescentParams {
  double step = 0.17;
  std::size_t pool_size = 128;
  std::size_t window_half_width = 10;
};

struct DescentScratch {
  ProjectionState state;
  ProjectionState cand;
  std::vector<std::pair<std::uint32_t, int>> ties;
  std::uint64_t commit_counter = 0;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

inline void recompute_projections(const FeatureView& X, std::span<const std::uint32_t> rows,
                                  const std::vector<double>& w, std::vector<double>& proj) {
  const std::size_t m = rows.size();
  proj.resize(m);
  for (std::size_t t = 0; t < m; ++t) {
    const auto xr = X.row(rows[t]);
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * xr[j];
    proj[t] = s;
  }
}

template <class Sweep>
std::int64_t errors_at_threshold(const ProjectionState& st, const Sweep& sweep, double t) {
  std::int64_t err = 0;
  for (std::uint32_t slot = 0; slot < st.proj.size(); ++slot)
    err += sweep.mismatch(slot, st.proj[slot] >= t ? +1 : -1);
  return err;
}

/// One run of greedy pooled coordinate descent: repeatedly evaluates a
/// random pool of coordinates (both step signs), keeps the single move with
/// the largest strict decrease of the sweep objective, and stops when no
/// pooled move improves. w is kept unit-norm; the threshold is re-optimized
/// inside a window around the incumbent after every trial step.
/// Returns the exact error count on the working set.
template <class Sweep>
std::int64_t descend(const FeatureView& X, std::span<const std::uint32_t> rows,
                     const Sweep& sweep, std::vector<double>& w, double& w0,
                     const DescentParams& p, Rng& rng, DescentScratch& scr,
                     DescentStats* stats = nullptr) {
  const std::size_t m = rows.size();
  const std::size_t d = X.d;
  if (m == 0) throw ArgumentError("descent needs a non-empty working set");

  if (w.empty()) {
    w.resize(d);
    double nrm = 0.0;
    do {
      nrm = 0.0;
      for (auto& v : w) {
        v = rng.uniform(-1.0, 1.0);
        nrm += v * v;
      }
      nrm = std::sqrt(nrm);
    } while (nrm < 1e-12);
    for (auto& v : w) v /= nrm;
  } else {
    if (w.size() != d) throw DimensionError("warm-start dimension mismatch");
    double nrm = 0.0;
    for (const double v : w) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw ArgumentError("invalid warm-start weights");
    if (std::abs(nrm - 1.0) > 1e-12)
      for (auto& v : w) v /= nrm;
  }

  auto& st = scr.state;
  recompute_projections(X, rows, w, st.proj);
  st.sort_full();
  st.opt_gap = -1;
  auto current = scan_thresholds(st, sweep, -kInf, kInf);
  w0 = current.w0;
  std::int64_t err_cur = current.errors;

  auto& cand = scr.cand;
  auto& ties = scr.ties;
  const std::size_t pool_size = std::min(p.pool_size, d);
  const auto jm = static_cast<std::ptrdiff_t>(m);

  while (err_cur > 0) {
    const auto center = st.opt_gap;
    const auto wlo = std::clamp<std::ptrdiff_t>(
        center - static_cast<std::ptrdiff_t>(p.window_half_width), 0, jm - 1);
    const auto whi = std::clamp<std::ptrdiff_t>(
        center + static_cast<std::ptrdiff_t>(p.window_half_width), 0, jm - 1);
    const double lo = st.sorted(static_cast<std::size_t>(wlo));
    const double hi = st.sorted(static_cast<std::size_t>(whi));

    const auto pool = rng.pick_distinct(static_cast<std::uint32_t>(d),
                                        static_cast<std::uint32_t>(pool_size));
    if (stats) ++stats->pool_passes;

    auto evaluate = [&](std::uint32_t coord, int sgn) -> ThresholdResult {
      const double delta = sgn * p.step;
      const double r2 = 1.0 + 2.0 * delta * w[coord] + delta * delta;
      if (r2 < 1e-24) return {0.0, 1.0, -1, std::numeric_limits<std::int64_t>::max()};
      const double inv = 1.0 / std::sqrt(r2);
      const float* colp = X.col(coord);
      cand.proj.resize(m);
      for (std::size_t t = 0; t < m; ++t)
        cand.proj[t] = (st.proj[t] + delta * colp[rows[t]]) * inv;
      cand.order = st.order;
      const auto moves = insertion_sort_order(cand.order, cand.proj);
      cand.opt_gap = st.opt_gap;
      if (stats) {
        ++stats->scan_calls;
        stats->sort_elements += m;
        stats->sort_moves += moves;
      }
      return scan_thresholds(cand, sweep, lo, hi);
    };

    ties.clear();
    std::int64_t err_best = err_cur;
    for (const auto coord : pool) {
      if (stats) ++stats->coordinate_evals;
      for (const int sgn : {+1, -1}) {
        const auto r = evaluate(coord, sgn);
        if (r.errors < err_best) {
          err_best = r.errors;
          ties.clear();
          ties.emplace_back(coord, sgn);
        } else if (r.errors == err_best && err_best < err_cur) {
          ties.emplace_back(coord, sgn);
        }
      }
    }
    if (ties.empty()) break;

    const auto [coord, sgn] = ties[rng.below(ties.size())];
    const auto r = evaluate(coord, sgn);
    const double delta = sgn * p.step;
    const double inv = 1.0 / std::sqrt(1.0 + 2.0 * delta * w[coord] + delta * delta);
    w[coord] += delta;
    for (auto& v : w) v *= inv;
    w0 = r.w0;
    err_cur = r.errors;
    std::swap(st.proj, cand.proj);
    std::swap(st.order, cand.order);
    st.opt_gap = cand.opt_gap;
    st.error_minus = cand.error_minus;
    st.error_plus = cand.error_plus;
    if (stats) {
      ++stats->commits;
      stats->committed_losses.push_back(static_cast<double>(err_cur) /
                                        static_cast<double>(m));
    }

    if (++scr.commit_counter % 256 == 0) {
      // Rescaling accumulates rounding; rebuild projections from w exactly.
      std::vector<double> fresh;
      recompute_projections(X, rows, w, fresh);
#ifndef NDEBUG
      double worst = 0.0;
      for (std::size_t t = 0; t < m; ++t)
        worst = std::max(worst, std::abs(fresh[t] - st.proj[t]));
      if (worst > 1e-7) throw Error("incremental projection drift exceeded 1e-7");
#endif
      st.proj = std::move(fresh);
      st.sort_full();
      const double t_cur = -w0;
      std::size_t boundary = 0;
      while (boundary < m && st.sorted(boundary) < t_cur) ++boundary;
      st.opt_gap = static_cast<std::ptrdiff_t>(boundary) - 1;
      err_cur = detail::count_errors_at(st, sweep, boundary, &st.error_minus, &st.error_plus);
    }
  }

  // Exact exit accounting: the returned count is recomputed from w, not the
  // incrementally maintained value.
  std::vector<double> fresh;
  recompute_projections(X, rows, w, fresh);
  st.proj = std::move(fresh);
  return errors_at_threshold(st, sweep, -w0);
}

}  // namespace detail
}  // namespace zol
