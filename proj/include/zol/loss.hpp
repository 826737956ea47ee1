#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "zol/dataset.hpp"
#include "zol/error.hpp"

namespace zol {

/// sign with sign(0) := +1, so every decision rule is deterministic.
inline int sign01(double v) { return v >= 0.0 ? +1 : -1; }

/// Linear separator in the form sign(w.x + w0). Solvers keep ||w|| = 1.
struct Hyperplane {
  std::vector<double> w;
  double w0 = 0.0;

  double score(std::span<const float> x) const {
    double s = w0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
    return s;
  }
  int predict(std::span<const float> x) const { return sign01(score(x)); }

  double norm() const;
  /// Same decision boundary with ||w|| = 1 (w and w0 scaled together).
  Hyperplane normalized() const;
};

/// Single hidden layer with sign activations:
/// sign(u . sign(W^T x + W0) + u0). Hidden weights are column-major,
/// W[k*d + j]; each column and u are kept unit-norm by the trainer.
struct Mlp01Model {
  std::size_t d = 0;
  std::size_t h = 0;
  std::vector<double> W;
  std::vector<double> W0;
  std::vector<double> u;
  double u0 = 0.0;

  double hidden_projection(std::size_t k, std::span<const float> x) const {
    const double* wk = W.data() + k * d;
    double s = W0[k];
    for (std::size_t j = 0; j < d; ++j) s += wk[j] * x[j];
    return s;
  }
  double output_score(std::span<const float> x) const {
    double s = u0;
    for (std::size_t k = 0; k < h; ++k) s += u[k] * sign01(hidden_projection(k, x));
    return s;
  }
  int predict(std::span<const float> x) const { return sign01(output_score(x)); }
};

/// Fraction of misclassified points under sign(w.x + w0).
double loss01_linear(const Hyperplane& h, const Dataset& ds);

/// Fraction of misclassified points under the hidden-layer sign network.
double loss01_mlp(const Mlp01Model& m, const Dataset& ds);

/// Scratch state for threshold scans over one weight direction: projections
/// by slot, the permutation sorting them, and bookkeeping for the currently
/// chosen threshold. `opt_gap` is the candidate index j in [-1, m-1]: the
/// threshold sits right of sorted position j (-1 = below the minimum).
struct ProjectionState {
  std::vector<double> proj;
  std::vector<std::uint32_t> order;
  std::ptrdiff_t opt_gap = -1;
  std::int64_t error_minus = 0;  // misclassified on the predicted -1 side
  std::int64_t error_plus = 0;   // misclassified on the predicted +1 side

  std::size_t size() const { return proj.size(); }
  double sorted(std::size_t k) const { return proj[order[k]]; }
  void sort_full();
};

struct ThresholdResult {
  double w0 = 0.0;  // intercept convention: w0 = -threshold
  double loss = 0.0;
  std::ptrdiff_t gap = -1;
  std::int64_t errors = 0;
};

/// 01 loss of the plain rule sign(proj - t) against labels: element on the
/// +1 side mismatches iff its label is -1.
struct LinearSweep {
  std::span<const std::int8_t> labels;
  bool mismatch(std::uint32_t slot, int side) const { return labels[slot] != side; }
};

/// Network loss seen through one hidden node: flipping the node's bit for a
/// point moves its output score by -2*u_k, everything else fixed. `base` is
/// the output score with this node's bit forced to +1.
struct NodeSweep {
  std::span<const double> base;
  double two_uk = 0.0;
  std::span<const std::int8_t> labels;
  bool mismatch(std::uint32_t slot, int side) const {
    const double s = side > 0 ? base[slot] : base[slot] - two_uk;
    return labels[slot] != sign01(s);
  }
};

namespace detail {

template <class Sweep>
std::int64_t count_errors_at(const ProjectionState& st, const Sweep& sweep, std::size_t boundary,
                             std::int64_t* err_minus = nullptr, std::int64_t* err_plus = nullptr) {
  std::int64_t em = 0, ep = 0;
  for (std::size_t k = 0; k < st.size(); ++k) {
    const auto slot = st.order[k];
    if (k < boundary)
      em += sweep.mismatch(slot, -1);
    else
      ep += sweep.mismatch(slot, +1);
  }
  if (err_minus) *err_minus = em;
  if (err_plus) *err_plus = ep;
  return em + ep;
}

/// Single left-to-right pass over the candidate thresholds whose value lies
/// in [lo, hi]: the midpoints of consecutive sorted projections, plus the
/// below-min / above-max sentinels when the window reaches the ends. Running
/// misclassification counters are updated in O(1) per crossing. Ties go to
/// the widest projection gap, then the lowest candidate index; the
/// sentinels carry zero width so an interior split with real margin always
/// wins a tie (an all-one-side threshold freezes sign networks).
template <class Sweep>
ThresholdResult scan_thresholds(ProjectionState& st, const Sweep& sweep, double lo, double hi) {
  if (lo > hi) throw ArgumentError("opt threshold window has lo > hi");
  const std::size_t m = st.size();
  if (m == 0) throw ArgumentError("opt threshold scan on empty projection");
  const auto jm = static_cast<std::ptrdiff_t>(m);

  const auto threshold_at = [&](std::ptrdiff_t j) {
    if (j < 0) return st.sorted(0) - 1.0;
    if (j >= jm - 1) return st.sorted(m - 1) + 1.0;
    return 0.5 * (st.sorted(static_cast<std::size_t>(j)) + st.sorted(static_cast<std::size_t>(j) + 1));
  };

  const bool low_end = lo <= st.sorted(0);
  const bool high_end = hi >= st.sorted(m - 1);

  // Contiguous range of interior candidates j with t_j in [lo, hi].
  std::ptrdiff_t j_lo = 0, j_hi = jm - 2;
  {
    std::ptrdiff_t a = 0, b = jm - 1;  // first j with t_j >= lo
    while (a < b) {
      const auto mid = (a + b) / 2;
      if (threshold_at(mid) < lo)
        a = mid + 1;
      else
        b = mid;
    }
    j_lo = a;
    a = -1, b = jm - 2;  // last j with t_j <= hi
    while (a < b) {
      const auto mid = (a + b + 1) / 2;
      if (threshold_at(mid) > hi)
        b = mid - 1;
      else
        a = mid;
    }
    j_hi = a;
  }
  const bool any_interior = jm >= 2 && j_lo <= j_hi;

  if (!any_interior && !low_end && !high_end) {
    // Empty candidate window: keep the current threshold, report its loss.
    const auto j_cur = std::max<std::ptrdiff_t>(-1, std::min(st.opt_gap, jm - 1));
    const double t = threshold_at(j_cur);
    std::size_t boundary = 0;
    while (boundary < m && st.sorted(boundary) < t) ++boundary;
    const auto err = count_errors_at(st, sweep, boundary, &st.error_minus, &st.error_plus);
    return {-t, static_cast<double>(err) / static_cast<double>(m), j_cur, err};
  }

  // The classification realized by candidate j puts the first c(j) sorted
  // elements on the -1 side; for tied projections the midpoint equals the
  // value itself and c falls back to the start of the tied run (sign(0)=+1
  // keeps ties on the +1 side).
  struct Best {
    std::int64_t err = -1;
    double width = 0.0;
    std::ptrdiff_t j = 0;
    double t = 0.0;
    std::int64_t em = 0, ep = 0;
  } best;

  std::ptrdiff_t j_first = any_interior ? j_lo : (high_end ? jm - 1 : -1);
  if (low_end) j_first = -1;

  std::size_t run_start = 0;
  std::size_t c_first = 0;
  if (j_first >= 0 && j_first <= jm - 2) {
    const double vj = st.sorted(static_cast<std::size_t>(j_first));
    run_start = static_cast<std::size_t>(j_first);
    while (run_start > 0 && st.sorted(run_start - 1) == vj) --run_start;
    c_first = st.sorted(static_cast<std::size_t>(j_first)) <
                      st.sorted(static_cast<std::size_t>(j_first) + 1)
                  ? static_cast<std::size_t>(j_first) + 1
                  : run_start;
  } else if (j_first == jm - 1) {
    c_first = m;
  }

  std::int64_t em = 0, ep = 0;
  std::int64_t err = count_errors_at(st, sweep, c_first, &em, &ep);
  std::size_t c_cur = c_first;

  const auto consider = [&](std::ptrdiff_t j, double width) {
    const double t = threshold_at(j);
    if (best.err < 0 || err < best.err || (err == best.err && width > best.width)) {
      best = {err, width, j, t, em, ep};
    }
  };

  const auto advance_to = [&](std::size_t c_target) {
    while (c_cur < c_target) {
      const auto slot = st.order[c_cur];
      ep -= sweep.mismatch(slot, +1);
      em += sweep.mismatch(slot, -1);
      err = em + ep;
      ++c_cur;
    }
  };

  if (j_first == -1) consider(-1, 0.0);
  if (any_interior) {
    if (j_first == -1) {
      const double v0 = st.sorted(static_cast<std::size_t>(j_lo));
      run_start = static_cast<std::size_t>(j_lo);
      while (run_start > 0 && st.sorted(run_start - 1) == v0) --run_start;
    }
    for (std::ptrdiff_t j = j_lo; j <= j_hi; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const double vj = st.sorted(uj);
      const double vnext = st.sorted(uj + 1);
      if (vnext > vj) {
        advance_to(uj + 1);
        consider(j, vnext - vj);
        run_start = uj + 1;
      } else {
        advance_to(run_start);
        consider(j, 0.0);
      }
    }
  }
  if (high_end && jm - 1 != j_first) {
    advance_to(m);
    consider(jm - 1, 0.0);
  } else if (high_end && jm - 1 == j_first) {
    consider(jm - 1, 0.0);
  }

  st.opt_gap = best.j;
  st.error_minus = best.em;
  st.error_plus = best.ep;
  return {-best.t, static_cast<double>(best.err) / static_cast<double>(m), best.j, best.err};
}

}  // namespace detail

/// Optimal 01-loss threshold over sorted projections restricted to the
/// window [lo, hi]. Returns the intercept in the sign(w.x + w0) convention
/// (w0 = -threshold) and the exact loss at it.
ThresholdResult opt_threshold(ProjectionState& state, std::span<const std::int8_t> labels,
                              double lo, double hi);

}  // namespace zol
