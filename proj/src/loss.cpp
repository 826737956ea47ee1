#include "zol/loss.hpp"

#include <algorithm>
#include <cmath>

namespace zol {

double Hyperplane::norm() const {
  double s = 0.0;
  for (const double v : w) s += v * v;
  return std::sqrt(s);
}

Hyperplane Hyperplane::normalized() const {
  const double nrm = norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw ArgumentError("cannot normalize zero weight vector");
  Hyperplane out = *this;
  for (double& v : out.w) v /= nrm;
  out.w0 /= nrm;
  return out;
}

double loss01_linear(const Hyperplane& h, const Dataset& ds) {
  if (h.w.size() != ds.d) throw DimensionError("hyperplane/dataset dimension mismatch");
  std::int64_t wrong = 0;
  for (std::size_t i = 0; i < ds.n; ++i) wrong += h.predict(ds.row(i)) != ds.label(i);
  return static_cast<double>(wrong) / static_cast<double>(ds.n);
}

double loss01_mlp(const Mlp01Model& m, const Dataset& ds) {
  if (m.d != ds.d) throw DimensionError("network/dataset dimension mismatch");
  std::int64_t wrong = 0;
  for (std::size_t i = 0; i < ds.n; ++i) wrong += m.predict(ds.row(i)) != ds.label(i);
  return static_cast<double>(wrong) / static_cast<double>(ds.n);
}

void ProjectionState::sort_full() {
  order.resize(proj.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return proj[a] < proj[b] || (proj[a] == proj[b] && a < b);
  });
}

ThresholdResult opt_threshold(ProjectionState& state, std::span<const std::int8_t> labels,
                              double lo, double hi) {
  if (labels.size() != state.size()) throw DimensionError("labels/projection size mismatch");
  return detail::scan_thresholds(state, LinearSweep{labels}, lo, hi);
}

}  // namespace zol
