#include "zol/mlp01.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zol/detail/descent.hpp"
#include "zol/parallel.hpp"

namespace zol {

void Mlp01Config::check() const {
  if (hidden < 1) throw ArgumentError("hidden must be >= 1");
  if (votes < 1) throw ArgumentError("votes must be >= 1");
  if (iters_per_vote < 1) throw ArgumentError("iters_per_vote must be >= 1");
  if (!(batch_fraction > 0.0 && batch_fraction <= 1.0))
    throw ArgumentError("batch_fraction must be in (0,1]");
  if (!(w_inc > 0.0) || !(w_inc2 > 0.0)) throw ArgumentError("step sizes must be > 0");
  if (pool_size < 1) throw ArgumentError("pool_size must be >= 1");
}

namespace {

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 0) {
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
  }
  return hi;
}

/// Hidden codes of the batch in both layouts so the output node can run the
/// same descent core as everything else.
struct BitMatrix {
  std::size_t m = 0, h = 0;
  std::vector<float> row_major;  // m x h
  std::vector<float> col_major;  // h columns of length m

  void set(std::size_t t, std::size_t k, int bit) {
    row_major[t * h + k] = static_cast<float>(bit);
    col_major[k * m + t] = static_cast<float>(bit);
  }
  detail::FeatureView view() const { return {row_major.data(), col_major.data(), m, h}; }
};

}  // namespace

Mlp01Model train_mlp01_single(const Dataset& train, const Mlp01Config& cfg, Rng& rng,
                              Mlp01TrainLog* log) {
  cfg.check();
  train.validate();
  const std::size_t n = train.n;
  const std::size_t d = train.d;
  const std::size_t h = cfg.hidden;
  const ColMajor cm = ColMajor::from(train);
  const detail::FeatureView X{train.features.data(), cm.values.data(), n, d};

  Mlp01Model model;
  model.d = d;
  model.h = h;
  model.W.resize(d * h);
  model.W0.assign(h, 0.0);
  model.u.resize(h);
  model.u0 = 0.0;

  auto draw_unit = [&](double* v, std::size_t len) {
    double nrm = 0.0;
    do {
      nrm = 0.0;
      for (std::size_t j = 0; j < len; ++j) {
        v[j] = rng.uniform(-1.0, 1.0);
        nrm += v[j] * v[j];
      }
      nrm = std::sqrt(nrm);
    } while (nrm < 1e-12);
    for (std::size_t j = 0; j < len; ++j) v[j] /= nrm;
  };
  for (std::size_t k = 0; k < h; ++k) draw_unit(model.W.data() + k * d, d);
  draw_unit(model.u.data(), h);

  // Thresholds start at the median projection of the training set onto each
  // fresh weight vector (stored negated: the score convention is +W0).
  std::vector<double> proj(n);
  for (std::size_t k = 0; k < h; ++k) {
    const double* wk = model.W.data() + k * d;
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = train.row(i);
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += wk[j] * x[j];
      proj[i] = s;
    }
    model.W0[k] = -median_of(proj);
  }
  {
    std::vector<double> uproj(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = train.row(i);
      double s = 0.0;
      for (std::size_t k = 0; k < h; ++k)
        s += model.u[k] * sign01(model.hidden_projection(k, x));
      uproj[i] = s;
    }
    model.u0 = -median_of(uproj);
  }

  // Full-train hidden projections, refreshed per column only when a node's
  // weights actually moved.
  std::vector<double> P(n * h);
  std::vector<bool> dirty(h, true);
  auto refresh_column = [&](std::size_t k) {
    const double* wk = model.W.data() + k * d;
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = train.row(i);
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += wk[j] * x[j];
      P[i * h + k] = s;
    }
    dirty[k] = false;
  };

  const auto batch_size = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::ceil(cfg.batch_fraction * static_cast<double>(n))));

  Mlp01Model best = model;
  std::int64_t best_err = std::numeric_limits<std::int64_t>::max();

  detail::DescentScratch scratch;
  const detail::DescentParams out_params{cfg.w_inc, cfg.pool_size, cfg.window_half_width};
  const detail::DescentParams hid_params{cfg.w_inc2, cfg.pool_size, cfg.window_half_width};

  std::vector<std::uint32_t> rows(n);
  std::vector<std::int8_t> labels;
  BitMatrix bits;
  std::vector<double> scores;   // u . bits + u0 per batch point
  std::vector<double> node_z;   // score with one node's bit forced to +1
  std::vector<double> node_proj;
  std::vector<std::int8_t> node_bit;
  std::vector<std::uint32_t> bit_rows;

  for (std::size_t iter = 0; iter < cfg.iters_per_vote; ++iter) {
    if (batch_size == n) {
      rows.resize(n);
      for (std::uint32_t i = 0; i < n; ++i) rows[i] = i;
    } else {
      rows = rng.pick_distinct(static_cast<std::uint32_t>(n),
                               static_cast<std::uint32_t>(batch_size));
      std::sort(rows.begin(), rows.end());
    }
    const std::size_t m = rows.size();
    labels.resize(m);
    for (std::size_t t = 0; t < m; ++t) labels[t] = train.labels[rows[t]];

    for (std::size_t k = 0; k < h; ++k)
      if (dirty[k]) refresh_column(k);

    bits.m = m;
    bits.h = h;
    bits.row_major.resize(m * h);
    bits.col_major.resize(m * h);
    for (std::size_t t = 0; t < m; ++t) {
      const double* prow = P.data() + rows[t] * h;
      for (std::size_t k = 0; k < h; ++k)
        bits.set(t, k, sign01(prow[k] + model.W0[k]));
    }
    bit_rows.resize(m);
    for (std::uint32_t t = 0; t < m; ++t) bit_rows[t] = t;

    // Output node first, warm-started after the first iteration.
    if (iter == 0) model.u.clear();
    detail::descend(bits.view(), bit_rows, LinearSweep{labels}, model.u, model.u0, out_params,
                    rng, scratch);

    scores.resize(m);
    for (std::size_t t = 0; t < m; ++t) {
      const float* brow = bits.row_major.data() + t * h;
      double s = model.u0;
      for (std::size_t k = 0; k < h; ++k) s += model.u[k] * brow[k];
      scores[t] = s;
    }

    // Hidden nodes in ascending order, each against the full network loss.
    node_proj.resize(m);
    node_bit.resize(m);
    node_z.resize(m);
    for (std::size_t k = 0; k < h; ++k) {
      const double uk = model.u[k];
      for (std::size_t t = 0; t < m; ++t) {
        const int b = static_cast<int>(bits.row_major[t * h + k]);
        node_bit[t] = static_cast<std::int8_t>(b);
        node_z[t] = b > 0 ? scores[t] : scores[t] + 2.0 * uk;
      }
      std::vector<double> wk(model.W.begin() + static_cast<std::ptrdiff_t>(k * d),
                             model.W.begin() + static_cast<std::ptrdiff_t>((k + 1) * d));
      double tk = model.W0[k];
      if (iter == 0) wk.clear();
      DescentStats node_stats;
      detail::descend(X, rows, NodeSweep{node_z, 2.0 * uk, labels}, wk, tk, hid_params, rng,
                      scratch, &node_stats);
      std::copy(wk.begin(), wk.end(), model.W.begin() + static_cast<std::ptrdiff_t>(k * d));
      model.W0[k] = tk;
      if (node_stats.commits > 0 || iter == 0) dirty[k] = true;

      // Refresh this node's batch bits and fold the flips into the scores.
      if (dirty[k]) {
        const double* wkp = model.W.data() + k * d;
        for (std::size_t t = 0; t < m; ++t) {
          const auto x = train.row(rows[t]);
          double s = 0.0;
          for (std::size_t j = 0; j < d; ++j) s += wkp[j] * x[j];
          node_proj[t] = s;
        }
      } else {
        for (std::size_t t = 0; t < m; ++t) node_proj[t] = P[rows[t] * h + k];
      }
      for (std::size_t t = 0; t < m; ++t) {
        const int nb = sign01(node_proj[t] + model.W0[k]);
        if (nb != node_bit[t]) scores[t] += uk * (nb - node_bit[t]);
        bits.set(t, k, nb);
      }
    }

    // Score the full training set and keep the best parameters seen.
    for (std::size_t k = 0; k < h; ++k)
      if (dirty[k]) refresh_column(k);
    std::int64_t err = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* prow = P.data() + i * h;
      double s = model.u0;
      for (std::size_t k = 0; k < h; ++k)
        s += model.u[k] * sign01(prow[k] + model.W0[k]);
      err += sign01(s) != train.labels[i];
    }
    if (err < best_err) {
      best_err = err;
      best = model;
    }
    if (log) {
      log->full_loss.push_back(static_cast<double>(err) / static_cast<double>(n));
      log->best_full_loss.push_back(static_cast<double>(best_err) / static_cast<double>(n));
    }
  }
  return best;
}

Ensemble<Mlp01Model> train_mlp01(const Dataset& train, const Mlp01Config& cfg) {
  cfg.check();
  Ensemble<Mlp01Model> ens;
  ens.members.resize(cfg.votes);
  parallel_for(cfg.votes, [&](std::size_t v) {
    Rng rng(derive_seed(cfg.seed, v));
    ens.members[v] = train_mlp01_single(train, cfg, rng);
  });
  return ens;
}

}  // namespace zol
