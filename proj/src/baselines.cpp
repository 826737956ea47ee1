#include "zol/baselines.hpp"

#include <cmath>

namespace zol {

Hyperplane LinearSvmModel::as_unit_hyperplane() const {
  Hyperplane h{w, w0};
  return h.normalized();
}

LinearSvmModel train_hinge(const Dataset& train, double reg_lambda, std::size_t epochs,
                           std::uint64_t seed) {
  train.validate();
  if (!(reg_lambda > 0.0)) throw ArgumentError("reg_lambda must be > 0");
  if (epochs < 1) throw ArgumentError("epochs must be >= 1");
  LinearSvmModel m;
  m.w.assign(train.d, 0.0);
  m.reg_lambda = reg_lambda;
  Rng rng(derive_seed(seed, 0x54));

  std::vector<std::uint32_t> idx(train.n);
  for (std::uint32_t i = 0; i < train.n; ++i) idx[i] = i;

  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(idx);
    for (const auto i : idx) {
      ++t;
      const double eta = 1.0 / (reg_lambda * static_cast<double>(t));
      const auto x = train.row(i);
      const double y = train.label(i);
      const double margin = y * m.score(x);
      const double shrink = 1.0 - eta * reg_lambda;
      // The intercept rides along as a constant-1 feature; shrinking it with
      // the weights keeps the early 1/(lambda*t) steps from saturating it.
      if (margin < 1.0) {
        for (std::size_t j = 0; j < train.d; ++j)
          m.w[j] = shrink * m.w[j] + eta * y * x[j];
        m.w0 = shrink * m.w0 + eta * y;
      } else {
        for (double& wj : m.w) wj *= shrink;
        m.w0 *= shrink;
      }
    }
  }
  return m;
}

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

double logistic_loss(double logit, double y01) {
  return std::max(logit, 0.0) - y01 * logit + std::log1p(std::exp(-std::abs(logit)));
}

void check_shape(const LogisticMlpModel& m, std::size_t d) {
  if (m.layer_sizes.empty() || m.layer_sizes.front() != d)
    throw DimensionError("network/input dimension mismatch");
}

/// Reusable activation/delta buffers so the training loop never allocates.
struct MlpWorkspace {
  std::vector<std::vector<double>> act;    // act[l] = layer l output (act[0] = input)
  std::vector<std::vector<double>> delta;  // delta[l] = d loss / d preactivation of layer l

  void fit(const LogisticMlpModel& m) {
    const std::size_t layers = m.weights.size();
    act.resize(layers + 1);
    delta.resize(layers);
    for (std::size_t l = 0; l <= layers; ++l) act[l].resize(m.layer_sizes[l]);
    for (std::size_t l = 0; l < layers; ++l) delta[l].resize(m.layer_sizes[l + 1]);
  }
};

double forward_into(const LogisticMlpModel& m, std::span<const float> x, MlpWorkspace& ws) {
  const std::size_t layers = m.weights.size();
  for (std::size_t j = 0; j < x.size(); ++j) ws.act[0][j] = x[j];
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t fan_in = m.layer_sizes[l];
    const std::size_t fan_out = m.layer_sizes[l + 1];
    auto& out = ws.act[l + 1];
    for (std::size_t o = 0; o < fan_out; ++o) out[o] = m.biases[l][o];
    const auto& prev = ws.act[l];
    const auto& W = m.weights[l];
    for (std::size_t i = 0; i < fan_in; ++i) {
      const double a = prev[i];
      if (a == 0.0) continue;
      const double* wrow = W.data() + i * fan_out;
      for (std::size_t o = 0; o < fan_out; ++o) out[o] += a * wrow[o];
    }
    if (l + 1 < layers)
      for (auto& v : out) v = sigmoid(v);
  }
  return ws.act[layers][0];
}

/// Backward pass filling ws.delta; the caller decides what to do with it.
void backward_deltas(const LogisticMlpModel& m, MlpWorkspace& ws, double y01) {
  const std::size_t layers = m.weights.size();
  ws.delta[layers - 1][0] = sigmoid(ws.act[layers][0]) - y01;
  for (std::size_t l = layers; l-- > 1;) {
    const std::size_t fan_in = m.layer_sizes[l];
    const std::size_t fan_out = m.layer_sizes[l + 1];
    const auto& W = m.weights[l];
    const auto& dnext = ws.delta[l];
    auto& dprev = ws.delta[l - 1];
    const auto& a = ws.act[l];
    for (std::size_t i = 0; i < fan_in; ++i) {
      const double* wrow = W.data() + i * fan_out;
      double s = 0.0;
      for (std::size_t o = 0; o < fan_out; ++o) s += wrow[o] * dnext[o];
      dprev[i] = s * a[i] * (1.0 - a[i]);
    }
  }
}

}  // namespace

double LogisticMlpModel::logit(std::span<const float> x) const {
  check_shape(*this, x.size());
  MlpWorkspace ws;
  ws.fit(*this);
  return forward_into(*this, x, ws);
}

double mlp_sample_loss(const LogisticMlpModel& m, std::span<const float> x, int y) {
  return logistic_loss(m.logit(x), y > 0 ? 1.0 : 0.0);
}

MlpGradients mlp_gradients(const LogisticMlpModel& m, std::span<const float> x, int y) {
  check_shape(m, x.size());
  const std::size_t layers = m.weights.size();
  MlpWorkspace ws;
  ws.fit(m);
  const double logit = forward_into(m, x, ws);
  const double y01 = y > 0 ? 1.0 : 0.0;
  backward_deltas(m, ws, y01);

  MlpGradients g;
  g.loss = logistic_loss(logit, y01);
  g.weight_grads.resize(layers);
  g.bias_grads.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t fan_in = m.layer_sizes[l];
    const std::size_t fan_out = m.layer_sizes[l + 1];
    g.weight_grads[l].resize(fan_in * fan_out);
    for (std::size_t i = 0; i < fan_in; ++i) {
      const double a = ws.act[l][i];
      double* row = g.weight_grads[l].data() + i * fan_out;
      for (std::size_t o = 0; o < fan_out; ++o) row[o] = a * ws.delta[l][o];
    }
    g.bias_grads[l] = ws.delta[l];
  }
  // Input gradient: first layer weights times its deltas (no activation
  // derivative, the input is not squashed).
  const std::size_t d = m.layer_sizes[0];
  const std::size_t out0 = m.layer_sizes[1];
  g.input_grad.assign(d, 0.0);
  const auto& W0 = m.weights[0];
  for (std::size_t i = 0; i < d; ++i) {
    const double* wrow = W0.data() + i * out0;
    double s = 0.0;
    for (std::size_t o = 0; o < out0; ++o) s += wrow[o] * ws.delta[0][o];
    g.input_grad[i] = s;
  }
  return g;
}

std::vector<double> input_gradient(const LogisticMlpModel& m, std::span<const float> x, int y) {
  check_shape(m, x.size());
  MlpWorkspace ws;
  ws.fit(m);
  forward_into(m, x, ws);
  backward_deltas(m, ws, y > 0 ? 1.0 : 0.0);
  const std::size_t d = m.layer_sizes[0];
  const std::size_t out0 = m.layer_sizes[1];
  std::vector<double> grad(d, 0.0);
  const auto& W0 = m.weights[0];
  for (std::size_t i = 0; i < d; ++i) {
    const double* wrow = W0.data() + i * out0;
    double s = 0.0;
    for (std::size_t o = 0; o < out0; ++o) s += wrow[o] * ws.delta[0][o];
    grad[i] = s;
  }
  return grad;
}

LogisticMlpModel train_logistic_mlp(const Dataset& train, const LogisticMlpConfig& cfg) {
  train.validate();
  if (cfg.epochs < 1) throw ArgumentError("epochs must be >= 1");
  if (!(cfg.lr > 0.0)) throw ArgumentError("lr must be > 0");
  if (cfg.batch_size < 1) throw ArgumentError("batch_size must be >= 1");

  LogisticMlpModel m;
  m.layer_sizes.push_back(train.d);
  for (const auto hsz : cfg.hidden) {
    if (hsz < 1) throw ArgumentError("hidden layer sizes must be >= 1");
    m.layer_sizes.push_back(hsz);
  }
  m.layer_sizes.push_back(1);

  Rng rng(derive_seed(cfg.seed, 0x4C));
  const std::size_t layers = m.layer_sizes.size() - 1;
  m.weights.resize(layers);
  m.biases.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t fan_in = m.layer_sizes[l];
    const std::size_t fan_out = m.layer_sizes[l + 1];
    const double r = 1.0 / std::sqrt(static_cast<double>(fan_in));
    m.weights[l].resize(fan_in * fan_out);
    for (auto& w : m.weights[l]) w = rng.uniform(-r, r);
    m.biases[l].assign(fan_out, 0.0);
  }

  std::vector<std::uint32_t> idx(train.n);
  for (std::uint32_t i = 0; i < train.n; ++i) idx[i] = i;
  std::vector<std::vector<double>> wgrad(layers), bgrad(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    wgrad[l].resize(m.weights[l].size());
    bgrad[l].resize(m.biases[l].size());
  }
  MlpWorkspace ws;
  ws.fit(m);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(idx);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < train.n; begin += cfg.batch_size) {
      const std::size_t end = std::min(train.n, begin + cfg.batch_size);
      const double scale = cfg.lr / static_cast<double>(end - begin);
      for (std::size_t l = 0; l < layers; ++l) {
        std::fill(wgrad[l].begin(), wgrad[l].end(), 0.0);
        std::fill(bgrad[l].begin(), bgrad[l].end(), 0.0);
      }
      for (std::size_t b = begin; b < end; ++b) {
        const auto i = idx[b];
        const double logit = forward_into(m, train.row(i), ws);
        const double y01 = train.label(i) > 0 ? 1.0 : 0.0;
        epoch_loss += logistic_loss(logit, y01);
        backward_deltas(m, ws, y01);
        for (std::size_t l = 0; l < layers; ++l) {
          const std::size_t fan_in = m.layer_sizes[l];
          const std::size_t fan_out = m.layer_sizes[l + 1];
          const auto& a = ws.act[l];
          const auto& dl = ws.delta[l];
          auto& gW = wgrad[l];
          for (std::size_t i2 = 0; i2 < fan_in; ++i2) {
            const double av = a[i2];
            if (av == 0.0) continue;
            double* row = gW.data() + i2 * fan_out;
            for (std::size_t o = 0; o < fan_out; ++o) row[o] += av * dl[o];
          }
          auto& gB = bgrad[l];
          for (std::size_t o = 0; o < fan_out; ++o) gB[o] += dl[o];
        }
      }
      for (std::size_t l = 0; l < layers; ++l) {
        auto& W = m.weights[l];
        const auto& gW = wgrad[l];
        for (std::size_t k = 0; k < W.size(); ++k) W[k] -= scale * gW[k];
        auto& B = m.biases[l];
        const auto& gB = bgrad[l];
        for (std::size_t k = 0; k < B.size(); ++k) B[k] -= scale * gB[k];
      }
    }
    if (!std::isfinite(epoch_loss))
      throw TrainingError("logistic network diverged (non-finite loss) at epoch " +
                          std::to_string(epoch));
  }
  return m;
}

LogisticMlpModel train_logistic_mlp(const Dataset& train, std::vector<std::size_t> hidden,
                                    double lr, std::size_t epochs, std::uint64_t seed) {
  LogisticMlpConfig cfg;
  cfg.hidden = std::move(hidden);
  cfg.lr = lr;
  cfg.epochs = epochs;
  cfg.seed = seed;
  return train_logistic_mlp(train, cfg);
}

}  // namespace zol
