#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "zol/dataset.hpp"
#include "zol/ensemble.hpp"
#include "zol/loss.hpp"
#include "zol/rng.hpp"

namespace zol {

/// L2-regularized hinge classifier trained by stochastic subgradient descent.
struct LinearSvmModel {
  std::vector<double> w;
  double w0 = 0.0;
  double reg_lambda = 1e-4;

  double score(std::span<const float> x) const {
    double s = w0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
    return s;
  }
  int predict(std::span<const float> x) const { return sign01(score(x)); }

  /// Same boundary with a unit-norm weight vector (scores become distances).
  Hyperplane as_unit_hyperplane() const;
};

LinearSvmModel train_hinge(const Dataset& train, double reg_lambda, std::size_t epochs,
                           std::uint64_t seed);

/// Fully-connected sigmoid network with a single logistic output unit.
/// Labels map {-1,+1} -> {0,1}; parameters are double so finite-difference
/// checks are meaningful.
struct LogisticMlpModel {
  std::vector<std::size_t> layer_sizes;        // input, hidden..., 1
  std::vector<std::vector<double>> weights;    // per layer, [in][out] row-major
  std::vector<std::vector<double>> biases;     // per layer, [out]

  double logit(std::span<const float> x) const;
  int predict(std::span<const float> x) const { return sign01(logit(x)); }
};

struct LogisticMlpConfig {
  std::vector<std::size_t> hidden{20};
  double lr = 0.01;
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
};

LogisticMlpModel train_logistic_mlp(const Dataset& train, const LogisticMlpConfig& cfg);
LogisticMlpModel train_logistic_mlp(const Dataset& train, std::vector<std::size_t> hidden,
                                    double lr, std::size_t epochs, std::uint64_t seed);

/// Mean logistic loss of one sample (the quantity whose gradients follow).
double mlp_sample_loss(const LogisticMlpModel& m, std::span<const float> x, int y);

/// d loss / d x via backpropagation through the input layer.
std::vector<double> input_gradient(const LogisticMlpModel& m, std::span<const float> x, int y);

struct MlpGradients {
  std::vector<std::vector<double>> weight_grads;
  std::vector<std::vector<double>> bias_grads;
  std::vector<double> input_grad;
  double loss = 0.0;
};

/// Full gradient of the sample loss w.r.t. every parameter and the input.
MlpGradients mlp_gradients(const LogisticMlpModel& m, std::span<const float> x, int y);

/// `count` models trained on bootstrap resamples (or the unchanged sample
/// when bootstrap=false), combined by majority vote.
template <class Model>
Ensemble<Model> bagged_ensemble(
    const std::function<Model(const Dataset&, std::uint64_t)>& trainer, const Dataset& train,
    std::size_t count, std::uint64_t seed, bool bootstrap = true) {
  if (count < 1) throw ArgumentError("bagged ensemble needs count >= 1");
  Ensemble<Model> ens;
  ens.members.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto member_seed = derive_seed(seed, i);
    if (!bootstrap) {
      ens.members.push_back(trainer(train, member_seed));
      continue;
    }
    Rng rng(derive_seed(member_seed, 0xB0));
    std::vector<std::uint32_t> rows(train.n);
    for (auto& r : rows) r = static_cast<std::uint32_t>(rng.below(train.n));
    ens.members.push_back(trainer(take_rows(train, rows), member_seed));
  }
  return ens;
}

}  // namespace zol
