#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "zol/dataset.hpp"
#include "zol/error.hpp"

namespace zol {

/// Majority vote over independently trained members; a tied vote predicts +1.
template <class Model>
struct Ensemble {
  std::vector<Model> members;

  int predict(std::span<const float> x) const {
    int votes = 0;
    for (const auto& m : members) votes += m.predict(x);
    return votes >= 0 ? +1 : -1;
  }
};

/// Query-only view of a classifier. Black-box attack code receives targets
/// through this type, so it cannot read parameters by construction.
using Predictor = std::function<int(std::span<const float>)>;

template <class Model>
Predictor make_predictor(Model model) {
  auto owned = std::make_shared<const Model>(std::move(model));
  return [owned](std::span<const float> x) { return owned->predict(x); };
}

inline double accuracy(const Predictor& predict, const Dataset& ds) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ds.n; ++i) hits += predict(ds.row(i)) == ds.label(i);
  return static_cast<double>(hits) / static_cast<double>(ds.n);
}

template <class Model>
double accuracy(const Model& m, const Dataset& ds) {
  if (ds.n == 0) throw ArgumentError("accuracy on empty dataset");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ds.n; ++i) hits += m.predict(ds.row(i)) == ds.label(i);
  return static_cast<double>(hits) / static_cast<double>(ds.n);
}

}  // namespace zol
