#pragma once

#include <string>
#include <variant>

#include "zol/baselines.hpp"
#include "zol/ensemble.hpp"
#include "zol/loss.hpp"

namespace zol {

// Versioned text records; doubles round-trip exactly (shortest
// representation). Ensembles hold an ordered member list.
inline constexpr const char* kFormatScd01 = "scd01/1";
inline constexpr const char* kFormatMlp01 = "mlp01/1";
inline constexpr const char* kFormatSvm = "svm/1";
inline constexpr const char* kFormatLogMlp = "logmlp/1";
inline constexpr const char* kFormatEnsemble = "ensemble/1";

using AnyModel = std::variant<Hyperplane, Mlp01Model, LinearSvmModel, LogisticMlpModel,
                              Ensemble<Hyperplane>, Ensemble<Mlp01Model>,
                              Ensemble<LinearSvmModel>, Ensemble<LogisticMlpModel>>;

std::string to_text(const AnyModel& model);
AnyModel from_text(const std::string& text);

void save_model(const AnyModel& model, const std::string& path);
AnyModel load_model(const std::string& path);

/// Short tag like "scd01", "scd01-ensemble" for file naming and manifests.
std::string model_kind(const AnyModel& model);

/// Query-only closure over whichever model the variant holds.
Predictor predictor_of(const AnyModel& model);

std::size_t model_dimension(const AnyModel& model);

}  // namespace zol
