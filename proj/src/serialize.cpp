#include "zol/serialize.hpp"

#include <fstream>
#include <type_traits>

#include "json.hpp"

namespace zol {

namespace {

using nlohmann::json;

template <class T>
struct is_ensemble : std::false_type {};
template <class M>
struct is_ensemble<Ensemble<M>> : std::true_type {};

json member_to_json(const Hyperplane& h) {
  return {{"format", kFormatScd01}, {"d", h.w.size()}, {"w", h.w}, {"w0", h.w0}};
}

Hyperplane hyperplane_from_json(const json& j) {
  Hyperplane h;
  h.w = j.at("w").get<std::vector<double>>();
  h.w0 = j.at("w0").get<double>();
  if (h.w.size() != j.at("d").get<std::size_t>())
    throw FormatError("scd01 record: w length disagrees with d");
  return h;
}

json member_to_json(const Mlp01Model& m) {
  json cols = json::array();
  for (std::size_t k = 0; k < m.h; ++k) {
    cols.push_back(std::vector<double>(m.W.begin() + static_cast<std::ptrdiff_t>(k * m.d),
                                       m.W.begin() + static_cast<std::ptrdiff_t>((k + 1) * m.d)));
  }
  return {{"format", kFormatMlp01}, {"d", m.d}, {"h", m.h}, {"W", cols},
          {"W0", m.W0},             {"u", m.u}, {"u0", m.u0}};
}

Mlp01Model mlp01_from_json(const json& j) {
  Mlp01Model m;
  m.d = j.at("d").get<std::size_t>();
  m.h = j.at("h").get<std::size_t>();
  const auto& cols = j.at("W");
  if (cols.size() != m.h) throw FormatError("mlp01 record: column count disagrees with h");
  m.W.reserve(m.d * m.h);
  for (const auto& col : cols) {
    const auto v = col.get<std::vector<double>>();
    if (v.size() != m.d) throw FormatError("mlp01 record: column length disagrees with d");
    m.W.insert(m.W.end(), v.begin(), v.end());
  }
  m.W0 = j.at("W0").get<std::vector<double>>();
  m.u = j.at("u").get<std::vector<double>>();
  m.u0 = j.at("u0").get<double>();
  if (m.W0.size() != m.h || m.u.size() != m.h)
    throw FormatError("mlp01 record: threshold/output vector length disagrees with h");
  return m;
}

json member_to_json(const LinearSvmModel& m) {
  return {{"format", kFormatSvm},
          {"d", m.w.size()},
          {"w", m.w},
          {"w0", m.w0},
          {"reg_lambda", m.reg_lambda}};
}

LinearSvmModel svm_from_json(const json& j) {
  LinearSvmModel m;
  m.w = j.at("w").get<std::vector<double>>();
  m.w0 = j.at("w0").get<double>();
  m.reg_lambda = j.at("reg_lambda").get<double>();
  if (m.w.size() != j.at("d").get<std::size_t>())
    throw FormatError("svm record: w length disagrees with d");
  return m;
}

json member_to_json(const LogisticMlpModel& m) {
  json params;
  params["weights"] = m.weights;
  params["biases"] = m.biases;
  return {{"format", kFormatLogMlp}, {"layer_sizes", m.layer_sizes}, {"params", params}};
}

LogisticMlpModel logmlp_from_json(const json& j) {
  LogisticMlpModel m;
  m.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
  m.weights = j.at("params").at("weights").get<std::vector<std::vector<double>>>();
  m.biases = j.at("params").at("biases").get<std::vector<std::vector<double>>>();
  if (m.layer_sizes.size() < 2 || m.weights.size() != m.layer_sizes.size() - 1 ||
      m.biases.size() != m.weights.size())
    throw FormatError("logmlp record: inconsistent layer shapes");
  for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
    if (m.weights[l].size() != m.layer_sizes[l] * m.layer_sizes[l + 1] ||
        m.biases[l].size() != m.layer_sizes[l + 1])
      throw FormatError("logmlp record: parameter block size mismatch");
  }
  return m;
}

template <class Model>
json ensemble_to_json(const Ensemble<Model>& ens) {
  json members = json::array();
  for (const auto& m : ens.members) members.push_back(member_to_json(m));
  return {{"format", kFormatEnsemble}, {"members", members}};
}

json model_to_json(const AnyModel& model) {
  return std::visit(
      [](const auto& m) -> json {
        if constexpr (is_ensemble<std::decay_t<decltype(m)>>::value)
          return ensemble_to_json(m);
        else
          return member_to_json(m);
      },
      model);
}

template <class Model>
AnyModel ensemble_from_json(const json& j, Model (*parse)(const json&)) {
  Ensemble<Model> ens;
  for (const auto& mj : j.at("members")) ens.members.push_back(parse(mj));
  return ens;
}

AnyModel model_from_json(const json& j) {
  const auto format = j.at("format").get<std::string>();
  if (format == kFormatScd01) return hyperplane_from_json(j);
  if (format == kFormatMlp01) return mlp01_from_json(j);
  if (format == kFormatSvm) return svm_from_json(j);
  if (format == kFormatLogMlp) return logmlp_from_json(j);
  if (format == kFormatEnsemble) {
    const auto& members = j.at("members");
    if (members.empty()) throw FormatError("ensemble record has no members");
    const auto inner = members.front().at("format").get<std::string>();
    if (inner == kFormatScd01) return ensemble_from_json<Hyperplane>(j, hyperplane_from_json);
    if (inner == kFormatMlp01) return ensemble_from_json<Mlp01Model>(j, mlp01_from_json);
    if (inner == kFormatSvm) return ensemble_from_json<LinearSvmModel>(j, svm_from_json);
    if (inner == kFormatLogMlp) return ensemble_from_json<LogisticMlpModel>(j, logmlp_from_json);
    throw FormatError("ensemble record with unknown member format: " + inner);
  }
  throw FormatError("unknown model format: " + format);
}

std::size_t dim_of(const Hyperplane& m) { return m.w.size(); }
std::size_t dim_of(const Mlp01Model& m) { return m.d; }
std::size_t dim_of(const LinearSvmModel& m) { return m.w.size(); }
std::size_t dim_of(const LogisticMlpModel& m) { return m.layer_sizes.front(); }

std::string base_kind(const AnyModel& model) {
  struct Visitor {
    std::string operator()(const Hyperplane&) const { return "scd01"; }
    std::string operator()(const Mlp01Model&) const { return "mlp01"; }
    std::string operator()(const LinearSvmModel&) const { return "svm"; }
    std::string operator()(const LogisticMlpModel&) const { return "logmlp"; }
    std::string operator()(const Ensemble<Hyperplane>&) const { return "scd01-ensemble"; }
    std::string operator()(const Ensemble<Mlp01Model>&) const { return "mlp01-ensemble"; }
    std::string operator()(const Ensemble<LinearSvmModel>&) const { return "svm-ensemble"; }
    std::string operator()(const Ensemble<LogisticMlpModel>&) const { return "logmlp-ensemble"; }
  };
  return std::visit(Visitor{}, model);
}

}  // namespace

std::string to_text(const AnyModel& model) { return model_to_json(model).dump(); }

AnyModel from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("model record is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

void save_model(const AnyModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << to_text(model) << "\n";
  if (!out) throw FormatError("short write on " + path);
}

AnyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_text(text);
}

std::string model_kind(const AnyModel& model) { return base_kind(model); }

Predictor predictor_of(const AnyModel& model) {
  return std::visit([](const auto& m) { return make_predictor(m); }, model);
}

std::size_t model_dimension(const AnyModel& model) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        if constexpr (is_ensemble<std::decay_t<decltype(m)>>::value) {
          if (m.members.empty()) throw FormatError("empty ensemble");
          return dim_of(m.members.front());
        } else {
          return dim_of(m);
        }
      },
      model);
}

}  // namespace zol
