// Reproduction driver: train / attack / advtrain / simulate / gen
// subcommands over the zol library, with per-run manifests.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "zol/advtrain.hpp"
#include "zol/attack.hpp"
#include "zol/baselines.hpp"
#include "zol/dataset.hpp"
#include "zol/mlp01.hpp"
#include "zol/parallel.hpp"
#include "zol/scd01.hpp"
#include "zol/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct KeyValues {
  std::map<std::string, std::string> values;

  static KeyValues from_file(const std::string& path) {
    KeyValues kv;
    std::ifstream in(path);
    if (!in) throw zol::ArgumentError("cannot open config file " + path);
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      if (!key.empty()) kv.values[key] = value;
    }
    return kv;
  }

  std::string get(const std::string& key, const std::string& fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }
  double get(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : std::stod(it->second);
  }
  std::size_t get(const std::string& key, std::size_t fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : static_cast<std::size_t>(std::stoull(it->second));
  }
  json echo() const {
    json j = json::object();
    for (const auto& [k, v] : values) j[k] = v;
    return j;
  }
};

std::map<std::string, std::string> parse_pairs(const std::string& spec) {
  std::map<std::string, std::string> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw zol::ArgumentError("expected key=value in: " + item);
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

struct ResolvedData {
  zol::Dataset train;
  zol::Dataset test;
  std::string id;
  json echo;
};

/// --data grammar:
///   simple2d[:n=200,gap=8,seed=7,frac=0.5]
///   complex2d[:n=200,overlap=0.1,seed=7,frac=0.5]
///   mnist01[:dir=data/mnist01,frac=0.6,seed=7]
///   idx:images=I,labels=L,a=0,b=1[,frac=0.6,seed=7]
///   idx:train_images=I,train_labels=L,test_images=I2,test_labels=L2,a=0,b=1
///   zol:features=F,labels=L[,frac=0.6,seed=7]
///   zol:train_features=F,train_labels=L,test_features=F2,test_labels=L2
ResolvedData resolve_data(const std::string& spec, std::uint64_t default_seed) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const auto kv = rest.empty() ? std::map<std::string, std::string>{} : parse_pairs(rest);
  auto get = [&](const std::string& k, const std::string& fallback) {
    const auto it = kv.find(k);
    return it == kv.end() ? fallback : it->second;
  };
  const double frac = std::stod(get("frac", "0.5"));
  const auto seed = static_cast<std::uint64_t>(std::stoull(get("seed", std::to_string(default_seed))));

  ResolvedData out;
  out.id = head;
  out.echo = json{{"spec", spec}};
  auto split_all = [&](const zol::Dataset& ds) {
    zol::SplitSpec sp;
    sp.train_fraction = frac;
    sp.seed = seed;
    sp.stratified = true;
    return zol::split(ds, sp);
  };

  if (head == "simple2d") {
    const auto n = static_cast<std::size_t>(std::stoull(get("n", "200")));
    const double gap = std::stod(get("gap", "8"));
    auto ds = zol::gen_simple(n, gap, seed);
    std::tie(out.train, out.test) = split_all(ds);
  } else if (head == "complex2d") {
    const auto n = static_cast<std::size_t>(std::stoull(get("n", "200")));
    const double overlap = std::stod(get("overlap", "0.1"));
    auto ds = zol::gen_complex(n, overlap, seed);
    std::tie(out.train, out.test) = split_all(ds);
  } else if (head == "mnist01") {
    const std::string dir = get("dir", "data/mnist01");
    const double f = kv.count("frac") ? frac : 0.6;
    auto ds = zol::load_idx(dir + "/images-idx3-ubyte", dir + "/labels-idx1-ubyte", 0, 1);
    zol::SplitSpec sp;
    sp.train_fraction = f;
    sp.seed = seed;
    sp.stratified = true;
    std::tie(out.train, out.test) = zol::split(ds, sp);
  } else if (head == "idx") {
    const int a = std::stoi(get("a", "0"));
    const int b = std::stoi(get("b", "1"));
    if (kv.count("train_images")) {
      out.train = zol::load_idx(kv.at("train_images"), kv.at("train_labels"), a, b);
      out.test = zol::load_idx(kv.at("test_images"), kv.at("test_labels"), a, b);
    } else {
      auto ds = zol::load_idx(kv.at("images"), kv.at("labels"), a, b);
      std::tie(out.train, out.test) = split_all(ds);
    }
  } else if (head == "zol") {
    if (kv.count("train_features")) {
      out.train = zol::load_matrix(kv.at("train_features"), kv.at("train_labels"));
      out.test = zol::load_matrix(kv.at("test_features"), kv.at("test_labels"));
    } else {
      auto ds = zol::load_matrix(kv.at("features"), kv.at("labels"));
      std::tie(out.train, out.test) = split_all(ds);
    }
  } else {
    throw zol::ArgumentError("unknown dataset spec: " + spec);
  }
  out.echo["train_n"] = out.train.n;
  out.echo["test_n"] = out.test.n;
  out.echo["d"] = out.train.d;
  return out;
}

std::string default_out_root() {
  if (const char* env = std::getenv("ZOL_OUT_ROOT")) return env;
  return "runs";
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw zol::FormatError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw zol::FormatError("short write on " + path.string());
}

void write_manifest(const fs::path& dir, const std::string& command, const json& resolved,
                    const std::vector<std::string>& outputs) {
  json j;
  j["command"] = command;
  j["config"] = resolved;
  j["outputs"] = outputs;
  write_json(j, dir / "manifest.json");
}

zol::ScdConfig scd_config(const KeyValues& kv, std::size_t votes, std::uint64_t seed) {
  zol::ScdConfig cfg;
  cfg.w_inc = kv.get("scd.w_inc", cfg.w_inc);
  cfg.pool_size = kv.get("scd.pool_size", cfg.pool_size);
  cfg.window_half_width = kv.get("scd.window", cfg.window_half_width);
  cfg.outer_iters = kv.get("scd.outer_iters", cfg.outer_iters);
  cfg.batch_fraction = kv.get("scd.batch_fraction", cfg.batch_fraction);
  cfg.votes = votes;
  cfg.seed = seed;
  return cfg;
}

zol::Mlp01Config mlp01_config(const KeyValues& kv, std::size_t votes, std::uint64_t seed) {
  zol::Mlp01Config cfg;
  cfg.hidden = kv.get("mlp01.hidden", cfg.hidden);
  cfg.iters_per_vote = kv.get("mlp01.iters", cfg.iters_per_vote);
  cfg.batch_fraction = kv.get("mlp01.batch_fraction", cfg.batch_fraction);
  cfg.w_inc = kv.get("mlp01.w_inc", cfg.w_inc);
  cfg.w_inc2 = kv.get("mlp01.w_inc2", cfg.w_inc2);
  cfg.pool_size = kv.get("mlp01.pool_size", cfg.pool_size);
  cfg.votes = votes;
  cfg.seed = seed;
  return cfg;
}

zol::AttackConfig attack_config(const KeyValues& kv, double epsilon, std::size_t epochs,
                                std::uint64_t seed) {
  zol::AttackConfig cfg;
  cfg.epsilon = epsilon;
  cfg.epochs = epochs;
  cfg.seed_count = kv.get("attack.seed_count", cfg.seed_count);
  cfg.augment_lambda = kv.get("attack.augment_lambda", cfg.augment_lambda);
  cfg.max_seed_set = kv.get("attack.max_seed_set", cfg.max_seed_set);
  cfg.substitute_lr = kv.get("attack.sub_lr", cfg.substitute_lr);
  cfg.substitute_epochs = kv.get("attack.sub_epochs", cfg.substitute_epochs);
  cfg.substitute_batch = kv.get("attack.sub_batch", cfg.substitute_batch);
  const auto layers = kv.get("attack.sub_layers", std::string("200,200"));
  cfg.substitute_layers.clear();
  std::stringstream ss(layers);
  std::string tok;
  while (std::getline(ss, tok, ','))
    cfg.substitute_layers.push_back(static_cast<std::size_t>(std::stoull(tok)));
  cfg.seed = seed;
  return cfg;
}

json config_echo(const KeyValues& kv, const json& extra) {
  json j = extra;
  j["file_overrides"] = kv.echo();
  return j;
}

int cmd_train(const std::string& model_name, const std::string& data_spec,
              const std::string& out_dir, std::uint64_t seed, std::size_t votes,
              std::size_t epochs, const KeyValues& kv) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto data = resolve_data(data_spec, seed);
  fs::create_directories(out_dir);

  zol::AnyModel model;
  if (model_name == "scd01") {
    zol::Rng rng(zol::derive_seed(seed, 0));
    model = zol::train_scd01(data.train, scd_config(kv, 1, seed), rng);
  } else if (model_name == "scd01majvote") {
    model = zol::train_scd01_majvote(data.train, scd_config(kv, votes == 0 ? 100 : votes, seed));
  } else if (model_name == "mlp01majvote") {
    model = zol::train_mlp01(data.train, mlp01_config(kv, votes == 0 ? 32 : votes, seed));
  } else if (model_name == "svm") {
    model = zol::train_hinge(data.train, kv.get("svm.lambda", 1e-4),
                             epochs == 0 ? kv.get("svm.epochs", std::size_t{50}) : epochs, seed);
  } else if (model_name == "mlp") {
    zol::LogisticMlpConfig cfg;
    cfg.hidden = {kv.get("mlp.hidden", std::size_t{20})};
    cfg.lr = kv.get("mlp.lr", 0.5);
    cfg.epochs = epochs == 0 ? kv.get("mlp.epochs", std::size_t{50}) : epochs;
    cfg.batch_size = kv.get("mlp.batch", std::size_t{32});
    cfg.seed = seed;
    model = zol::train_logistic_mlp(data.train, cfg);
  } else {
    std::cerr << "unknown model: " << model_name << "\n";
    return 2;
  }

  const auto predictor = zol::predictor_of(model);
  const double train_acc = zol::accuracy(predictor, data.train);
  const double test_acc = zol::accuracy(predictor, data.test);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path dir(out_dir);
  const std::string model_file = (dir / (model_name + ".json")).string();
  zol::save_model(model, model_file);
  json metrics{{"clean_train_acc", train_acc},
               {"clean_test_acc", test_acc},
               {"wallclock_seconds", seconds}};
  write_json(metrics, dir / "metrics.json");
  write_manifest(dir, "train",
                 config_echo(kv, json{{"model", model_name},
                                      {"data", data.echo},
                                      {"seed", seed},
                                      {"votes", votes},
                                      {"epochs", epochs}}),
                 {model_file, (dir / "metrics.json").string()});
  std::cout << "train " << model_name << ": train_acc=" << train_acc
            << " test_acc=" << test_acc << " (" << seconds << "s)\n";
  return 0;
}

int cmd_attack(const std::string& mode, const std::vector<std::string>& model_files,
               const std::string& data_spec, const std::string& out_dir, double epsilon,
               std::size_t epochs, std::uint64_t seed, const KeyValues& kv) {
  const auto data = resolve_data(data_spec, seed);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  const auto cfg = attack_config(kv, epsilon, epochs, seed);
  std::vector<std::string> outputs;

  auto finish_trace = [&](zol::AttackTrace trace, const std::string& target_id) {
    trace.target_id = target_id;
    trace.dataset_id = data.id;
    const auto stem = zol::trace_file_stem(trace);
    const auto csv = (dir / (stem + ".csv")).string();
    const auto js = (dir / (stem + ".json")).string();
    zol::write_trace_csv(trace, csv);
    zol::write_trace_json(trace, js);
    outputs.push_back(csv);
    outputs.push_back(js);
    std::cout << "attack " << mode << " on " << target_id
              << ": clean=" << trace.clean_accuracy()
              << " final_adv=" << trace.final_adv_accuracy() << "\n";
    return trace.valid;
  };

  bool ok = true;
  if (mode == "blackbox" || mode == "scd01sub") {
    if (model_files.size() != 1) {
      std::cerr << "mode " << mode << " expects exactly one --model file\n";
      return 2;
    }
    const auto model = zol::load_model(model_files[0]);
    if (zol::model_dimension(model) != data.test.d) {
      std::cerr << "model/dataset dimension mismatch\n";
      return 2;
    }
    const auto target = zol::predictor_of(model);
    if (mode == "blackbox") {
      ok = finish_trace(zol::blackbox_attack(target, data.test, cfg),
                        zol::model_kind(model));
    } else {
      auto sub_cfg = scd_config(kv, 1, kv.get("attack.sub_seed", seed));
      sub_cfg.seed = kv.get("attack.sub_seed", seed);
      ok = finish_trace(zol::scd01_substitute_attack(target, data.test, cfg, sub_cfg),
                        zol::model_kind(model));
    }
  } else if (mode == "whitebox") {
    if (model_files.size() != 1) {
      std::cerr << "whitebox mode expects exactly one --model file\n";
      return 2;
    }
    const auto model = zol::load_model(model_files[0]);
    const auto* plane = std::get_if<zol::Hyperplane>(&model);
    if (!plane) {
      std::cerr << "whitebox mode needs a single linear 01-loss model\n";
      return 2;
    }
    if (plane->w.size() != data.test.d) {
      std::cerr << "model/dataset dimension mismatch\n";
      return 2;
    }
    const double overshoot = kv.get("attack.overshoot", 0.001);
    const auto adv = zol::whitebox_linear_attack(*plane, data.test, overshoot);
    const double clean = zol::accuracy(*plane, data.test);
    const double attacked = zol::accuracy(*plane, adv);
    json report{{"mode", "whitebox"},
                {"overshoot", overshoot},
                {"clean_accuracy", clean},
                {"adv_accuracy", attacked}};
    const auto advf = (dir / "whitebox_adversaries").string();
    zol::save_matrix(adv, advf + ".zmat", advf + ".zlab");
    write_json(report, dir / "whitebox.json");
    outputs = {advf + ".zmat", advf + ".zlab", (dir / "whitebox.json").string()};
    std::cout << "whitebox: clean=" << clean << " attacked=" << attacked << "\n";
  } else if (mode == "transfer") {
    if (model_files.size() < 2) {
      std::cerr << "transfer mode expects at least two --model files\n";
      return 2;
    }
    std::vector<zol::NamedPredictor> models;
    for (const auto& file : model_files) {
      auto m = zol::load_model(file);
      if (zol::model_dimension(m) != data.test.d) {
        std::cerr << "model/dataset dimension mismatch: " << file << "\n";
        return 2;
      }
      models.push_back({fs::path(file).stem().string(), zol::predictor_of(m)});
    }
    const auto result = zol::transfer_matrix(models, data.test, cfg);
    const auto csv = (dir / "transfer.csv").string();
    zol::write_transfer_csv(result, csv);
    outputs.push_back(csv);
    for (std::size_t i = 0; i < result.traces.size(); ++i) {
      auto trace = result.traces[i];
      trace.dataset_id = data.id;
      const auto stem = zol::trace_file_stem(trace);
      const auto tcsv = (dir / (stem + ".csv")).string();
      zol::write_trace_csv(trace, tcsv);
      outputs.push_back(tcsv);
    }
    std::cout << "transfer matrix over " << models.size() << " models written\n";
  } else {
    std::cerr << "unknown attack mode: " << mode << "\n";
    return 2;
  }

  write_manifest(dir, "attack",
                 config_echo(kv, json{{"mode", mode},
                                      {"models", model_files},
                                      {"data", data.echo},
                                      {"epsilon", epsilon},
                                      {"epochs", epochs},
                                      {"seed", seed}}),
                 outputs);
  return ok ? 0 : 1;
}

int cmd_advtrain(const std::string& data_spec, const std::string& out_dir, std::uint64_t seed,
                 const KeyValues& kv) {
  const auto data = resolve_data(data_spec, seed);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  zol::AdvTrainConfig cfg;
  cfg.iterations = kv.get("adv.iterations", cfg.iterations);
  cfg.sample_fraction = kv.get("adv.sample_fraction", cfg.sample_fraction);
  cfg.overshoot = kv.get("adv.overshoot", cfg.overshoot);
  cfg.seed = seed;

  auto scd_cfg = scd_config(kv, 1, seed);
  zol::Rng rng(zol::derive_seed(seed, 0));
  const auto init = zol::train_scd01(data.train, scd_cfg, rng);

  zol::AdvTrainLog log;
  const auto ens = zol::adv_train_scd01(data.train, init, cfg, scd_cfg, &log);
  const auto model_file = (dir / "scd01_advtrained.json").string();
  zol::save_model(zol::AnyModel(ens), model_file);
  const auto log_file = (dir / "advtrain_loss.csv").string();
  zol::write_advtrain_log_csv(log, log_file);

  const double train_acc = zol::accuracy(ens, data.train);
  const double test_acc = zol::accuracy(ens, data.test);
  write_json(json{{"clean_train_acc", train_acc}, {"clean_test_acc", test_acc}},
             dir / "metrics.json");
  write_manifest(dir, "advtrain",
                 config_echo(kv, json{{"data", data.echo},
                                      {"seed", seed},
                                      {"iterations", cfg.iterations},
                                      {"sample_fraction", cfg.sample_fraction},
                                      {"overshoot", cfg.overshoot}}),
                 {model_file, log_file, (dir / "metrics.json").string()});
  std::cout << "advtrain: clean test acc=" << test_acc << " over " << ens.members.size()
            << " voted models\n";
  return 0;
}

int cmd_simulate(const std::string& mode, const std::string& out_dir, std::uint64_t seed,
                 double epsilon, std::size_t epochs, const KeyValues& kv) {
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  const auto n = kv.get("sim.n", std::size_t{200});

  zol::Dataset all = mode == "simple" ? zol::gen_simple(n, kv.get("sim.gap", 8.0), seed)
                                      : zol::gen_complex(n, kv.get("sim.overlap", 0.1), seed);
  zol::SplitSpec sp;
  sp.train_fraction = 0.5;
  sp.seed = seed;
  auto [train, test] = zol::split(all, sp);

  auto scd_cfg = scd_config(kv, 1, seed);
  scd_cfg.outer_iters = kv.get("scd.outer_iters", std::size_t{200});
  zol::Rng rng(zol::derive_seed(seed, 1));
  const auto scd = zol::train_scd01(train, scd_cfg, rng);
  const auto svm = zol::train_hinge(train, kv.get("svm.lambda", 1e-4),
                                    kv.get("svm.epochs", std::size_t{200}), seed);

  // Boundary parameters for external plotting.
  {
    std::ofstream out(dir / "boundaries.csv", std::ios::trunc);
    out << "model,w_0,w_1,w0\n";
    out << "scd01," << scd.w[0] << "," << scd.w[1] << "," << scd.w0 << "\n";
    const auto unit = svm.as_unit_hyperplane();
    out << "svm," << unit.w[0] << "," << unit.w[1] << "," << unit.w0 << "\n";
  }
  zol::save_matrix(train, (dir / "train.zmat").string(), (dir / "train.zlab").string());
  zol::save_matrix(test, (dir / "test.zmat").string(), (dir / "test.zlab").string());

  auto cfg = attack_config(kv, epsilon, epochs, seed);
  cfg.seed_count = kv.get("attack.seed_count", std::size_t{50});
  cfg.substitute_layers = {20, 20};

  auto scd_trace = zol::blackbox_attack(zol::make_predictor(scd), test, cfg);
  scd_trace.target_id = "scd01";
  scd_trace.dataset_id = mode + "2d";
  auto svm_trace = zol::blackbox_attack(zol::make_predictor(svm), test, cfg);
  svm_trace.target_id = "svm";
  svm_trace.dataset_id = mode + "2d";

  std::vector<std::string> outputs{(dir / "boundaries.csv").string()};
  for (const auto* trace : {&scd_trace, &svm_trace}) {
    const auto csv = (dir / (zol::trace_file_stem(*trace) + ".csv")).string();
    zol::write_trace_csv(*trace, csv);
    outputs.push_back(csv);
  }
  write_manifest(dir, "simulate",
                 config_echo(kv, json{{"mode", mode},
                                      {"seed", seed},
                                      {"epsilon", epsilon},
                                      {"epochs", epochs},
                                      {"n_per_class", n}}),
                 outputs);
  std::cout << "simulate " << mode << ": scd01 final adv acc="
            << scd_trace.final_adv_accuracy()
            << " svm final adv acc=" << svm_trace.final_adv_accuracy() << "\n";
  return 0;
}

int cmd_gen(const std::string& data_spec, const std::string& out_dir, std::uint64_t seed) {
  const auto data = resolve_data(data_spec, seed);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  zol::save_matrix(data.train, (dir / "train.zmat").string(), (dir / "train.zlab").string());
  zol::save_matrix(data.test, (dir / "test.zmat").string(), (dir / "test.zlab").string());
  write_manifest(dir, "gen", json{{"data", data.echo}, {"seed", seed}},
                 {(dir / "train.zmat").string(), (dir / "train.zlab").string(),
                  (dir / "test.zmat").string(), (dir / "test.zlab").string()});
  std::cout << "gen: wrote " << data.train.n << " train / " << data.test.n << " test rows\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient-free robust binary classification toolkit"};
  app.require_subcommand(1);

  std::string data_spec, out_dir = default_out_root(), model_name = "scd01", mode = "blackbox";
  std::vector<std::string> model_files;
  std::string config_file;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double epsilon = 0.0625;
  std::size_t votes = 0, epochs = 20;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--seed", seed, "Global seed");
    cmd->add_option("--threads", threads, "Worker thread cap (0 = hardware)");
    cmd->add_option("--config", config_file, "key=value overrides file");
  };

  auto* train = app.add_subcommand("train", "Train a model and write metrics");
  train->add_option("--data", data_spec, "Dataset spec")->required();
  train->add_option("--model", model_name,
                    "scd01 | scd01majvote | mlp01majvote | svm | mlp")
      ->required();
  train->add_option("--votes", votes, "Vote count for majority-vote models");
  train->add_option("--epochs", epochs, "Epochs for convex baselines");
  add_common(train);

  auto* attack = app.add_subcommand("attack", "Attack a trained model");
  attack->add_option("--data", data_spec, "Dataset spec")->required();
  attack->add_option("--mode", mode, "blackbox | whitebox | scd01sub | transfer")->required();
  attack->add_option("--model", model_files, "Trained model file(s)")->required();
  attack->add_option("--epsilon", epsilon, "Perturbation bound");
  attack->add_option("--epochs", epochs, "Attack epochs");
  add_common(attack);

  auto* advtrain = app.add_subcommand("advtrain", "Iterative adversarial training");
  advtrain->add_option("--data", data_spec, "Dataset spec")->required();
  add_common(advtrain);

  auto* simulate = app.add_subcommand("simulate", "2-D boundary study with attack traces");
  simulate->add_option("--mode", mode, "simple | complex")->required();
  simulate->add_option("--epsilon", epsilon, "Perturbation bound");
  simulate->add_option("--epochs", epochs, "Attack epochs");
  add_common(simulate);

  auto* gen = app.add_subcommand("gen", "Materialize a dataset as matrix files");
  gen->add_option("--data", data_spec, "Dataset spec")->required();
  add_common(gen);

  CLI11_PARSE(app, argc, argv);

  try {
    zol::set_max_threads(threads);
    KeyValues kv;
    if (!config_file.empty()) kv = KeyValues::from_file(config_file);
    if (train->parsed())
      return cmd_train(model_name, data_spec, out_dir, seed, votes,
                       train->count("--epochs") ? epochs : 0, kv);
    if (attack->parsed())
      return cmd_attack(mode, model_files, data_spec, out_dir, epsilon, epochs, seed, kv);
    if (advtrain->parsed()) return cmd_advtrain(data_spec, out_dir, seed, kv);
    if (simulate->parsed()) return cmd_simulate(mode, out_dir, seed, epsilon, epochs, kv);
    if (gen->parsed()) return cmd_gen(data_spec, out_dir, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
