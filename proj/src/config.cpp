#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "levyhull/errors.hpp"
#include "levyhull/report.hpp"

namespace levyhull {

namespace {

using nlohmann::json;

const std::set<std::string> kTopKeys{"experiments", "master_seed", "description"};
const std::set<std::string> kExperimentKeys{
    "experiment", "label",       "spec",        "n_steps",   "trials",       "j_orders",  "horizon",
    "master_seed", "tolerance_sigma", "bias_allowance", "n_values", "p_values", "t_values", "hill_k",
    "tail_target", "tail_band",  "grid_n",      "quad_points", "sup_trials", "dt",        "batch_trials"};
const std::set<std::string> kSpecKeys{"flavor", "alpha", "c", "d", "tail_alpha", "jump_rate", "drift", "jump_law"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + key + ": unknown key");
  }
}

template <class T>
T get_field(const json& obj, const std::string& key, const std::string& where, T fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    if constexpr (std::is_unsigned_v<T>) {
      if (it->is_number_integer() && it->template get<long long>() < 0) {
        throw ConfigError(where + key + ": must be nonnegative");
      }
      if (it->is_number_float()) {
        const double v = it->template get<double>();
        if (v < 0.0 || v != static_cast<double>(static_cast<T>(v))) {
          throw ConfigError(where + key + ": must be a nonnegative integer");
        }
        return static_cast<T>(v);
      }
    }
    return it->template get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + key + ": wrong type (" + std::string(e.what()) + ")");
  }
}

StableSpec parse_spec(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + "spec: must be an object");
  reject_unknown(j, kSpecKeys, where + "spec.");
  const std::string w = where + "spec.";
  const std::string flavor = get_field<std::string>(j, "flavor", w, "Brownian");
  const int d = get_field<int>(j, "d", w, 2);
  StableSpec s;
  if (flavor == "Brownian") {
    const double alpha = get_field<double>(j, "alpha", w, 2.0);
    if (alpha != 2.0) throw ConfigError(w + "alpha: Brownian flavor forces alpha = 2");
    s = StableSpec::brownian(d, get_field<double>(j, "c", w, 0.5));
  } else if (flavor == "Isotropic") {
    if (!j.contains("alpha")) throw ConfigError(w + "alpha: required for the Isotropic flavor");
    s = StableSpec::isotropic(get_field<double>(j, "alpha", w, 2.0), get_field<double>(j, "c", w, 1.0), d);
  } else if (flavor == "CompoundPoissonHeavy") {
    const std::string law = get_field<std::string>(j, "jump_law", w, "Pareto");
    if (law != "Pareto" && law != "Gaussian") throw ConfigError(w + "jump_law: expected Pareto or Gaussian");
    s = StableSpec::compound_poisson(d, get_field<double>(j, "tail_alpha", w, 1.5),
                                     get_field<double>(j, "jump_rate", w, 1.0),
                                     get_field<std::vector<double>>(j, "drift", w, {}),
                                     law == "Pareto" ? JumpLaw::Pareto : JumpLaw::Gaussian);
  } else {
    throw ConfigError(w + "flavor: expected Brownian, Isotropic or CompoundPoissonHeavy");
  }
  if (flavor != "CompoundPoissonHeavy") {
    for (const char* key : {"tail_alpha", "jump_rate", "drift", "jump_law"}) {
      if (j.contains(key)) throw ConfigError(w + key + ": only valid for CompoundPoissonHeavy");
    }
  }
  return s;
}

ExperimentConfig parse_experiment(const json& j, std::size_t index, std::optional<std::uint64_t> seed) {
  const std::string where = "experiments[" + std::to_string(index) + "].";
  if (!j.is_object()) throw ConfigError(where + ": must be an object");
  reject_unknown(j, kExperimentKeys, where);
  if (!j.contains("experiment")) throw ConfigError(where + "experiment: required");
  const std::string kind = get_field<std::string>(j, "experiment", where, "");
  const auto parsed = parse_experiment_kind(kind);
  if (!parsed) throw ConfigError(where + "experiment: unknown experiment '" + kind + "'");

  ExperimentConfig c;
  c.experiment = *parsed;
  c.label = get_field<std::string>(j, "label", where, "");
  if (j.contains("spec")) c.spec = parse_spec(j.at("spec"), where);
  c.n_steps = get_field<std::size_t>(j, "n_steps", where, c.n_steps);
  c.trials = get_field<std::size_t>(j, "trials", where, c.trials);
  c.j_orders = get_field<std::vector<int>>(j, "j_orders", where, {});
  c.horizon = get_field<double>(j, "horizon", where, c.horizon);
  c.master_seed = get_field<std::uint64_t>(j, "master_seed", where, seed.value_or(c.master_seed));
  c.tolerance_sigma = get_field<double>(j, "tolerance_sigma", where, c.tolerance_sigma);
  if (j.contains("bias_allowance") && !j.at("bias_allowance").is_null()) {
    c.bias_allowance = get_field<double>(j, "bias_allowance", where, 0.0);
  }
  c.n_values = get_field<std::vector<std::size_t>>(j, "n_values", where, {});
  c.p_values = get_field<std::vector<double>>(j, "p_values", where, {});
  c.t_values = get_field<std::vector<double>>(j, "t_values", where, {});
  c.hill_k = get_field<std::size_t>(j, "hill_k", where, c.hill_k);
  c.tail_target = get_field<double>(j, "tail_target", where, c.tail_target);
  c.tail_band = get_field<double>(j, "tail_band", where, c.tail_band);
  c.grid_n = get_field<std::size_t>(j, "grid_n", where, c.grid_n);
  c.quad_points = get_field<std::size_t>(j, "quad_points", where, c.quad_points);
  c.sup_trials = get_field<std::size_t>(j, "sup_trials", where, c.sup_trials);
  c.dt = get_field<double>(j, "dt", where, c.dt);
  c.batch_trials = get_field<std::size_t>(j, "batch_trials", where, c.batch_trials);

  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(where + e.what());
  }
  return c;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::vector<ExperimentConfig> parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos ? pos - 1 : 0), '\n');
    throw ConfigError("malformed JSON at line " + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object with an \"experiments\" array");
  reject_unknown(doc, kTopKeys, "");
  if (!doc.contains("experiments") || !doc.at("experiments").is_array()) {
    throw ConfigError("experiments: required array");
  }
  const json& list = doc.at("experiments");
  if (list.empty()) throw ConfigError("experiments: must not be empty");
  std::optional<std::uint64_t> seed;
  if (doc.contains("master_seed")) seed = get_field<std::uint64_t>(doc, "master_seed", "", 0);

  std::vector<ExperimentConfig> out;
  for (std::size_t i = 0; i < list.size(); ++i) out.push_back(parse_experiment(list[i], i, seed));
  return out;
}

std::vector<ExperimentConfig> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  json spec;
  spec["d"] = c.spec.d;
  switch (c.spec.flavor) {
    case Flavor::Brownian:
      spec["flavor"] = "Brownian";
      spec["alpha"] = 2.0;
      spec["c"] = c.spec.c;
      break;
    case Flavor::Isotropic:
      spec["flavor"] = "Isotropic";
      spec["alpha"] = c.spec.alpha;
      spec["c"] = c.spec.c;
      break;
    case Flavor::CompoundPoissonHeavy:
      spec["flavor"] = "CompoundPoissonHeavy";
      spec["tail_alpha"] = c.spec.cpp.tail_alpha;
      spec["jump_rate"] = c.spec.cpp.jump_rate;
      spec["drift"] = c.spec.cpp.drift;
      spec["jump_law"] = c.spec.cpp.jump_law == JumpLaw::Pareto ? "Pareto" : "Gaussian";
      break;
  }
  json j;
  j["experiment"] = std::string(to_string(c.experiment));
  j["label"] = c.name();
  j["spec"] = spec;
  j["n_steps"] = c.n_steps;
  j["trials"] = c.trials;
  j["j_orders"] = c.orders();
  j["horizon"] = c.horizon;
  j["master_seed"] = c.master_seed;
  j["tolerance_sigma"] = c.tolerance_sigma;
  j["bias_allowance"] = c.band();
  j["n_values"] = c.n_values;
  j["p_values"] = c.p_values;
  j["t_values"] = c.t_values;
  j["hill_k"] = c.hill_k;
  j["tail_target"] = c.tail_target;
  j["tail_band"] = c.tail_band;
  j["grid_n"] = c.grid_n;
  j["quad_points"] = c.quad_points;
  j["sup_trials"] = c.sup_trials;
  j["dt"] = c.dt;
  j["batch_trials"] = c.batch_trials;
  return j;
}

std::string config_digest(const std::vector<ExperimentConfig>& configs) {
  json all = json::array();
  for (const auto& c : configs) all.push_back(config_to_json(c));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(all.dump())));
  return buf;
}

std::vector<ExperimentConfig> smoke_suite() {
  std::vector<ExperimentConfig> s;
  auto add = [&](ExperimentKind kind, std::string label, StableSpec spec, std::size_t n, std::size_t trials) {
    ExperimentConfig c;
    c.experiment = kind;
    c.label = std::move(label);
    c.spec = std::move(spec);
    c.n_steps = n;
    c.trials = trials;
    s.push_back(c);
    return &s.back();
  };
  add(ExperimentKind::IntrinsicVolumes, "smoke_iv_brownian_d2", StableSpec::brownian(2), 1000, 200);
  add(ExperimentKind::IntrinsicVolumes, "smoke_iv_stable_d2", StableSpec::isotropic(1.5, 1.0, 2), 1000, 200);
  // The 3-d volume of a 1000-step hull sits ~11% below its limit.
  add(ExperimentKind::IntrinsicVolumes, "smoke_iv_brownian_d3", StableSpec::brownian(3), 1000, 200)->bias_allowance = 0.15;
  add(ExperimentKind::GramDeterminant, "smoke_gram_d3", StableSpec::brownian(3), 1, 20000);
  add(ExperimentKind::BoundaryOrigin, "smoke_boundary", StableSpec::brownian(2), 1000, 200)->n_values = {100, 1000};
  add(ExperimentKind::InteriorEndpoint, "smoke_interior", StableSpec::brownian(2), 1000, 200)->n_values = {10, 1000};
  add(ExperimentKind::FacesCount, "smoke_faces_d2", StableSpec::brownian(2), 100, 200);
  add(ExperimentKind::FacesCount, "smoke_faces_d3", StableSpec::brownian(3), 100, 200);
  auto* tail = add(ExperimentKind::TailIndex, "smoke_tail", StableSpec::isotropic(1.5, 1.0, 2), 100, 2000);
  tail->j_orders = {1};
  tail->tail_band = 0.5;
  add(ExperimentKind::LpBrownian, "smoke_lp_brownian", StableSpec::brownian(2), 1000, 200)->p_values = {1.0, 2.0};
  auto* lps = add(ExperimentKind::LpStableConsistency, "smoke_lp_stable", StableSpec::isotropic(1.5, 1.0, 2), 1000, 200);
  lps->p_values = {1.0};
  auto* ren = add(ExperimentKind::Renewal, "smoke_renewal", StableSpec::brownian(2), 1, 200);
  ren->t_values = {10.0, 100.0};
  ren->batch_trials = 20000;
  auto* sh = add(ExperimentKind::ScaledHull, "smoke_scaled_hull", StableSpec::compound_poisson(2, 1.5, 3.0), 1, 200);
  sh->t_values = {100.0, 1000.0};
  auto* et = add(ExperimentKind::ExitTail, "smoke_exit_tail", StableSpec::compound_poisson(2, 1.5, 3.0), 1, 5000);
  et->tail_band = 0.3;
  for (auto& c : s) c.validate();
  return s;
}

}  // namespace levyhull
