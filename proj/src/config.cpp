#include "lab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lab {

using nlohmann::json;

std::vector<double> TGridSpec::make() const {
  if (points < 1) throw ConfigError("t_grid: points must be >= 1");
  if (start < 0 || stop < start) throw ConfigError("t_grid: bad interval");
  std::vector<double> grid;
  grid.reserve(points);
  if (points == 1) {
    grid.push_back(start);
    return grid;
  }
  if (spacing == Spacing::linear) {
    for (int i = 0; i < points; ++i)
      grid.push_back(start + (stop - start) * i / (points - 1));
  } else {
    if (start <= 0) throw ConfigError("t_grid: log spacing needs start > 0");
    const double la = std::log(start), lb = std::log(stop);
    for (int i = 0; i < points; ++i)
      grid.push_back(std::exp(la + (lb - la) * i / (points - 1)));
  }
  grid.back() = stop;
  return grid;
}

namespace {

const std::set<std::string> kExperiments = {"check", "lightcone", "localization",
                                            "clustering", "ultralocal"};
const std::set<std::string> kFamilies = {"phi_mixture", "psi_mixture",
                                         "hamiltonian_depolarizing",
                                         "twirl_chain", "mixture_depolarizing"};

json expect_object(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_object())
    throw ConfigError("config: missing object '" + key + "'");
  return j.at(key);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  ExperimentConfig cfg;
  if (!j.contains("experiment") || !j.at("experiment").is_string())
    throw ConfigError("config: missing string 'experiment'");
  cfg.experiment = j.at("experiment").get<std::string>();
  if (!kExperiments.count(cfg.experiment))
    throw ConfigError("config: unknown experiment '" + cfg.experiment + "'");

  json jm = expect_object(j, "model");
  if (!jm.contains("family") || !jm.at("family").is_string())
    throw ConfigError("config: model.family required");
  cfg.model.family = jm.at("family").get<std::string>();
  if (!kFamilies.count(cfg.model.family))
    throw ConfigError("config: unknown model family '" + cfg.model.family + "'");
  if (!jm.contains("n_sites") || !jm.at("n_sites").is_number_integer())
    throw ConfigError("config: model.n_sites required");
  cfg.model.n_sites = jm.at("n_sites").get<int>();
  if (cfg.model.n_sites < 2 || cfg.model.n_sites > 10)
    throw ConfigError("config: n_sites must lie in [2, 10]");
  cfg.model.local_dim = jm.value("local_dim", 2);
  if (cfg.model.local_dim != 2)
    throw ConfigError("config: only local_dim = 2 models are built in");
  cfg.model.params_json = jm.value("params", json::object()).dump();

  if (j.contains("t_grid")) {
    json jt = expect_object(j, "t_grid");
    cfg.t_grid.start = jt.value("start", 0.0);
    cfg.t_grid.stop = jt.value("stop", 1.0);
    cfg.t_grid.points = jt.value("points", 2);
    const std::string sp = jt.value("spacing", "linear");
    if (sp == "linear")
      cfg.t_grid.spacing = TGridSpec::Spacing::linear;
    else if (sp == "log")
      cfg.t_grid.spacing = TGridSpec::Spacing::log;
    else
      throw ConfigError("config: t_grid.spacing must be linear|log");
    cfg.t_grid.make();  // validates
  }

  if (j.contains("F")) {
    json jf = expect_object(j, "F");
    const std::string form = jf.value("form", "exp_power");
    if (form == "power")
      cfg.F.form = ReproducingFunction::Form::power;
    else if (form == "exponential")
      cfg.F.form = ReproducingFunction::Form::exponential;
    else if (form == "exp_power")
      cfg.F.form = ReproducingFunction::Form::exp_power;
    else
      throw ConfigError("config: F.form must be power|exponential|exp_power");
    cfg.F.a = jf.value("a", 0.5);
    cfg.F.p = jf.value("p", 2.0);
    cfg.F.mu = jf.value("mu", 0.25);
    if (cfg.F.mu < 0) throw ConfigError("config: F.mu must be >= 0");
  }

  if (j.contains("site_pairs")) {
    if (!j.at("site_pairs").is_array())
      throw ConfigError("config: site_pairs must be an array");
    for (const auto& p : j.at("site_pairs")) {
      if (!p.is_array() || p.size() != 2)
        throw ConfigError("config: site_pairs entries must be [a, b]");
      int a = p.at(0).get<int>(), b = p.at(1).get<int>();
      if (a < 0 || b < 0 || a >= cfg.model.n_sites || b >= cfg.model.n_sites ||
          a == b)
        throw ConfigError("config: site pair out of range");
      cfg.site_pairs.emplace_back(a, b);
    }
  }

  cfg.seed = j.value("seed", 1ull);
  cfg.hypothesis_tolerance = j.value("hypothesis_tolerance", 1e-10);
  if (j.contains("gammas")) {
    for (const auto& g : j.at("gammas")) {
      const double gv = g.get<double>();
      if (gv <= 0) throw ConfigError("config: gammas must be positive");
      cfg.gammas.push_back(gv);
    }
  }
  cfg.clustering_xi = j.value("xi", 1.0);
  cfg.clustering_v = j.value("v", 0.0);
  cfg.observable = j.value("observable", std::string("sz"));
  if (cfg.observable != "sz" && cfg.observable != "sx")
    throw ConfigError("config: observable must be sz|sx");
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace lab
