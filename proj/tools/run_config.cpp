#include "run_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nld::cli {

namespace {

std::vector<std::string> split(std::string const& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(std::string const& s, char const* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (std::exception const&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument(std::string(what) + ": not a number: '" + s + "'");
  return v;
}

int to_int(std::string const& s, char const* what) {
  double const v = to_double(s, what);
  if (v != static_cast<int>(v)) throw std::invalid_argument(std::string(what) + ": not an integer: '" + s + "'");
  return static_cast<int>(v);
}

} // namespace

ModelChoice ModelChoice::parse(std::string const& text) {
  ModelChoice c;
  if (text == "njl") {
    c.family = Family::Njl;
    c.p = 1.0;
  } else if (text == "soler") {
    c.family = Family::Soler;
    c.p = 0.0;
  } else if (text.rfind("p:", 0) == 0) {
    c.family = Family::Interpolating;
    c.p = to_double(text.substr(2), "--model p:<value>");
    if (!(c.p >= 0.0 && c.p <= 1.0)) throw std::invalid_argument("--model: p must lie in [0, 1]");
  } else {
    throw std::invalid_argument("--model: expected njl, soler or p:<value>, got '" + text + "'");
  }
  return c;
}

std::string ModelChoice::name() const {
  switch (family) {
  case Family::Njl:
    return "njl";
  case Family::Soler:
    return "soler";
  default: {
    std::ostringstream os;
    os << "p:" << p;
    return os.str();
  }
  }
}

ModuleLaw ModelChoice::law() const {
  switch (family) {
  case Family::Njl:
    return ModuleLaw::Njl;
  case Family::Soler:
    return ModuleLaw::Soler;
  default:
    return ModuleLaw::Interpolating;
  }
}

std::optional<Model> ModelChoice::model() const {
  if (family == Family::Njl) return Model::NJL;
  if (family == Family::Soler) return Model::Soler;
  return std::nullopt;
}

ModelSpec RunConfig::spec() const {
  ModelSpec s{mass, model.p, energy.value_or(mass), l.value_or(0.5)};
  s.validate();
  return s;
}

void RunConfig::validate() const {
  spec();
  grid.validate();
  if (!(grid.theta_margin > 0.0)) throw std::invalid_argument("grid: theta margin must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("--tol must be positive");
  if (!(mask.radial >= 0.0) || !(mask.angular >= 0.0)) throw std::invalid_argument("--mask-margin must be >= 0");
  if (!format.empty() && format != "csv" && format != "json")
    throw std::invalid_argument("--format: expected csv or json");
  if (scan_el && (scan_el->first < 2 || scan_el->second < 2))
    throw std::invalid_argument("--scan-el: need at least 2x2 cells");
}

std::pair<int, int> parse_scan_el(std::string const& text) {
  auto pos = text.find_first_of("xX*");
  if (pos == std::string::npos) throw std::invalid_argument("--scan-el: expected NxM, got '" + text + "'");
  return {to_int(text.substr(0, pos), "--scan-el"), to_int(text.substr(pos + 1), "--scan-el")};
}

FieldGrid parse_grid(std::string const& text, FieldGrid base) {
  auto const parts = split(text, ',');
  if (parts.size() != 4) throw std::invalid_argument("--grid: expected r_min,r_max,n_r,n_theta");
  base.r_min = to_double(parts[0], "--grid r_min");
  base.r_max = to_double(parts[1], "--grid r_max");
  base.n_r = to_int(parts[2], "--grid n_r");
  base.n_theta = to_int(parts[3], "--grid n_theta");
  base.validate();
  return base;
}

SingularMask parse_mask(std::string const& text) {
  auto const parts = split(text, ',');
  SingularMask m;
  if (parts.size() == 1) {
    m.radial = m.angular = to_double(parts[0], "--mask-margin");
  } else if (parts.size() == 2) {
    m.radial = to_double(parts[0], "--mask-margin radial");
    m.angular = to_double(parts[1], "--mask-margin angular");
  } else {
    throw std::invalid_argument("--mask-margin: expected <margin> or <radial>,<angular>");
  }
  return m;
}

void apply_json(RunConfig& cfg, nlohmann::json const& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  if (j.contains("model")) {
    cfg.model = ModelChoice::parse(j.at("model").get<std::string>());
    cfg.model_set = true;
  }
  if (j.contains("p")) {
    cfg.model = ModelChoice::parse("p:" + std::to_string(j.at("p").get<double>()));
    cfg.model_set = true;
  }
  if (j.contains("mass")) cfg.mass = j.at("mass").get<double>();
  if (j.contains("energy")) cfg.energy = j.at("energy").get<double>();
  if (j.contains("l")) cfg.l = j.at("l").get<double>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
  if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
  if (j.contains("format")) cfg.format = j.at("format").get<std::string>();
  if (j.contains("scan_el")) cfg.scan_el = parse_scan_el(j.at("scan_el").get<std::string>());
  if (j.contains("mask_margin")) {
    auto const& mm = j.at("mask_margin");
    if (mm.is_array()) {
      cfg.mask.radial = mm.at(0).get<double>();
      cfg.mask.angular = mm.at(1).get<double>();
    } else {
      cfg.mask.radial = cfg.mask.angular = mm.get<double>();
    }
  }
  if (j.contains("grid")) {
    cfg.grid_set = true;
    auto const& g = j.at("grid");
    if (g.is_string()) {
      cfg.grid = parse_grid(g.get<std::string>(), cfg.grid);
    } else {
      cfg.grid.r_min = g.value("r_min", cfg.grid.r_min);
      cfg.grid.r_max = g.value("r_max", cfg.grid.r_max);
      cfg.grid.n_r = g.value("n_r", cfg.grid.n_r);
      cfg.grid.n_theta = g.value("n_theta", cfg.grid.n_theta);
      cfg.grid.theta_margin = g.value("theta_margin", cfg.grid.theta_margin);
    }
  }
  if (j.contains("ode")) {
    auto const& o = j.at("ode");
    cfg.ode.r_start = o.value("r_start", cfg.ode.r_start);
    cfg.ode.r_end = o.value("r_end", cfg.ode.r_end);
    cfg.ode.rtol = o.value("rtol", cfg.ode.rtol);
    cfg.ode.atol = o.value("atol", cfg.ode.atol);
    if (o.contains("x0")) cfg.ode.x0 = o.at("x0").get<double>();
    if (o.contains("g0")) cfg.ode.g0 = o.at("g0").get<double>();
  }
}

RunConfig load_config_file(std::string const& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (nlohmann::json::exception const& e) {
    throw std::runtime_error("config file " + path + ": " + e.what());
  }
  apply_json(base, j);
  return base;
}

nlohmann::ordered_json describe(RunConfig const& cfg) {
  ModelSpec const s = cfg.spec();
  nlohmann::ordered_json j;
  j["model"] = cfg.model.name();
  j["p"] = s.p;
  j["mass"] = s.m;
  j["energy"] = s.E;
  j["l"] = s.l;
  j["grid"] = {{"r_min", cfg.grid.r_min},
               {"r_max", cfg.grid.r_max},
               {"n_r", cfg.grid.n_r},
               {"n_theta", cfg.grid.n_theta},
               {"theta_margin", cfg.grid.theta_margin}};
  j["seed"] = cfg.seed;
  j["tol"] = cfg.tol;
  j["mask_margin"] = {cfg.mask.radial, cfg.mask.angular};
  return j;
}

} // namespace nld::cli
