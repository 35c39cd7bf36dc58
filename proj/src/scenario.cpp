#include "edpflow/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "edpflow/errors.hpp"

namespace edpflow {

using nlohmann::json;

namespace {

std::string at(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }
std::string at(const std::string& base, std::size_t index) { return base + "[" + std::to_string(index) + "]"; }

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(at(path, key), "missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) throw ConfigError(path, "must be positive");
  return v;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], at(path, i)));
  return out;
}

Expr expression(const json& j, const std::string& path) {
  if (j.is_number()) return Expr::constant(number(j, path));
  if (!j.is_string()) throw ConfigError(path, "expected a number or an expression string");
  try {
    return Expr::parse(j.get<std::string>());
  } catch (const ConfigError& e) {
    throw ConfigError(path, e.what());
  }
}

void check_length(std::size_t got, std::size_t want, const std::string& path) {
  if (got != want)
    throw ConfigError(path, "length " + std::to_string(got) + " does not match the species count " + std::to_string(want));
}

}  // namespace

ArrayFormat parse_format(const std::string& name, const std::string& path) {
  if (name == "csv") return ArrayFormat::csv;
  if (name == "binary") return ArrayFormat::binary;
  throw ConfigError(path, "unknown format '" + name + "' (csv, binary)");
}

std::string format_name(ArrayFormat f) { return f == ArrayFormat::csv ? "csv" : "binary"; }

std::vector<PointFn> Scenario::initial_functions() const {
  std::vector<PointFn> out;
  for (const auto& e : initial) out.emplace_back([e](std::span<const double> x) { return e(x); });
  return out;
}

ReactionNetwork network_from_json(const json& j, std::vector<std::string>* names, const std::string& path) {
  const json& sp = require(j, "species", path);
  std::size_t I = 0;
  std::vector<std::string> labels;
  if (sp.is_array()) {
    for (std::size_t i = 0; i < sp.size(); ++i) {
      if (!sp[i].is_string()) throw ConfigError(at(at(path, "species"), i), "expected a name");
      labels.push_back(sp[i].get<std::string>());
    }
    I = labels.size();
  } else {
    const int n = integer(sp, at(path, "species"));
    if (n < 1) throw ConfigError(at(path, "species"), "at least one species required");
    I = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < I; ++i) labels.push_back("X" + std::to_string(i + 1));
  }
  if (I == 0) throw ConfigError(at(path, "species"), "at least one species required");

  const std::vector<double> diffusion = numbers(require(j, "diffusion", path), at(path, "diffusion"));
  check_length(diffusion.size(), I, at(path, "diffusion"));

  const json& rd = require(j, "reference_density", path);
  const std::string rd_path = at(path, "reference_density");
  if (!rd.is_array()) throw ConfigError(rd_path, "expected an array");
  check_length(rd.size(), I, rd_path);
  ReferenceDensity omega;
  bool all_numbers = true;
  for (const auto& v : rd) all_numbers = all_numbers && v.is_number();
  if (all_numbers) {
    omega = ReferenceDensity(numbers(rd, rd_path));
  } else {
    std::vector<Expr> exprs;
    for (std::size_t i = 0; i < rd.size(); ++i) exprs.push_back(expression(rd[i], at(rd_path, i)));
    omega = ReferenceDensity(std::move(exprs));
  }

  std::vector<Reaction> reactions;
  if (auto it = j.find("reactions"); it != j.end()) {
    const std::string rpath = at(path, "reactions");
    if (!it->is_array()) throw ConfigError(rpath, "expected an array");
    for (std::size_t r = 0; r < it->size(); ++r) {
      const json& rj = (*it)[r];
      const std::string base = at(rpath, r);
      Reaction rx;
      rx.alpha = numbers(require(rj, "alpha", base), at(base, "alpha"));
      rx.beta = numbers(require(rj, "beta", base), at(base, "beta"));
      check_length(rx.alpha.size(), I, at(base, "alpha"));
      check_length(rx.beta.size(), I, at(base, "beta"));
      if (rj.contains("kappa")) {
        rx.kappa = number(rj["kappa"], at(base, "kappa"));
      } else if (rj.contains("k_fw") || rj.contains("k_bw")) {
        const double kf = positive(require(rj, "k_fw", base), at(base, "k_fw"));
        const double kb = positive(require(rj, "k_bw", base), at(base, "k_bw"));
        if (!omega.is_constant()) throw ConfigError(at(base, "k_fw"), "rate constants need a constant reference_density");
        std::vector<double> w(I);
        for (std::size_t i = 0; i < I; ++i) w[i] = omega.value(i, {});
        try {
          rx.kappa = kappa_from_rates(kf, kb, w, rx.alpha, rx.beta);
        } catch (const ConfigError& e) {
          throw ConfigError(base, e.what());
        }
      } else {
        throw ConfigError(at(base, "kappa"), "missing (give kappa or k_fw and k_bw)");
      }
      reactions.push_back(std::move(rx));
    }
  }
  if (names) *names = std::move(labels);
  return ReactionNetwork(I, std::move(reactions), diffusion, std::move(omega));
}

json network_to_json(const ReactionNetwork& net, const std::vector<std::string>& names) {
  json j;
  if (names.size() == net.species())
    j["species"] = names;
  else
    j["species"] = net.species();
  j["diffusion"] = net.diffusion();
  if (const auto& om = net.omega(); om.is_constant() && om.size() == net.species()) {
    std::vector<double> w(om.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = om.value(i, {});
    j["reference_density"] = w;
  } else {
    j["reference_density"] = net.omega().sources();
  }
  j["reactions"] = json::array();
  for (const auto& rx : net.reactions()) j["reactions"].push_back({{"alpha", rx.alpha}, {"beta", rx.beta}, {"kappa", rx.kappa}});
  return j;
}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw ConfigError("", "scenario must be a JSON object");
  Scenario sc;
  sc.network = network_from_json(require(j, "network", ""), &sc.species_names, "network");
  const std::size_t I = sc.network.species();

  const json& g = require(j, "grid", "");
  sc.dim = integer(require(g, "d", "grid"), "grid.d");
  if (sc.dim < 1 || sc.dim > 3) throw ConfigError("grid.d", "dimension must be 1, 2 or 3");
  if (g.contains("N_list")) {
    const json& nl = g["N_list"];
    if (!nl.is_array() || nl.empty()) throw ConfigError("grid.N_list", "expected a non-empty array");
    for (std::size_t q = 0; q < nl.size(); ++q) sc.n_list.push_back(integer(nl[q], at("grid.N_list", q)));
  } else {
    sc.n_list.push_back(integer(require(g, "N", "grid"), "grid.N"));
  }
  for (std::size_t q = 0; q < sc.n_list.size(); ++q)
    if (sc.n_list[q] < 1) throw ConfigError(g.contains("N_list") ? at("grid.N_list", q) : "grid.N", "must be positive");

  const ValidationReport rep = validate_network(sc.network, sc.dim);
  if (!rep.valid()) {
    const std::string& first = rep.violations.front();
    const auto colon = first.find(": ");
    throw ConfigError(first.substr(0, colon), colon == std::string::npos ? "invalid" : first.substr(colon + 2));
  }

  const json& init = require(j, "initial", "");
  if (!init.is_array()) throw ConfigError("initial", "expected one expression per species");
  check_length(init.size(), I, "initial");
  for (std::size_t i = 0; i < I; ++i) sc.initial.push_back(expression(init[i], at("initial", i)));

  const json& t = require(j, "time", "");
  sc.T = positive(require(t, "T", "time"), "time.T");
  sc.sample_dt = t.contains("sample_dt") ? positive(t["sample_dt"], "time.sample_dt") : std::min(sc.T, 1e-2);
  if (t.contains("scheme")) {
    if (!t["scheme"].is_string()) throw ConfigError("time.scheme", "expected a string");
    sc.scheme = parse_scheme(t["scheme"].get<std::string>());
  }
  if (t.contains("dt")) {
    const json& dt = t["dt"];
    if (dt.is_string()) {
      if (dt.get<std::string>() != "auto") throw ConfigError("time.dt", "expected a positive number or \"auto\"");
    } else {
      sc.dt = positive(dt, "time.dt");
    }
  }

  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (!o.is_object()) throw ConfigError("outputs", "expected an object");
    if (o.contains("directory")) {
      if (!o["directory"].is_string()) throw ConfigError("outputs.directory", "expected a string");
      sc.output_dir = o["directory"].get<std::string>();
    }
    if (o.contains("format")) {
      if (!o["format"].is_string()) throw ConfigError("outputs.format", "expected a string");
      sc.format = parse_format(o["format"].get<std::string>());
    }
  }

  if (j.contains("reference") && j["reference"].contains("fourier")) {
    const json& f = j["reference"]["fourier"];
    const std::string fp = "reference.fourier";
    FourierReference ref;
    ref.mean = numbers(require(f, "mean", fp), at(fp, "mean"));
    check_length(ref.mean.size(), I, at(fp, "mean"));
    if (f.contains("modes")) {
      const json& modes = f["modes"];
      if (!modes.is_array()) throw ConfigError(at(fp, "modes"), "expected an array");
      for (std::size_t q = 0; q < modes.size(); ++q) {
        const std::string mp = at(at(fp, "modes"), q);
        FourierMode m;
        const int s = integer(require(modes[q], "species", mp), at(mp, "species"));
        if (s < 0 || static_cast<std::size_t>(s) >= I) throw ConfigError(at(mp, "species"), "out of range");
        m.species = static_cast<std::size_t>(s);
        const json& k = require(modes[q], "k", mp);
        if (!k.is_array() || k.size() != static_cast<std::size_t>(sc.dim))
          throw ConfigError(at(mp, "k"), "expected " + std::to_string(sc.dim) + " integers");
        for (int l = 0; l < sc.dim; ++l) m.k[l] = integer(k[l], at(at(mp, "k"), l));
        m.amplitude = number(require(modes[q], "a", mp), at(mp, "a"));
        ref.modes.push_back(m);
      }
    }
    sc.fourier = std::move(ref);
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string(), "cannot open scenario file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string(), std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

CellField initial_state(const Scenario& sc, const DiscreteSystem& sys) {
  const auto fns = sc.initial_functions();
  CellField c0 = discretize(sys.grid, fns, 8);
  for (std::size_t i = 0; i < c0.rows(); ++i)
    for (std::size_t k = 0; k < c0.cells(); ++k)
      if (!(c0(i, k) >= 0.0) || !std::isfinite(c0(i, k)))
        throw ConfigError("initial[" + std::to_string(i) + "]", "initial density must be finite and non-negative");
  return c0;
}

StudySetup study_setup(const Scenario& sc) {
  StudySetup s;
  s.network = sc.network;
  s.dim = sc.dim;
  s.levels = sc.n_list;
  s.initial = sc.initial_functions();
  s.T = sc.T;
  s.sample_dt = sc.sample_dt;
  s.scheme = sc.scheme;
  s.dt = sc.dt;
  s.fourier = sc.fourier;
  return s;
}

}  // namespace edpflow
