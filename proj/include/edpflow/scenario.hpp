#pragma once

// Scenario files (JSON): network, grid, initial data, time stepping and outputs.
// Every parse or validation failure is a ConfigError naming the JSON path.
//
// {
//   "network": {
//     "species": ["X1", "X2"],                       // or a count
//     "reactions": [{"alpha": [1,0], "beta": [0,1], "kappa": 1}],   // or "k_fw"/"k_bw"
//     "diffusion": [1, 1],
//     "reference_density": [1, 1]                     // numbers or expressions
//   },
//   "grid": {"d": 1, "N": 16},                        // or "N_list": [8,16,32,64]
//   "initial": ["1 + 0.5*cos(2*pi*x)", "1"],
//   "time": {"T": 1, "sample_dt": 1e-3, "scheme": "rk4", "dt": 1e-4},   // "dt": "auto" allowed
//   "outputs": {"directory": "out", "format": "csv"},                 // or "binary"
//   "reference": {"fourier": {"mean": [1], "modes": [{"species": 0, "k": [1], "a": 0.5}]}}
// }

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edpflow/continuum.hpp"
#include "edpflow/expr.hpp"
#include "edpflow/network.hpp"
#include "edpflow/solver.hpp"
#include "json.hpp"

namespace edpflow {

enum class ArrayFormat { csv, binary };

ArrayFormat parse_format(const std::string& name, const std::string& path = "outputs.format");
std::string format_name(ArrayFormat f);

struct Scenario {
  ReactionNetwork network;
  std::vector<std::string> species_names;
  int dim = 1;
  std::vector<int> n_list;  // one entry for a plain simulation
  std::vector<Expr> initial;
  double T = 1.0;
  double sample_dt = 1e-2;
  Scheme scheme = Scheme::rk4;
  std::optional<double> dt;
  std::filesystem::path output_dir = "edpflow-out";
  ArrayFormat format = ArrayFormat::csv;
  std::optional<FourierReference> fourier;

  int n() const { return n_list.front(); }
  std::vector<PointFn> initial_functions() const;
};

ReactionNetwork network_from_json(const nlohmann::json& j, std::vector<std::string>* names = nullptr,
                                  const std::string& path = "network");
nlohmann::json network_to_json(const ReactionNetwork& net, const std::vector<std::string>& names = {});

/// Parses and validates (network invariants, grid, initial data shapes).
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& file);

/// Discretized, validated initial state on the scenario grid of resolution n.
CellField initial_state(const Scenario& sc, const DiscreteSystem& sys);

StudySetup study_setup(const Scenario& sc);

}  // namespace edpflow
