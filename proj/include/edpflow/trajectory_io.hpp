#pragma once

// Trajectory directories.
//
//   metadata.json    format_version, scheme, dt policy, grid, network, fingerprint,
//                    array layout (format, species, reactions, cells, dirs, samples)
//   functionals.csv  t, E, R_diff, R_react, S_diff, S_react, L_cum per sample
//   c.*, F.*, J.*    sample arrays (plus t.bin in binary format), either
//                    .bin  little-endian IEEE-754 float64, samples concatenated, each in
//                          the row-major layout (row, cell, direction)
//                    .csv  one line per sample: t then the flattened values (%.17g)

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "edpflow/scenario.hpp"
#include "edpflow/solver.hpp"

namespace edpflow {

inline constexpr int kTrajectoryFormatVersion = 1;

void write_functionals_csv(const Trajectory& traj, std::ostream& out);
void write_functionals_csv(const Trajectory& traj, const std::filesystem::path& file);

void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj, const ReactionNetwork& net,
                      const std::vector<std::string>& species_names, ArrayFormat format);

struct LoadedTrajectory {
  ReactionNetwork network;
  std::vector<std::string> species_names;
  TorusGrid grid;
  Trajectory traj;  // reports are not loaded; recompute them from (c, F, J)
};

/// Throws ConfigError (naming the file) on unreadable or inconsistent artifacts.
LoadedTrajectory read_trajectory(const std::filesystem::path& dir);

}  // namespace edpflow
