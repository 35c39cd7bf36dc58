#include "edpflow/trajectory_io.hpp"

#include <fmt/format.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "edpflow/errors.hpp"

namespace edpflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

void put_le(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int q = 0; q < 8; ++q) b[q] = static_cast<unsigned char>(bits >> (8 * q));
  out.write(reinterpret_cast<const char*>(b), 8);
}

bool get_le(std::istream& in, double& v) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) return false;
  std::uint64_t bits = 0;
  for (int q = 0; q < 8; ++q) bits |= static_cast<std::uint64_t>(b[q]) << (8 * q);
  v = std::bit_cast<double>(bits);
  return true;
}

std::ofstream open_out(const fs::path& file, bool binary) {
  std::ofstream out(file, binary ? std::ios::binary : std::ios::out);
  if (!out) throw ConfigError(file.string(), "cannot open for writing");
  return out;
}

template <class Get>
void write_array(const fs::path& dir, const std::string& stem, const Trajectory& traj, ArrayFormat format,
                 const std::string& header, Get get) {
  if (format == ArrayFormat::binary) {
    auto out = open_out(dir / (stem + ".bin"), true);
    for (const auto& s : traj.samples)
      for (double v : get(s)) put_le(out, v);
    if (!out) throw ConfigError((dir / (stem + ".bin")).string(), "write failed");
  } else {
    auto out = open_out(dir / (stem + ".csv"), false);
    out << header << '\n';
    for (const auto& s : traj.samples) {
      out << num(s.t);
      for (double v : get(s)) out << ',' << num(v);
      out << '\n';
    }
    if (!out) throw ConfigError((dir / (stem + ".csv")).string(), "write failed");
  }
}

std::string array_header(const char* symbol, const char* unit, std::size_t rows, std::size_t cells,
                         std::size_t dirs) {
  std::string h = "t [time]";
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t k = 0; k < cells; ++k)
      for (std::size_t e = 0; e < dirs; ++e) {
        h += fmt::format(",{}[{},{}", symbol, r, k);
        if (dirs > 1 || symbol[0] == 'F') h += fmt::format(",{}", e);
        h += fmt::format("] [{}]", unit);
      }
  return h;
}

std::vector<double> read_values(const fs::path& dir, const std::string& stem, ArrayFormat format,
                                std::size_t per_sample, std::size_t samples, std::vector<double>* times) {
  std::vector<double> out;
  out.reserve(per_sample * samples);
  if (format == ArrayFormat::binary) {
    const fs::path file = dir / (stem + ".bin");
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError(file.string(), "cannot open");
    double v;
    while (get_le(in, v)) out.push_back(v);
    if (out.size() != per_sample * samples) throw ConfigError(file.string(), "unexpected number of values");
    return out;
  }
  const fs::path file = dir / (stem + ".csv");
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string(), "cannot open");
  std::string line;
  std::getline(in, line);  // header
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      double v;
      try {
        std::size_t used = 0;
        v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ConfigError(file.string(), fmt::format("line {}: not a number '{}'", rows + 2, cell));
      }
      if (col == 0) {
        if (times) times->push_back(v);
      } else {
        out.push_back(v);
      }
      ++col;
    }
    if (col != per_sample + 1) throw ConfigError(file.string(), fmt::format("line {}: expected {} columns", rows + 2, per_sample + 1));
    ++rows;
  }
  if (rows != samples) throw ConfigError(file.string(), "unexpected number of samples");
  return out;
}

}  // namespace

void write_functionals_csv(const Trajectory& traj, std::ostream& out) {
  out << "t [time],E [energy],R_diff [energy/time],R_react [energy/time],S_diff [energy/time],"
         "S_react [energy/time],L_cum [energy]\n";
  double cumulative = 0.0;
  for (std::size_t m = 0; m < traj.samples.size(); ++m) {
    const auto& s = traj.samples[m];
    if (m > 0) {
      const auto& p = traj.samples[m - 1];
      cumulative += 0.5 * (p.report.dissipation_rate() + s.report.dissipation_rate()) * (s.t - p.t);
    }
    const double l = m == 0 ? 0.0 : s.report.energy - traj.samples.front().report.energy + cumulative;
    out << num(s.t) << ',' << num(s.report.energy) << ',' << num(s.report.r_diff) << ',' << num(s.report.r_react)
        << ',' << num(s.report.s_diff) << ',' << num(s.report.s_react) << ',' << num(l) << '\n';
  }
}

void write_functionals_csv(const Trajectory& traj, const fs::path& file) {
  auto out = open_out(file, false);
  write_functionals_csv(traj, out);
  if (!out) throw ConfigError(file.string(), "write failed");
}

void write_trajectory(const fs::path& dir, const Trajectory& traj, const ReactionNetwork& net,
                      const std::vector<std::string>& species_names, ArrayFormat format) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError(dir.string(), "cannot create directory: " + ec.message());
  if (traj.samples.empty()) throw DomainError("write_trajectory: empty trajectory");

  const auto& s0 = traj.samples.front();
  json meta;
  meta["format_version"] = kTrajectoryFormatVersion;
  meta["scheme"] = traj.scheme;
  meta["dt"] = traj.dt;
  meta["final_dt"] = traj.final_dt;
  meta["dt_policy"] = traj.dt_policy;
  meta["sample_dt"] = traj.sample_dt;
  meta["accepted_steps"] = traj.accepted_steps;
  meta["rejected_steps"] = traj.rejected_steps;
  meta["grid"] = {{"d", traj.dim}, {"N", traj.n}};
  meta["network"] = network_to_json(net, species_names);
  meta["fingerprint"] = fmt::format("{:016x}", traj.fingerprint);
  meta["arrays"] = {{"format", format_name(format)},
                    {"byte_order", "little-endian"},
                    {"dtype", "float64"},
                    {"samples", traj.samples.size()},
                    {"species", s0.c.rows()},
                    {"reactions", s0.flux_react.rows()},
                    {"cells", s0.c.cells()},
                    {"dirs", s0.flux_diff.dirs()},
                    {"layout", "row-major (row, cell, direction)"}};
  {
    auto out = open_out(dir / "metadata.json", false);
    out << meta.dump(2) << '\n';
  }

  if (format == ArrayFormat::binary) {
    auto out = open_out(dir / "t.bin", true);
    for (const auto& s : traj.samples) put_le(out, s.t);
  }
  write_array(dir, "c", traj, format, array_header("c", "concentration", s0.c.rows(), s0.c.cells(), 1),
              [](const Sample& s) { return s.c.flat(); });
  write_array(dir, "F", traj, format,
              array_header("F", "flux", s0.flux_diff.rows(), s0.flux_diff.cells(), s0.flux_diff.dirs()),
              [](const Sample& s) { return s.flux_diff.flat(); });
  write_array(dir, "J", traj, format, array_header("J", "flux", s0.flux_react.rows(), s0.flux_react.cells(), 1),
              [](const Sample& s) { return s.flux_react.flat(); });
  write_functionals_csv(traj, dir / "functionals.csv");
}

LoadedTrajectory read_trajectory(const fs::path& dir) {
  const fs::path mfile = dir / "metadata.json";
  std::ifstream in(mfile);
  if (!in) throw ConfigError(mfile.string(), "cannot open");
  json meta;
  try {
    meta = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(mfile.string(), std::string("invalid JSON: ") + e.what());
  }
  LoadedTrajectory out;
  try {
    if (meta.at("format_version").get<int>() != kTrajectoryFormatVersion)
      throw ConfigError(mfile.string(), "unsupported format_version");
    out.network = network_from_json(meta.at("network"), &out.species_names, "network");
    out.grid = TorusGrid(meta.at("grid").at("d").get<int>(), meta.at("grid").at("N").get<int>());
    auto& t = out.traj;
    t.scheme = meta.at("scheme").get<std::string>();
    t.dt = meta.at("dt").get<double>();
    t.final_dt = meta.value("final_dt", t.dt);
    t.dt_policy = meta.value("dt_policy", std::string("auto"));
    t.sample_dt = meta.at("sample_dt").get<double>();
    t.accepted_steps = meta.value("accepted_steps", std::size_t{0});
    t.rejected_steps = meta.value("rejected_steps", std::size_t{0});
    t.dim = out.grid.dim();
    t.n = out.grid.n();
    t.fingerprint = std::stoull(meta.at("fingerprint").get<std::string>(), nullptr, 16);
  } catch (const json::exception& e) {
    throw ConfigError(mfile.string(), std::string("malformed metadata: ") + e.what());
  }
  if (out.network.fingerprint() != out.traj.fingerprint)
    throw ConfigError(mfile.string(), "network fingerprint does not match the stored network");

  const json& arr = meta.at("arrays");
  const ArrayFormat format = parse_format(arr.at("format").get<std::string>(), "arrays.format");
  const std::size_t samples = arr.at("samples").get<std::size_t>();
  const std::size_t I = arr.at("species").get<std::size_t>();
  const std::size_t R = arr.at("reactions").get<std::size_t>();
  const std::size_t K = arr.at("cells").get<std::size_t>();
  const std::size_t D = arr.at("dirs").get<std::size_t>();
  if (I != out.network.species() || R != out.network.reaction_count() || K != out.grid.cells() ||
      D != static_cast<std::size_t>(out.grid.dim()))
    throw ConfigError(mfile.string(), "array shape does not match grid and network");

  std::vector<double> times;
  std::vector<double> c, f, j;
  if (format == ArrayFormat::binary) {
    times = read_values(dir, "t", format, 1, samples, nullptr);
    c = read_values(dir, "c", format, I * K, samples, nullptr);
  } else {
    c = read_values(dir, "c", format, I * K, samples, &times);
  }
  f = read_values(dir, "F", format, I * K * D, samples, nullptr);
  j = read_values(dir, "J", format, R * K, samples, nullptr);

  for (std::size_t m = 0; m < samples; ++m) {
    Sample s;
    s.t = times[m];
    s.c = CellField(I, K);
    s.flux_diff = EdgeField(I, K, D);
    s.flux_react = ReactField(R, K);
    std::copy_n(c.begin() + m * I * K, I * K, s.c.flat().begin());
    std::copy_n(f.begin() + m * I * K * D, I * K * D, s.flux_diff.flat().begin());
    std::copy_n(j.begin() + m * R * K, R * K, s.flux_react.flat().begin());
    if (m > 0 && !(s.t > out.traj.samples.back().t)) throw ConfigError((dir / "c").string(), "sample times must increase");
    out.traj.samples.push_back(std::move(s));
  }
  return out;
}

}  // namespace edpflow
