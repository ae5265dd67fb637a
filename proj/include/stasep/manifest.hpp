#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "stasep/distribution_table.hpp"

namespace stasep::manifest {

inline std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = 14695981039346656037ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("file_digest: cannot open " + path);
  std::uint64_t h = 14695981039346656037ull;
  char buf[65536];
  while (in) {
    in.read(buf, sizeof(buf));
    h = fnv1a64(buf, static_cast<std::size_t>(in.gcount()), h);
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline std::string now_iso() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

inline constexpr const char* kVersion = "stasep 0.1.0";

// Every run emits one of these next to its outputs; re-running with the
// recorded config and seed reproduces the output digests exactly.
struct RunManifest {
  std::string command_line;
  nlohmann::json config;
  std::uint64_t master_seed = 0;
  std::string started_at;
  std::string finished_at;
  std::vector<std::pair<std::string, std::string>> outputs;  // path, digest

  void add_output(const std::string& path) { outputs.emplace_back(path, file_digest(path)); }

  void write(const std::string& path) const {
    nlohmann::json j;
    j["tool"] = kVersion;
    j["command_line"] = command_line;
    j["config"] = config;
    j["master_seed"] = master_seed;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& [p, d] : outputs) outs.push_back({{"path", p}, {"digest", d}});
    j["outputs"] = outs;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("manifest: cannot write " + path);
    out << j.dump(2) << "\n";
  }
};

inline void write_table_csv(const std::string& path, const table::DistributionTable& t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_table_csv: cannot write " + path);
  out << "s,cdf,density\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    out << t.grid[i] << ',' << t.cdf[i] << ',';
    if (t.has_density())
      out << t.density[i];
    else
      out << "";
    out << '\n';
  }
}

inline void write_columns_csv(const std::string& path, const std::vector<std::string>& names,
                              const std::vector<std::vector<double>>& cols) {
  if (names.size() != cols.size()) throw std::invalid_argument("write_columns_csv: shape mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_columns_csv: cannot write " + path);
  for (std::size_t i = 0; i < names.size(); ++i) out << names[i] << (i + 1 < names.size() ? ',' : '\n');
  out << std::setprecision(17);
  const std::size_t rows = cols.empty() ? 0 : cols[0].size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c)
      out << cols[c][r] << (c + 1 < cols.size() ? ',' : '\n');
  }
}

}  // namespace stasep::manifest
