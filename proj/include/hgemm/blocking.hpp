#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "hgemm/error.hpp"

namespace hgemm {

/// Cache block sizes (mc, nc, kc) and register block sizes (mr, nr).
struct BlockingConfig {
  std::size_t mc = 64;
  std::size_t nc = 64;
  std::size_t kc = 1024;
  std::size_t mr = 2;
  std::size_t nr = 2;

  /// mr = nr = 2 selects the stage-1 packed layout and the 2x2 kernel.
  bool uses_2x2_kernel() const { return mr == 2 && nr == 2; }

  void validate() const {
    if (mc == 0 || nc == 0 || kc == 0 || mr == 0 || nr == 0)
      throw config_error("blocking parameters must be positive");
    if (mc % mr != 0) throw config_error("mc must be a multiple of mr");
    if (nc % nr != 0) throw config_error("nc must be a multiple of nr");
    // Panel buffers hold kc*mc and kc*nc quaternions of 32 bytes each.
    constexpr std::size_t limit = (std::size_t{1} << 40) / 32;
    if (kc > limit / mc || kc > limit / nc) throw config_error("panel buffers too large");
  }

  friend bool operator==(const BlockingConfig&, const BlockingConfig&) = default;
};

// ---------------------------------------------------------------------------
// Tuned-config file: "key=value" lines, '#' comments. Required keys are
// version (=1), mc, nc, kc; mr, nr, host and timestamp are optional.

inline constexpr int config_file_version = 1;

struct ConfigFile {
  BlockingConfig config;
  std::string host;
  std::string timestamp;
};

inline std::string format_config_file(const ConfigFile& f) {
  std::ostringstream os;
  os << "# hgemm blocking parameters\n"
     << "version=" << config_file_version << "\n"
     << "mc=" << f.config.mc << "\n"
     << "nc=" << f.config.nc << "\n"
     << "kc=" << f.config.kc << "\n"
     << "mr=" << f.config.mr << "\n"
     << "nr=" << f.config.nr << "\n"
     << "host=" << f.host << "\n"
     << "timestamp=" << f.timestamp << "\n";
  return os.str();
}

inline ConfigFile parse_config_file(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw parse_error("config line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  auto number = [&](const std::string& key, bool required, std::size_t fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      if (required) throw parse_error("config: missing key '" + key + "'");
      return fallback;
    }
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(it->second, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != it->second.size() || it->second[0] == '-')
      throw parse_error("config: key '" + key + "' is not a non-negative integer");
    return static_cast<std::size_t>(v);
  };

  if (number("version", true, 0) != config_file_version)
    throw parse_error("config: unsupported version");
  ConfigFile f;
  f.config.mc = number("mc", true, 0);
  f.config.nc = number("nc", true, 0);
  f.config.kc = number("kc", true, 0);
  f.config.mr = number("mr", false, 2);
  f.config.nr = number("nr", false, 2);
  if (auto it = kv.find("host"); it != kv.end()) f.host = it->second;
  if (auto it = kv.find("timestamp"); it != kv.end()) f.timestamp = it->second;
  try {
    f.config.validate();
  } catch (const config_error& e) {
    throw parse_error(std::string("config: ") + e.what());
  }
  return f;
}

inline ConfigFile load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("config: cannot open '" + path + "'");
  return parse_config_file(in);
}

inline void save_config_file(const std::string& path, const ConfigFile& f) {
  std::ofstream out(path);
  if (!out) throw parse_error("config: cannot write '" + path + "'");
  out << format_config_file(f);
}

/// Built-in defaults, or the file named by HGEMM_CONFIG when set.
inline BlockingConfig default_blocking_config() {
  if (const char* path = std::getenv("HGEMM_CONFIG"); path != nullptr && *path != '\0')
    return load_config_file(path).config;
  return {};
}

}  // namespace hgemm
