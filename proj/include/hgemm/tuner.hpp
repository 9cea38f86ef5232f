#pragma once

// Exhaustive grid search over cache block sizes for gemm_opt.

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include <sys/utsname.h>

#include "hgemm/blocking.hpp"
#include "hgemm/error.hpp"
#include "hgemm/gemm_opt.hpp"
#include "hgemm/timing.hpp"

namespace hgemm {

struct TuneSpace {
  std::vector<std::size_t> mc;
  std::vector<std::size_t> nc;
  std::vector<std::size_t> kc;
  std::size_t mr = 2;
  std::size_t nr = 2;
  std::size_t probe_n = 512;  // square probe problem
  std::size_t reps = 5;
  std::uint64_t seed = 1;

  /// Candidates in mc -> nc -> kc order, each validated.
  std::vector<BlockingConfig> candidates() const {
    if (mc.empty() || nc.empty() || kc.empty()) throw config_error("empty tuning space");
    std::vector<BlockingConfig> out;
    for (auto m : mc)
      for (auto n : nc)
        for (auto k : kc) {
          BlockingConfig cfg{m, n, k, mr, nr};
          cfg.validate();
          out.push_back(cfg);
        }
    return out;
  }
};

struct TuneRow {
  BlockingConfig config;
  double seconds = 0.0;  // median
  double gflops = 0.0;   // 16 n^3 / seconds / 1e9
};

struct TuneResult {
  BlockingConfig best;
  std::vector<TuneRow> table;
  std::string host;
};

/// Returns median seconds for one configuration.
using TuneMeasure = std::function<double(const BlockingConfig&)>;

inline std::string host_descriptor() {
  std::string cpu;
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) cpu = line.substr(line.find_first_not_of(" \t", colon + 1));
      break;
    }
  }
  utsname u{};
  std::string sys = uname(&u) == 0 ? std::string(u.sysname) + " " + u.machine : "unknown";
  return cpu.empty() ? sys : sys + " " + cpu;
}

/// Grid search with an injected timer. Ties on time go to the smaller kc,
/// then mc, then nc.
inline TuneResult tune(const TuneSpace& space, const TuneMeasure& measure) {
  const auto cands = space.candidates();
  const double n = static_cast<double>(space.probe_n);
  TuneResult result;
  result.host = host_descriptor();
  result.table.reserve(cands.size());
  for (const auto& cfg : cands) {
    const double t = measure(cfg);
    result.table.push_back({cfg, t, gflops(16.0 * n * n * n, t)});
  }
  auto key = [](const TuneRow& r) {
    return std::tuple(r.seconds, r.config.kc, r.config.mc, r.config.nc);
  };
  const auto best = std::min_element(result.table.begin(), result.table.end(),
                                     [&](const auto& x, const auto& y) { return key(x) < key(y); });
  result.best = best->config;
  return result;
}

/// Times gemm_opt (alpha = 1, beta = 0) on seeded square probe matrices.
inline TuneMeasure gemm_opt_measure(const TuneSpace& space) {
  const std::size_t n = space.probe_n;
  auto a = std::make_shared<QuatMatrix>(random_matrix(n, n, space.seed));
  auto b = std::make_shared<QuatMatrix>(random_matrix(n, n, space.seed + 1));
  auto c = std::make_shared<QuatMatrix>(n, n);
  const std::size_t reps = space.reps;
  return [a, b, c, reps](const BlockingConfig& cfg) {
    return median_seconds(
        [&] { gemm_opt(Quaternion::one(), a->view(), b->view(), Quaternion::zero(), c->view(), cfg); },
        reps);
  };
}

inline TuneResult tune(const TuneSpace& space) {
  space.candidates();  // reject empty or invalid spaces before allocating probes
  return tune(space, gemm_opt_measure(space));
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline ConfigFile to_config_file(const TuneResult& r) { return {r.best, r.host, utc_timestamp()}; }

}  // namespace hgemm
