#pragma once

// Command-line front end for the benchmark, verification and tuning harness.
//
// Exit codes: 0 success, 1 verification or checksum failure, 2 usage error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hgemm/bench.hpp"
#include "hgemm/tuner.hpp"

namespace hgemm::cli {

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quaternion GEMM benchmark and verification harness", "hgemm_bench"};

  std::vector<std::string> impls{"hgemm-ref", "hgemm-opt", "zgemm-oracle"};
  std::string sizes = "64";
  std::size_t reps = 3;
  std::uint64_t seed = 1;
  std::string csv = "stdout";
  std::string config_path;
  bool do_tune = false;
  std::size_t tune_n = 256;
  std::string tune_out;
  bool verify_only = false;
  double tolerance = 1e-12;
  std::string baseline = "blocked";
  std::size_t fault_at = 0;

  app.add_option("--impl", impls, "Implementations: hgemm-ref, hgemm-opt, zgemm-oracle")
      ->delimiter(',');
  app.add_option("--sizes", sizes, "Sizes: n | a:b | a:b:step | a:b:xFACTOR, comma separated");
  app.add_option("--reps", reps, "Timed repetitions after one warm-up")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for operand generation");
  app.add_option("--csv", csv, "CSV destination path, or 'stdout'");
  app.add_option("--config", config_path, "Blocking parameter file (key=value)");
  app.add_flag("--tune", do_tune, "Tune blocking parameters before benchmarking");
  app.add_option("--tune-n", tune_n, "Probe size for --tune")->check(CLI::PositiveNumber);
  app.add_option("--tune-out", tune_out, "Write the tuned parameters to this file");
  app.add_flag("--verify-only", verify_only, "Run the oracle sweep only, no timing");
  app.add_option("--tolerance", tolerance, "Relative tolerance for --verify-only");
  app.add_option("--complex-baseline", baseline, "Complex GEMM for zgemm-oracle")
      ->check(CLI::IsMember({"blocked", "vendor"}));
  app.add_option("--inject-fault-at", fault_at, "Corrupt gemm-opt results from this size on")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    BlockingConfig cfg = config_path.empty() ? default_blocking_config()
                                             : load_config_file(config_path).config;
    const std::vector<std::size_t> size_list = bench::parse_sizes(sizes);

    if (do_tune) {
      TuneSpace space{{32, 64, 128}, {32, 64, 128}, {256, 512, 1024}};
      space.probe_n = tune_n;
      space.reps = reps;
      space.seed = seed;
      const TuneResult r = tune(space);
      err << "# tuning on " << r.host << " at n=" << tune_n << "\n";
      for (const auto& row : r.table)
        err << "# mc=" << row.config.mc << " nc=" << row.config.nc << " kc=" << row.config.kc
            << " seconds=" << row.seconds << " gflops=" << row.gflops << "\n";
      err << "# best mc=" << r.best.mc << " nc=" << r.best.nc << " kc=" << r.best.kc << "\n";
      if (!tune_out.empty()) save_config_file(tune_out, to_config_file(r));
      cfg = r.best;
    }

    if (verify_only) {
      bench::VerifyOptions vo;
      vo.sizes = size_list;
      vo.seed = seed;
      vo.tolerance = tolerance;
      vo.config = cfg;
      if (fault_at > 0) {
        vo.fault = [fault_at](QuatMatrix& c, std::size_t n) {
          if (n >= fault_at) c(0, 0).w += 1.0;
        };
      }
      return bench::verify(vo, out).ok() ? 0 : 1;
    }

    bench::BenchOptions bo;
    bo.impls.clear();
    for (const auto& name : impls) bo.impls.push_back(bench::parse_impl(name));
    bo.sizes = size_list;
    bo.reps = reps;
    bo.seed = seed;
    bo.config = cfg;
    bo.baseline = baseline == "vendor" ? bench::ComplexBaseline::vendor
                                       : bench::ComplexBaseline::blocked;

    std::ofstream file;
    std::ostream* sink = &out;
    if (csv != "stdout") {
      file.open(csv);
      if (!file) throw parse_error("cannot open CSV output '" + csv + "'");
      sink = &file;
    }
    *sink << bench::csv_header << "\n";
    bench::run_bench(bo, [&](const bench::BenchRecord& r) {
      *sink << bench::format_csv_row(r) << "\n";
      sink->flush();
    });
    return 0;
  } catch (const bench::bench_failure& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hgemm::cli
