#pragma once

// Benchmark and verification harness behind the hgemm_bench tool.

#include <charconv>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hgemm/compare.hpp"
#include "hgemm/complex_gemm.hpp"
#include "hgemm/gemm_opt.hpp"
#include "hgemm/gemm_ref.hpp"
#include "hgemm/timing.hpp"

namespace hgemm::bench {

enum class Impl { hgemm_ref, hgemm_opt, zgemm_oracle };

inline std::string_view impl_name(Impl i) {
  switch (i) {
    case Impl::hgemm_ref: return "hgemm-ref";
    case Impl::hgemm_opt: return "hgemm-opt";
    case Impl::zgemm_oracle: return "zgemm-oracle";
  }
  return "?";
}

inline Impl parse_impl(std::string_view s) {
  for (Impl i : {Impl::hgemm_ref, Impl::hgemm_opt, Impl::zgemm_oracle})
    if (s == impl_name(i)) return i;
  throw parse_error("unknown impl '" + std::string(s) + "'");
}

enum class ComplexBaseline { blocked, vendor };

/// Thrown when implementations disagree during a timing run.
class bench_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Size lists: comma-separated items, each one of
//   n          a single size
//   a:b        a..b inclusive
//   a:b:s      a, a+s, ... <= b
//   a:b:xf     a, a*f, a*f^2, ... <= b   (geometric, f >= 2)

namespace detail {
inline std::size_t parse_count(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw parse_error("sizes: bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}
}  // namespace detail

inline std::vector<std::size_t> parse_sizes(std::string_view spec) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', start), spec.size());
    const std::string_view item = spec.substr(start, comma - start);
    start = comma + 1;
    if (item.empty()) continue;

    std::vector<std::string_view> parts;
    for (std::size_t p = 0; p <= item.size();) {
      const std::size_t colon = std::min(item.find(':', p), item.size());
      parts.push_back(item.substr(p, colon - p));
      p = colon + 1;
    }
    if (parts.size() > 3) throw parse_error("sizes: too many ':' in '" + std::string(item) + "'");
    const std::size_t a = detail::parse_count(parts[0], "size");
    if (a == 0) throw parse_error("sizes: sizes must be >= 1");
    if (parts.size() == 1) {
      out.push_back(a);
      continue;
    }
    const std::size_t b = detail::parse_count(parts[1], "range end");
    if (b < a) throw parse_error("sizes: empty range '" + std::string(item) + "'");
    if (parts.size() == 3 && !parts[2].empty() && parts[2][0] == 'x') {
      const std::size_t f = detail::parse_count(parts[2].substr(1), "growth factor");
      if (f < 2) throw parse_error("sizes: growth factor must be >= 2");
      for (std::size_t v = a; v <= b; v *= f) out.push_back(v);
    } else {
      const std::size_t step = parts.size() == 3 ? detail::parse_count(parts[2], "step") : 1;
      if (step == 0) throw parse_error("sizes: step must be >= 1");
      for (std::size_t v = a; v <= b; v += step) out.push_back(v);
    }
  }
  if (out.empty()) throw parse_error("sizes: empty size list");
  return out;
}

// ---------------------------------------------------------------------------
// Timing runs

struct BenchRecord {
  Impl impl;
  std::size_t n;
  double seconds;
  double gflops;
  double checksum;
};

struct BenchOptions {
  std::vector<Impl> impls{Impl::hgemm_ref, Impl::hgemm_opt, Impl::zgemm_oracle};
  std::vector<std::size_t> sizes{64};
  std::size_t reps = 3;
  std::uint64_t seed = 1;
  BlockingConfig config{};
  ComplexBaseline baseline = ComplexBaseline::blocked;
  double checksum_tolerance = 1e-8;
};

inline constexpr std::string_view csv_header = "impl,n,seconds,gflops,checksum";

namespace detail {
inline void append_double(std::string& s, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  s.append(buf, ptr);
}
}  // namespace detail

/// One CSV line without trailing newline. Locale independent.
inline std::string format_csv_row(const BenchRecord& r) {
  std::string s(impl_name(r.impl));
  s += ',';
  s += std::to_string(r.n);
  s += ',';
  detail::append_double(s, r.seconds);
  s += ',';
  detail::append_double(s, r.gflops);
  s += ',';
  detail::append_double(s, r.checksum);
  return s;
}

/// Real FLOPs of one timed product: 16 n^3 in quaternion arithmetic,
/// 32 n^3 for the complex product of the 2n x 2n images.
inline double bench_flops(Impl impl, std::size_t n) {
  const double m = impl == Impl::zgemm_oracle ? 32.0 : 16.0;
  const double d = static_cast<double>(n);
  return m * d * d * d;
}

/// Times every impl at every size (alpha = 1, beta = 0) and calls `emit`
/// per record. Throws bench_failure if checksums disagree.
inline std::vector<BenchRecord> run_bench(const BenchOptions& opt,
                                          const std::function<void(const BenchRecord&)>& emit = {}) {
  if (opt.sizes.empty()) throw parse_error("sizes: empty size list");
  if (opt.impls.empty()) throw parse_error("no implementation selected");
  opt.config.validate();
  if (opt.baseline == ComplexBaseline::vendor && !has_vendor_zgemm)
    throw config_error("vendor complex GEMM not linked (configure with HGEMM_WITH_CBLAS=ON)");

  std::vector<BenchRecord> records;
  const Quaternion one = Quaternion::one(), zero = Quaternion::zero();
  for (std::size_t n : opt.sizes) {
    const QuatMatrix a = random_matrix(n, n, opt.seed);
    const QuatMatrix b = random_matrix(n, n, opt.seed + 1);
    std::optional<double> first_sum;
    double first_scale = 0.0;
    for (Impl impl : opt.impls) {
      QuatMatrix c(n, n);
      double t = 0.0;
      switch (impl) {
        case Impl::hgemm_ref:
          t = median_seconds([&] { gemm_ref(one, a, b, zero, c); }, opt.reps);
          break;
        case Impl::hgemm_opt:
          t = median_seconds([&] { gemm_opt(one, a, b, zero, c, opt.config); }, opt.reps);
          break;
        case Impl::zgemm_oracle: {
          const ComplexMatrix ea = embed_complex(a), eb = embed_complex(b);
          ComplexMatrix z(2 * n, 2 * n);
          if (opt.baseline == ComplexBaseline::vendor) {
#if defined(HGEMM_WITH_CBLAS)
            t = median_seconds([&] { zgemm_vendor(ea, eb, z); }, opt.reps);
#endif
          } else {
            t = median_seconds([&] { zgemm_blocked(ea, eb, z); }, opt.reps);
          }
          c = extract_quaternion(z, 1e-8);
          break;
        }
      }
      const BenchRecord rec{impl, n, t, gflops(bench_flops(impl, n), t), checksum(c)};
      if (!first_sum) {
        first_sum = rec.checksum;
        first_scale = checksum_scale(c);
      } else if (!(std::abs(rec.checksum - *first_sum) <= opt.checksum_tolerance * first_scale)) {
        throw bench_failure("checksum divergence at n=" + std::to_string(n) + ": " +
                            std::string(impl_name(impl)) + " " + std::to_string(rec.checksum) +
                            " vs " + std::to_string(*first_sum));
      }
      records.push_back(rec);
      if (emit) emit(rec);
    }
  }
  return records;
}

// ---------------------------------------------------------------------------
// Oracle sweep

struct VerifyOptions {
  std::vector<std::size_t> sizes{1, 2, 3, 5, 8, 17, 33, 65};
  std::uint64_t seed = 1;
  double tolerance = 1e-12;
  BlockingConfig config{};
  KernelPath path = KernelPath::automatic;
  /// Test hook: applied to the gemm_opt result before comparison.
  std::function<void(QuatMatrix&, std::size_t n)> fault;
};

struct VerifyCase {
  std::size_t n = 0;
  Deviation opt_vs_ref;
  Deviation embed_vs_complex;
  bool ok = false;
};

struct VerifyReport {
  std::vector<VerifyCase> cases;
  bool ok() const {
    for (const auto& c : cases)
      if (!c.ok) return false;
    return !cases.empty();
  }
  std::optional<std::size_t> first_failure() const {
    for (const auto& c : cases)
      if (!c.ok) return c.n;
    return std::nullopt;
  }
};

/// C = alpha A B + beta C on square random data with random alpha, beta;
/// checks gemm_opt against gemm_ref and against the complex product of the
/// embeddings, chi(alpha I) chi(A) chi(B) + chi(beta I) chi(C).
inline VerifyCase verify_size(std::size_t n, const VerifyOptions& opt) {
  const std::uint64_t s = opt.seed * 1000003u + n;
  const QuatMatrix a = random_matrix(n, n, s);
  const QuatMatrix b = random_matrix(n, n, s + 1);
  const QuatMatrix c0 = random_matrix(n, n, s + 2);
  const Quaternion alpha = random_quaternion(s + 3), beta = random_quaternion(s + 4);

  QuatMatrix ref = c0, opt_c = c0;
  gemm_ref(alpha, a, b, beta, ref);
  gemm_opt(alpha, a, b, beta, opt_c, opt.config, opt.path);
  if (opt.fault) opt.fault(opt_c, n);

  const ComplexMatrix ab = zgemm_naive(embed_complex(a), embed_complex(b));
  const ComplexMatrix lhs = embedded_scale_left(alpha, ab);
  const ComplexMatrix rhs = embedded_scale_left(beta, embed_complex(c0));
  ComplexMatrix expect(2 * n, 2 * n);
  for (std::size_t j = 0; j < 2 * n; ++j)
    for (std::size_t i = 0; i < 2 * n; ++i) expect(i, j) = lhs(i, j) + rhs(i, j);

  VerifyCase vc;
  vc.n = n;
  vc.opt_vs_ref = relative_deviation(opt_c, ref);
  vc.embed_vs_complex = relative_deviation(embed_complex(opt_c), expect);
  vc.ok = vc.opt_vs_ref.value <= opt.tolerance && vc.embed_vs_complex.value <= opt.tolerance;
  return vc;
}

/// Runs every size and prints one line each, plus the first failure.
inline VerifyReport verify(const VerifyOptions& opt, std::ostream& out) {
  if (opt.sizes.empty()) throw parse_error("sizes: empty size list");
  opt.config.validate();
  VerifyReport report;
  for (std::size_t n : opt.sizes) {
    report.cases.push_back(verify_size(n, opt));
    const auto& c = report.cases.back();
    out << "n=" << n << " opt-vs-ref=" << c.opt_vs_ref.value
        << " embed-vs-complex=" << c.embed_vs_complex.value << (c.ok ? " ok" : " FAIL") << "\n";
  }
  if (auto n = report.first_failure()) {
    for (const auto& c : report.cases) {
      if (c.n != *n) continue;
      const Deviation& d =
          c.opt_vs_ref.value > opt.tolerance ? c.opt_vs_ref : c.embed_vs_complex;
      out << "verification failed: size " << c.n << ", element (" << d.row << "," << d.col
          << "), deviation " << d.value << " > " << opt.tolerance << "\n";
      break;
    }
  }
  return report;
}

}  // namespace hgemm::bench
