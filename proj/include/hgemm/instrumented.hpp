#pragma once

// Operation-counting build of the 2x2 microkernel. Only available when
// compiled with HGEMM_ENABLE_OP_COUNTERS.

#if !defined(HGEMM_ENABLE_OP_COUNTERS)
#error "hgemm/instrumented.hpp requires HGEMM_ENABLE_OP_COUNTERS"
#endif

#include <cstdint>

#include "hgemm/microkernel.hpp"

namespace hgemm::instrumented {

struct OpCounts {
  std::uint64_t panel_loads = 0;     // aligned loads from packed panels
  std::uint64_t lane_shuffles = 0;   // stage-2 duplicates
  std::uint64_t lane_arith = 0;      // mul / add / sub
  std::uint64_t c_loads = 0;
  std::uint64_t c_stores = 0;
  std::uint64_t transposes = 0;      // full 4x4 register transposes

  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

/// Forwards to `Base` and tallies every call.
template <class Base>
struct counting_ops {
  using vec = typename Base::vec;
  OpCounts counts;

  vec load(const double* p) { ++counts.panel_loads; return Base::load(p); }
  vec loadu(const double* p) { ++counts.c_loads; return Base::loadu(p); }
  void storeu(double* p, const vec& v) { ++counts.c_stores; Base::storeu(p, v); }

  vec mul(const vec& a, const vec& b) { ++counts.lane_arith; return Base::mul(a, b); }
  vec add(const vec& a, const vec& b) { ++counts.lane_arith; return Base::add(a, b); }
  vec sub(const vec& a, const vec& b) { ++counts.lane_arith; return Base::sub(a, b); }

  vec dup_even(const vec& v) { ++counts.lane_shuffles; return Base::dup_even(v); }
  vec dup_odd(const vec& v) { ++counts.lane_shuffles; return Base::dup_odd(v); }
  vec dup_low_half(const vec& v) { ++counts.lane_shuffles; return Base::dup_low_half(v); }
  vec dup_high_half(const vec& v) { ++counts.lane_shuffles; return Base::dup_high_half(v); }

  void transpose4(vec& a, vec& b, vec& c, vec& d) {
    ++counts.transposes;
    Base::transpose4(a, b, c, d);
  }
};

/// Runs the 2x2 kernel on the given backend and returns what it issued.
template <class Base = lanes::scalar_ops>
OpCounts count_microkernel(std::span<const double> a_panel, std::span<const double> b_panel,
                           std::size_t kc, QuatView c_r) {
  detail::check_kernel_args(a_panel, b_panel, kc, c_r);
  counting_ops<Base> ops;
  detail::kernel_2x2(ops, a_panel.data(), b_panel.data(), kc, c_r.data(), c_r.ld());
  return ops.counts;
}

}  // namespace hgemm::instrumented
