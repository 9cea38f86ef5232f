#pragma once

// Four-lane real64 vector backends shared by the batch quaternion product
// and the 2x2 microkernel. Every backend performs the same IEEE operations
// lane by lane, so swapping backends never changes a result bit.

#include <array>
#include <cstddef>

#if defined(__AVX__)
#include <immintrin.h>
#endif

namespace hgemm::lanes {

/// Plain-array backend. Always available.
struct scalar_ops {
  using vec = std::array<double, 4>;

  static vec load(const double* p) { return {p[0], p[1], p[2], p[3]}; }
  static vec loadu(const double* p) { return load(p); }
  static void storeu(double* p, const vec& v) {
    p[0] = v[0];
    p[1] = v[1];
    p[2] = v[2];
    p[3] = v[3];
  }

  static vec mul(const vec& a, const vec& b) {
    return {a[0] * b[0], a[1] * b[1], a[2] * b[2], a[3] * b[3]};
  }
  static vec add(const vec& a, const vec& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
  }
  static vec sub(const vec& a, const vec& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
  }

  // [v0,v0,v2,v2]
  static vec dup_even(const vec& v) { return {v[0], v[0], v[2], v[2]}; }
  // [v1,v1,v3,v3]
  static vec dup_odd(const vec& v) { return {v[1], v[1], v[3], v[3]}; }
  // [v0,v1,v0,v1]
  static vec dup_low_half(const vec& v) { return {v[0], v[1], v[0], v[1]}; }
  // [v2,v3,v2,v3]
  static vec dup_high_half(const vec& v) { return {v[2], v[3], v[2], v[3]}; }

  // Rows in, columns out.
  static void transpose4(vec& r0, vec& r1, vec& r2, vec& r3) {
    const vec a = r0, b = r1, c = r2, d = r3;
    r0 = {a[0], b[0], c[0], d[0]};
    r1 = {a[1], b[1], c[1], d[1]};
    r2 = {a[2], b[2], c[2], d[2]};
    r3 = {a[3], b[3], c[3], d[3]};
  }
};

#if defined(__AVX__)
/// 256-bit AVX backend. `load` requires 32-byte alignment.
struct avx_ops {
  using vec = __m256d;

  static vec load(const double* p) { return _mm256_load_pd(p); }
  static vec loadu(const double* p) { return _mm256_loadu_pd(p); }
  static void storeu(double* p, vec v) { _mm256_storeu_pd(p, v); }

  static vec mul(vec a, vec b) { return _mm256_mul_pd(a, b); }
  static vec add(vec a, vec b) { return _mm256_add_pd(a, b); }
  static vec sub(vec a, vec b) { return _mm256_sub_pd(a, b); }

  static vec dup_even(vec v) { return _mm256_movedup_pd(v); }
  static vec dup_odd(vec v) { return _mm256_permute_pd(v, 0xF); }
  static vec dup_low_half(vec v) { return _mm256_permute2f128_pd(v, v, 0x00); }
  static vec dup_high_half(vec v) { return _mm256_permute2f128_pd(v, v, 0x11); }

  // 4x VSHUFPD (unpack) + 4x VPERM2F128.
  static void transpose4(vec& r0, vec& r1, vec& r2, vec& r3) {
    const vec t0 = _mm256_unpacklo_pd(r0, r1);  // a0 b0 a2 b2
    const vec t1 = _mm256_unpackhi_pd(r0, r1);  // a1 b1 a3 b3
    const vec t2 = _mm256_unpacklo_pd(r2, r3);  // c0 d0 c2 d2
    const vec t3 = _mm256_unpackhi_pd(r2, r3);  // c1 d1 c3 d3
    r0 = _mm256_permute2f128_pd(t0, t2, 0x20);
    r1 = _mm256_permute2f128_pd(t1, t3, 0x20);
    r2 = _mm256_permute2f128_pd(t0, t2, 0x31);
    r3 = _mm256_permute2f128_pd(t1, t3, 0x31);
  }
};

inline constexpr bool has_vector_backend = true;
#else
inline constexpr bool has_vector_backend = false;
#endif

/// Component-major accumulate r <- r + a o b under the Hamilton product.
///
/// Each output component is a four-term product sum formed left to right
/// in the order of the scalar `hmul`, then added to the accumulator:
/// 16 multiplies, 12 add/sub inside the sums, 4 accumulating adds.
template <class Ops, class Vec>
inline void hmul_accumulate(Ops& ops, Vec (&r)[4], const Vec (&a)[4],
                            const Vec (&b)[4]) {
  Vec t;
  // w = a0 b0 - a1 b1 - a2 b2 - a3 b3
  t = ops.mul(a[0], b[0]);
  t = ops.sub(t, ops.mul(a[1], b[1]));
  t = ops.sub(t, ops.mul(a[2], b[2]));
  t = ops.sub(t, ops.mul(a[3], b[3]));
  r[0] = ops.add(r[0], t);
  // x = a0 b1 + a1 b0 + a2 b3 - a3 b2
  t = ops.mul(a[0], b[1]);
  t = ops.add(t, ops.mul(a[1], b[0]));
  t = ops.add(t, ops.mul(a[2], b[3]));
  t = ops.sub(t, ops.mul(a[3], b[2]));
  r[1] = ops.add(r[1], t);
  // y = a0 b2 + a2 b0 - a1 b3 + a3 b1
  t = ops.mul(a[0], b[2]);
  t = ops.add(t, ops.mul(a[2], b[0]));
  t = ops.sub(t, ops.mul(a[1], b[3]));
  t = ops.add(t, ops.mul(a[3], b[1]));
  r[2] = ops.add(r[2], t);
  // z = a0 b3 + a3 b0 + a1 b2 - a2 b1
  t = ops.mul(a[0], b[3]);
  t = ops.add(t, ops.mul(a[3], b[0]));
  t = ops.add(t, ops.mul(a[1], b[2]));
  t = ops.sub(t, ops.mul(a[2], b[1]));
  r[3] = ops.add(r[3], t);
}

}  // namespace hgemm::lanes
