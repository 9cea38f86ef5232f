#pragma once

/**
 * @file quaternion.hpp
 * @brief Double-precision quaternion scalars and the batch (SoA) product.
 *
 * q = w e0 + x e1 + y e2 + z e3, stored as four contiguous doubles in the
 * order [w; x; y; z]. Multiplication is the Hamilton product and does not
 * commute: e1 e2 = e3 but e2 e1 = -e3.
 */

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <type_traits>

#include "hgemm/lanes.hpp"

namespace hgemm {

struct Quaternion {
  double w = 0.0;  // scalar component (e0)
  double x = 0.0;  // e1
  double y = 0.0;  // e2
  double z = 0.0;  // e3

  static constexpr Quaternion zero() { return {0.0, 0.0, 0.0, 0.0}; }
  static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }

  constexpr double operator[](std::size_t i) const {
    return i == 0 ? w : i == 1 ? x : i == 2 ? y : z;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

static_assert(sizeof(Quaternion) == 4 * sizeof(double));
static_assert(std::is_standard_layout_v<Quaternion>);
static_assert(std::is_trivially_copyable_v<Quaternion>);

namespace basis {
inline constexpr Quaternion e0{1.0, 0.0, 0.0, 0.0};
inline constexpr Quaternion e1{0.0, 1.0, 0.0, 0.0};
inline constexpr Quaternion e2{0.0, 0.0, 1.0, 0.0};
inline constexpr Quaternion e3{0.0, 0.0, 0.0, 1.0};
}  // namespace basis

/// Hamilton product pq. Each component is a four-term sum evaluated left to
/// right in the order written below; the batch and kernel paths use the
/// same order, so all three agree bit for bit.
constexpr Quaternion hmul(const Quaternion& p, const Quaternion& q) {
  return {
      p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
      p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
      p.w * q.y + p.y * q.w - p.x * q.z + p.z * q.x,
      p.w * q.z + p.z * q.w + p.x * q.y - p.y * q.x,
  };
}

constexpr Quaternion operator+(const Quaternion& p, const Quaternion& q) {
  return {p.w + q.w, p.x + q.x, p.y + q.y, p.z + q.z};
}
constexpr Quaternion operator-(const Quaternion& p, const Quaternion& q) {
  return {p.w - q.w, p.x - q.x, p.y - q.y, p.z - q.z};
}
constexpr Quaternion operator-(const Quaternion& q) { return {-q.w, -q.x, -q.y, -q.z}; }
constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) { return hmul(p, q); }

constexpr Quaternion conj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

inline double norm(const Quaternion& q) {
  return std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
}

/// conj(q) / |q|^2. Throws std::domain_error for q == 0.
inline Quaternion inverse(const Quaternion& q) {
  const double n2 = q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
  if (n2 == 0.0) throw std::domain_error("zero quaternion has no inverse");
  return {q.w / n2, -q.x / n2, -q.y / n2, -q.z / n2};
}

/// Complex subalgebra span{e0, e1}: z = a + bi maps to a e0 + b e1.
constexpr Quaternion complex_to_quat(std::complex<double> z) {
  return {z.real(), z.imag(), 0.0, 0.0};
}

// ---------------------------------------------------------------------------
// 2x2 complex representation

/// 2x2 complex matrix, column-major: m[0]=(0,0), m[1]=(1,0), m[2]=(0,1), m[3]=(1,1).
struct Complex2x2 {
  std::array<std::complex<double>, 4> m{};

  std::complex<double>& operator()(int r, int c) { return m[r + 2 * c]; }
  const std::complex<double>& operator()(int r, int c) const { return m[r + 2 * c]; }

  friend bool operator==(const Complex2x2&, const Complex2x2&) = default;
};

namespace detail {
// (a+bi)(c+di) without the NaN recovery of the library operator.
inline std::complex<double> cmul(std::complex<double> a, std::complex<double> b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
}  // namespace detail

inline Complex2x2 operator*(const Complex2x2& a, const Complex2x2& b) {
  Complex2x2 out;
  for (int c = 0; c < 2; ++c)
    for (int r = 0; r < 2; ++r)
      out(r, c) = detail::cmul(a(r, 0), b(0, c)) + detail::cmul(a(r, 1), b(1, c));
  return out;
}

inline Complex2x2 operator+(const Complex2x2& a, const Complex2x2& b) {
  Complex2x2 out;
  for (int i = 0; i < 4; ++i) out.m[i] = a.m[i] + b.m[i];
  return out;
}

/// [[w + xi, y + zi], [-y + zi, w - xi]]
inline Complex2x2 to_complex2x2(const Quaternion& q) {
  Complex2x2 out;
  out(0, 0) = {q.w, q.x};
  out(0, 1) = {q.y, q.z};
  out(1, 0) = {-q.y, q.z};
  out(1, 1) = {q.w, -q.x};
  return out;
}

// ---------------------------------------------------------------------------
// Batch product

/// Four quaternions in component-major (structure-of-arrays) form.
struct QuadBatch {
  std::array<double, 4> w{}, x{}, y{}, z{};

  static QuadBatch from_aos(std::span<const Quaternion, 4> q) {
    QuadBatch b;
    for (std::size_t i = 0; i < 4; ++i) {
      b.w[i] = q[i].w;
      b.x[i] = q[i].x;
      b.y[i] = q[i].y;
      b.z[i] = q[i].z;
    }
    return b;
  }

  static QuadBatch broadcast(const Quaternion& q) {
    const std::array<Quaternion, 4> a{q, q, q, q};
    return from_aos(a);
  }

  std::array<Quaternion, 4> to_aos() const {
    std::array<Quaternion, 4> out;
    for (std::size_t i = 0; i < 4; ++i) out[i] = lane(i);
    return out;
  }

  Quaternion lane(std::size_t i) const { return {w[i], x[i], y[i], z[i]}; }

  friend bool operator==(const QuadBatch&, const QuadBatch&) = default;
};

/// Lane-wise acc + p o q. Lane k equals acc_k + hmul(p_k, q_k) exactly.
inline QuadBatch batch_fmaq(const QuadBatch& acc, const QuadBatch& p, const QuadBatch& q) {
  lanes::scalar_ops ops;
  using V = lanes::scalar_ops::vec;
  V r[4] = {acc.w, acc.x, acc.y, acc.z};
  const V a[4] = {p.w, p.x, p.y, p.z};
  const V b[4] = {q.w, q.x, q.y, q.z};
  lanes::hmul_accumulate(ops, r, a, b);
  QuadBatch out;
  out.w = r[0];
  out.x = r[1];
  out.y = r[2];
  out.z = r[3];
  return out;
}

// ---------------------------------------------------------------------------
// FLOP model (one a <- a + b*c counts as a single FLOP)

enum class Ring { quaternion, complex };
enum class OpKind { add, multiply };

struct FlopModel {
  Ring ring;
  std::uint64_t add;  // per scalar addition
  std::uint64_t mac;  // per scalar multiply-accumulate
};

constexpr FlopModel flop_model(Ring ring) {
  // A quaternion scalar is represented by a generic 2x2 complex matrix.
  return ring == Ring::quaternion ? FlopModel{ring, 4, 16} : FlopModel{ring, 8, 32};
}

/// FLOPs of an n x n quaternion operation, or of its 2n x 2n complex image.
/// multiply: 16 n^3 vs 32 n^3. add: 4 n^2 vs 8 n^2.
constexpr std::uint64_t flop_count(Ring ring, OpKind op, std::uint64_t n) {
  const FlopModel m = flop_model(ring);
  return op == OpKind::multiply ? m.mac * n * n * n : m.add * n * n;
}

}  // namespace hgemm
