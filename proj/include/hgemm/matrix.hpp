#pragma once

// Column-major quaternion and complex matrices, strided views, the 2x2-block
// complex embedding and its inverse, and seeded test data.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "hgemm/error.hpp"
#include "hgemm/quaternion.hpp"

namespace hgemm {

/// Non-owning column-major view. Element (i, j) lives at data[i + j * ld].
template <class T>
class MatrixView {
 public:
  MatrixView() = default;
  MatrixView(T* data, std::size_t rows, std::size_t cols, std::size_t ld)
      : data_(data), rows_(rows), cols_(cols), ld_(ld) {
    if (ld_ < rows_) throw dimension_error("leading dimension smaller than row count");
  }
  MatrixView(T* data, std::size_t rows, std::size_t cols) : MatrixView(data, rows, cols, rows) {}

  // Mutable view converts to const view.
  template <class U>
    requires std::is_same_v<const U, T>
  MatrixView(const MatrixView<U>& other)  // NOLINT(google-explicit-constructor)
      : data_(other.data()), rows_(other.rows()), cols_(other.cols()), ld_(other.ld()) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t ld() const { return ld_; }
  T* data() const { return data_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) const { return data_[i + j * ld_]; }

  /// rows x cols window starting at (i, j). Views of views compose.
  MatrixView block(std::size_t i, std::size_t j, std::size_t rows, std::size_t cols) const {
    if (i + rows > rows_ || j + cols > cols_)
      throw dimension_error("sub-matrix exceeds parent bounds");
    return {data_ + i + j * ld_, rows, cols, ld_};
  }

  T* col(std::size_t j) const { return data_ + j * ld_; }

  /// One past the last addressed element, or data() when empty.
  const T* end_address() const {
    return empty() ? data_ : data_ + (cols_ - 1) * ld_ + rows_;
  }

 private:
  T* data_ = nullptr;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t ld_ = 0;
};

/// Owning column-major matrix with ld >= rows.
template <class T>
class BasicMatrix {
 public:
  using value_type = T;

  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols) : BasicMatrix(rows, cols, rows) {}
  BasicMatrix(std::size_t rows, std::size_t cols, std::size_t ld)
      : rows_(rows), cols_(cols), ld_(std::max<std::size_t>(ld, rows)), data_(ld_ * cols) {
    if (ld < rows) throw dimension_error("leading dimension smaller than row count");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t ld() const { return ld_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i + j * ld_]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i + j * ld_]; }

  MatrixView<T> view() { return {data_.data(), rows_, cols_, ld_}; }
  MatrixView<const T> view() const { return {data_.data(), rows_, cols_, ld_}; }
  operator MatrixView<T>() { return view(); }              // NOLINT
  operator MatrixView<const T>() const { return view(); }  // NOLINT

  MatrixView<T> block(std::size_t i, std::size_t j, std::size_t r, std::size_t c) {
    return view().block(i, j, r, c);
  }
  MatrixView<const T> block(std::size_t i, std::size_t j, std::size_t r, std::size_t c) const {
    return view().block(i, j, r, c);
  }

  void fill(const T& v) { std::fill(data_.begin(), data_.end(), v); }

  /// Logical equality; padding rows beyond `rows()` are ignored.
  friend bool operator==(const BasicMatrix& a, const BasicMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t j = 0; j < a.cols_; ++j)
      for (std::size_t i = 0; i < a.rows_; ++i)
        if (!(a(i, j) == b(i, j))) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t ld_ = 0;
  std::vector<T> data_;
};

using QuatMatrix = BasicMatrix<Quaternion>;
using QuatView = MatrixView<Quaternion>;
using ConstQuatView = MatrixView<const Quaternion>;
using ComplexMatrix = BasicMatrix<std::complex<double>>;
using ComplexView = MatrixView<std::complex<double>>;
using ConstComplexView = MatrixView<const std::complex<double>>;

template <class T>
BasicMatrix<std::remove_const_t<T>> to_matrix(MatrixView<T> v) {
  BasicMatrix<std::remove_const_t<T>> out(v.rows(), v.cols());
  for (std::size_t j = 0; j < v.cols(); ++j)
    for (std::size_t i = 0; i < v.rows(); ++i) out(i, j) = v(i, j);
  return out;
}

/// (Q^H)_{ij} = conj(Q_{ji})
inline QuatMatrix conj_transpose(ConstQuatView q) {
  QuatMatrix out(q.cols(), q.rows());
  for (std::size_t j = 0; j < q.cols(); ++j)
    for (std::size_t i = 0; i < q.rows(); ++i) out(j, i) = conj(q(i, j));
  return out;
}

inline ComplexMatrix conj_transpose(ConstComplexView z) {
  ComplexMatrix out(z.cols(), z.rows());
  for (std::size_t j = 0; j < z.cols(); ++j)
    for (std::size_t i = 0; i < z.rows(); ++i) out(j, i) = std::conj(z(i, j));
  return out;
}

// ---------------------------------------------------------------------------
// Complex embedding

/// Block image [[U0, U1], [-conj(U1), conj(U0)]] with U0 = Q0 + Q1 i and
/// U1 = Q2 + Q3 i. Quadrants are contiguous blocks, not interleaved tiles.
inline ComplexMatrix embed_complex(ConstQuatView q) {
  const std::size_t m = q.rows(), n = q.cols();
  ComplexMatrix z(2 * m, 2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const Quaternion& e = q(i, j);
      z(i, j) = {e.w, e.x};
      z(i, j + n) = {e.y, e.z};
      z(i + m, j) = {-e.y, e.z};
      z(i + m, j + n) = {e.w, -e.x};
    }
  }
  return z;
}

inline constexpr double default_structure_tolerance = 1e-10;

/// Inverse of embed_complex. The symmetry residual of the lower quadrants
/// must not exceed `tol` times the largest entry magnitude.
inline QuatMatrix extract_quaternion(ConstComplexView z, double tol = default_structure_tolerance) {
  if (z.rows() % 2 != 0 || z.cols() % 2 != 0)
    throw dimension_error("odd dimension: complex image must be 2M x 2N");
  const std::size_t m = z.rows() / 2, n = z.cols() / 2;

  double scale = 0.0;
  for (std::size_t j = 0; j < z.cols(); ++j)
    for (std::size_t i = 0; i < z.rows(); ++i) scale = std::max(scale, std::abs(z(i, j)));

  double residual = 0.0;
  QuatMatrix q(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto u0 = z(i, j), u1 = z(i, j + n);
      residual = std::max(residual, std::abs(z(i + m, j) + std::conj(u1)));
      residual = std::max(residual, std::abs(z(i + m, j + n) - std::conj(u0)));
      q(i, j) = {u0.real(), u0.imag(), u1.real(), u1.imag()};
    }
  }
  if (!(residual <= tol * scale))
    throw structure_error("structure violation: residual " + std::to_string(residual) +
                          " exceeds tolerance " + std::to_string(tol * scale));
  return q;
}

// ---------------------------------------------------------------------------
// Test data

enum class Distribution { uniform, normal };

/// Seeded i.i.d. components: uniform on [-1, 1] or standard normal.
inline QuatMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                Distribution dist = Distribution::uniform) {
  if (rows == 0 || cols == 0) throw dimension_error("random_matrix needs rows, cols >= 1");
  QuatMatrix out(rows, cols);
  std::mt19937_64 rng(seed);
  auto fill = [&](auto&& draw) {
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t i = 0; i < rows; ++i) out(i, j) = {draw(), draw(), draw(), draw()};
  };
  if (dist == Distribution::uniform) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    fill([&] { return u(rng); });
  } else {
    std::normal_distribution<double> g(0.0, 1.0);
    fill([&] { return g(rng); });
  }
  return out;
}

inline Quaternion random_quaternion(std::uint64_t seed) { return random_matrix(1, 1, seed)(0, 0); }

// ---------------------------------------------------------------------------
// QMAT fixtures: "QMAT", u32 rows, u32 cols, u32 reserved (0), then
// rows*cols*4 little-endian doubles, column-major, [w;x;y;z] per element.

namespace detail {
inline void put_u32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}
inline std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw parse_error("QMAT: truncated header");
  return std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 |
         std::uint32_t{b[3]} << 24;
}
inline void put_f64(std::ostream& os, double d) {
  const auto bits = std::bit_cast<std::uint64_t>(d);
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
  os.write(reinterpret_cast<const char*>(b), 8);
}
inline double get_f64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw parse_error("QMAT: truncated payload");
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) bits |= std::uint64_t{b[k]} << (8 * k);
  return std::bit_cast<double>(bits);
}
}  // namespace detail

inline void write_qmat(std::ostream& os, ConstQuatView q) {
  os.write("QMAT", 4);
  detail::put_u32(os, static_cast<std::uint32_t>(q.rows()));
  detail::put_u32(os, static_cast<std::uint32_t>(q.cols()));
  detail::put_u32(os, 0);
  for (std::size_t j = 0; j < q.cols(); ++j)
    for (std::size_t i = 0; i < q.rows(); ++i)
      for (std::size_t c = 0; c < 4; ++c) detail::put_f64(os, q(i, j)[c]);
}

inline QuatMatrix read_qmat(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "QMAT", 4) != 0)
    throw parse_error("QMAT: bad magic");
  const std::uint32_t rows = detail::get_u32(is);
  const std::uint32_t cols = detail::get_u32(is);
  detail::get_u32(is);
  QuatMatrix q(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) {
      const double w = detail::get_f64(is), x = detail::get_f64(is);
      const double y = detail::get_f64(is), z = detail::get_f64(is);
      q(i, j) = {w, x, y, z};
    }
  return q;
}

}  // namespace hgemm
