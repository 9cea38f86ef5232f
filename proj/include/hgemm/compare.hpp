#pragma once

// Deviation measures used by the oracle checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "hgemm/error.hpp"
#include "hgemm/matrix.hpp"

namespace hgemm {

/// Largest elementwise deviation and where it occurred.
struct Deviation {
  double value = 0.0;
  std::size_t row = 0;
  std::size_t col = 0;
};

/// max_ij |x_ij - y_ij| / max_ij |y_ij|, componentwise over every element.
/// The scale is the reference matrix's largest component so elements that
/// cancel to near zero are judged against the size of the data.
inline Deviation relative_deviation(ConstQuatView x, ConstQuatView y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw dimension_error("relative_deviation: shape mismatch");
  double scale = 0.0;
  for (std::size_t j = 0; j < y.cols(); ++j)
    for (std::size_t i = 0; i < y.rows(); ++i)
      for (std::size_t c = 0; c < 4; ++c) scale = std::max(scale, std::abs(y(i, j)[c]));
  if (scale == 0.0) scale = std::numeric_limits<double>::min();
  Deviation d;
  for (std::size_t j = 0; j < y.cols(); ++j)
    for (std::size_t i = 0; i < y.rows(); ++i)
      for (std::size_t c = 0; c < 4; ++c) {
        const double diff = std::abs(x(i, j)[c] - y(i, j)[c]) / scale;
        if (!(diff <= d.value)) d = {std::isnan(diff) ? INFINITY : diff, i, j};
      }
  return d;
}

/// Complex analogue of relative_deviation on real and imaginary parts.
inline Deviation relative_deviation(ConstComplexView x, ConstComplexView y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw dimension_error("relative_deviation: shape mismatch");
  double scale = 0.0;
  for (std::size_t j = 0; j < y.cols(); ++j)
    for (std::size_t i = 0; i < y.rows(); ++i)
      scale = std::max({scale, std::abs(y(i, j).real()), std::abs(y(i, j).imag())});
  if (scale == 0.0) scale = std::numeric_limits<double>::min();
  Deviation d;
  for (std::size_t j = 0; j < y.cols(); ++j)
    for (std::size_t i = 0; i < y.rows(); ++i) {
      const double diff = std::max(std::abs(x(i, j).real() - y(i, j).real()),
                                   std::abs(x(i, j).imag() - y(i, j).imag())) /
                          scale;
      if (!(diff <= d.value)) d = {std::isnan(diff) ? INFINITY : diff, i, j};
    }
  return d;
}

/// Sum of all quaternion components.
inline double checksum(ConstQuatView q) {
  double s = 0.0;
  for (std::size_t j = 0; j < q.cols(); ++j)
    for (std::size_t i = 0; i < q.rows(); ++i) s += q(i, j).w + q(i, j).x + q(i, j).y + q(i, j).z;
  return s;
}

/// Sum of all component magnitudes; the scale for comparing checksums.
inline double checksum_scale(ConstQuatView q) {
  double s = 0.0;
  for (std::size_t j = 0; j < q.cols(); ++j)
    for (std::size_t i = 0; i < q.rows(); ++i)
      s += std::abs(q(i, j).w) + std::abs(q(i, j).x) + std::abs(q(i, j).y) + std::abs(q(i, j).z);
  return s;
}

}  // namespace hgemm
