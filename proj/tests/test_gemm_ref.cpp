#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "hgemm/compare.hpp"
#include "hgemm/complex_gemm.hpp"
#include "hgemm/gemm_ref.hpp"
#include "test_util.hpp"

using namespace hgemm;
using hgemm::testing::bit_equal;
using hgemm::testing::ulps_at_scale;

namespace {
QuatMatrix identity(std::size_t n) {
  QuatMatrix q(n, n);
  for (std::size_t i = 0; i < n; ++i) q(i, i) = basis::e0;
  return q;
}
}  // namespace

TEST(GemmRef, IdentityTimesB) {
  const QuatMatrix b = random_matrix(5, 3, 1);
  QuatMatrix c(5, 3);
  gemm_ref(Quaternion::one(), identity(5), b, Quaternion::zero(), c);
  EXPECT_TRUE(bit_equal(c, b));
}

TEST(GemmRef, ScalarCaseIsNestedHmul) {
  const QuatMatrix a = random_matrix(1, 1, 2), b = random_matrix(1, 1, 3);
  QuatMatrix c = random_matrix(1, 1, 4);
  const Quaternion alpha = random_quaternion(5), beta = random_quaternion(6);
  const Quaternion want = hmul(beta, c(0, 0)) + hmul(hmul(alpha, a(0, 0)), b(0, 0));
  gemm_ref(alpha, a, b, beta, c);
  EXPECT_EQ(std::memcmp(&c(0, 0), &want, sizeof want), 0);
}

TEST(GemmRef, AlphaIsAppliedFromTheLeft) {
  QuatMatrix a(1, 1), b(1, 1), c(1, 1);
  a(0, 0) = basis::e2;
  b(0, 0) = basis::e0;
  gemm_ref(basis::e1, a, b, Quaternion::zero(), c);
  EXPECT_EQ(c(0, 0), basis::e3);  // e1 e2, not e2 e1
  gemm_ref(basis::e0, a, b, basis::e1, c);  // e1 e3 + e2 = -e2 + e2
  EXPECT_EQ(c(0, 0), Quaternion{});
}

TEST(GemmRef, MatchesComplexEmbedding) {
  const QuatMatrix a = random_matrix(4, 4, 10), b = random_matrix(4, 4, 11);
  QuatMatrix c(4, 4);
  gemm_ref(Quaternion::one(), a, b, Quaternion::zero(), c);
  const ComplexMatrix z = zgemm_naive(embed_complex(a), embed_complex(b));
  EXPECT_LE(relative_deviation(embed_complex(c), z).value, 1e-12);
}

TEST(GemmRef, RectangularWithLeadingDimension) {
  QuatMatrix a_store = random_matrix(9, 4, 20);
  QuatMatrix b_store = random_matrix(6, 7, 21);
  QuatMatrix c_store = random_matrix(10, 5, 22);
  const ConstQuatView a = a_store.block(1, 0, 7, 3);
  const ConstQuatView b = b_store.block(2, 1, 3, 5);
  const QuatView c = c_store.block(2, 0, 7, 5);
  const QuatMatrix c_before = c_store;
  gemm_ref(Quaternion::one(), a, b, Quaternion::zero(), c);
  const ComplexMatrix z = zgemm_naive(embed_complex(to_matrix(a)), embed_complex(to_matrix(b)));
  EXPECT_LE(relative_deviation(embed_complex(to_matrix(ConstQuatView(c))), z).value, 1e-12);
  // Rows outside the view are untouched.
  for (std::size_t j = 0; j < 5; ++j) {
    EXPECT_EQ(c_store(0, j), c_before(0, j));
    EXPECT_EQ(c_store(9, j), c_before(9, j));
  }
}

TEST(GemmRef, LeftLinearInAlpha) {
  const QuatMatrix a = random_matrix(6, 5, 30), b = random_matrix(5, 4, 31);
  const Quaternion alpha = random_quaternion(32);
  QuatMatrix scaled(6, 4), plain(6, 4);
  gemm_ref(alpha, a, b, Quaternion::zero(), scaled);
  gemm_ref(Quaternion::one(), a, b, Quaternion::zero(), plain);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 6; ++i) {
      const Quaternion want = alpha * plain(i, j);
      // Error scale of the k-sum: |alpha| sum_k |a_ik| |b_kj|. One extra
      // product of four-term sums on each side; 3 ulps observed.
      double scale = 0.0;
      for (std::size_t k = 0; k < 5; ++k) scale += norm(a(i, k)) * norm(b(k, j));
      scale *= norm(alpha);
      for (int c = 0; c < 4; ++c) EXPECT_LE(ulps_at_scale(scaled(i, j)[c], want[c], scale), 4.0);
    }
}

TEST(GemmRef, BlockDiagonalDecomposes) {
  QuatMatrix a(5, 5);
  const QuatMatrix a1 = random_matrix(2, 2, 40), a2 = random_matrix(3, 3, 41);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 2; ++i) a(i, j) = a1(i, j);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 3; ++i) a(i + 2, j + 2) = a2(i, j);
  const QuatMatrix b = random_matrix(5, 4, 42);
  QuatMatrix c(5, 4), c1(2, 4), c2(3, 4);
  gemm_ref(Quaternion::one(), a, b, Quaternion::zero(), c);
  gemm_ref(Quaternion::one(), a1, b.block(0, 0, 2, 4), Quaternion::zero(), c1);
  gemm_ref(Quaternion::one(), a2, b.block(2, 0, 3, 4), Quaternion::zero(), c2);
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(c(i, j), c1(i, j));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(c(i + 2, j), c2(i, j));
  }
}

TEST(GemmRef, BetaZeroNeverReadsC) {
  const QuatMatrix a = random_matrix(3, 3, 50), b = random_matrix(3, 3, 51);
  QuatMatrix c(3, 3);
  c.fill({std::numeric_limits<double>::quiet_NaN(), INFINITY, -INFINITY, 1.0});
  gemm_ref(random_quaternion(52), a, b, Quaternion::zero(), c);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 3; ++i)
      for (int k = 0; k < 4; ++k) EXPECT_TRUE(std::isfinite(c(i, j)[k]));
}

TEST(GemmRef, AlphaZeroBetaOneLeavesCUnchanged) {
  const QuatMatrix a = random_matrix(3, 2, 60), b = random_matrix(2, 3, 61);
  QuatMatrix c = random_matrix(3, 3, 62);
  const QuatMatrix before = c;
  gemm_ref(Quaternion::zero(), a, b, Quaternion::one(), c);
  EXPECT_TRUE(bit_equal(c, before));
}

TEST(GemmRef, Errors) {
  QuatMatrix a(3, 2), b(3, 2), c(3, 2);
  EXPECT_THROW(gemm_ref(Quaternion::one(), a, b, Quaternion::zero(), c), dimension_error);
  QuatMatrix sq(4, 4);
  EXPECT_THROW(gemm_ref(Quaternion::one(), sq, sq, Quaternion::zero(), sq), alias_error);
  // Disjoint views of one buffer are fine; overlapping ones are not.
  QuatMatrix big = random_matrix(4, 6, 1);
  const ConstQuatView left = big.block(0, 0, 4, 2);
  const QuatView right = big.block(0, 4, 4, 2);
  const QuatMatrix bb = random_matrix(2, 2, 2);
  EXPECT_NO_THROW(gemm_ref(Quaternion::one(), left, bb, Quaternion::zero(), right));
  const QuatView overlap = big.block(0, 1, 4, 2);
  EXPECT_THROW(gemm_ref(Quaternion::one(), left, bb, Quaternion::zero(), overlap), alias_error);
}
