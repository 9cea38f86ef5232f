#include <gtest/gtest.h>

#include <random>

#include "hgemm/instrumented.hpp"
#include "hgemm/microkernel.hpp"
#include "hgemm/pack.hpp"
#include "test_util.hpp"

using namespace hgemm;
using hgemm::testing::bit_equal;

namespace {

struct Panels {
  PackedPanelA a;
  PackedPanelB b;
};

/// Packs a 2 x kc column block of A and kc x 2 row block of B.
Panels make_panels(const QuatMatrix& a, const QuatMatrix& b) {
  const BlockingConfig cfg{2, 2, std::max<std::size_t>(a.cols(), 1), 2, 2};
  Panels p{PackedPanelA(cfg), PackedPanelB(cfg)};
  pack_a(a, Quaternion::one(), p.a);
  pack_b(b, p.b);
  return p;
}

using Kernel = void (*)(std::span<const double>, std::span<const double>, std::size_t, QuatView);

std::vector<std::pair<const char*, Kernel>> kernels() {
  std::vector<std::pair<const char*, Kernel>> k{{"portable", &microkernel_portable},
                                                {"dispatch", &microkernel}};
#if defined(__AVX__)
  k.emplace_back("vector", &microkernel_vector);
#endif
  return k;
}

}  // namespace

TEST(Microkernel, IdentityRankOne) {
  for (auto [name, kernel] : kernels()) {
    QuatMatrix a(2, 1), b(1, 2), c(2, 2);
    a(0, 0) = a(1, 0) = basis::e0;
    b(0, 0) = b(0, 1) = basis::e0;
    const Panels p = make_panels(a, b);
    kernel(p.a.data(), p.b.data(), 1, c);
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(c(i, j), basis::e0) << name;
  }
}

TEST(Microkernel, RankOneMatchesFourHmuls) {
  std::mt19937_64 rng(1);
  for (auto [name, kernel] : kernels()) {
    const Quaternion p = hgemm::testing::random_q(rng), q = hgemm::testing::random_q(rng),
                     r = hgemm::testing::random_q(rng), s = hgemm::testing::random_q(rng);
    QuatMatrix a(2, 1), b(1, 2), c(2, 2);
    a(0, 0) = p;
    a(1, 0) = q;
    b(0, 0) = r;
    b(0, 1) = s;
    const Panels pan = make_panels(a, b);
    kernel(pan.a.data(), pan.b.data(), 1, c);
    QuatMatrix want(2, 2);
    want(0, 0) = hmul(p, r);
    want(0, 1) = hmul(p, s);
    want(1, 0) = hmul(q, r);
    want(1, 1) = hmul(q, s);
    EXPECT_TRUE(bit_equal(c, want)) << name;
  }
}

TEST(Microkernel, StepsAccumulateInOrder) {
  for (auto [name, kernel] : kernels()) {
    const QuatMatrix a = random_matrix(2, 3, 5), b = random_matrix(3, 2, 6);
    const QuatMatrix c0 = random_matrix(2, 2, 7);
    QuatMatrix all = c0, stepwise = c0;
    const Panels p = make_panels(a, b);
    kernel(p.a.data(), p.b.data(), 3, all);
    for (std::size_t k = 0; k < 3; ++k) {
      const Panels pk = make_panels(to_matrix(a.block(0, k, 2, 1)), to_matrix(b.block(k, 0, 1, 2)));
      kernel(pk.a.data(), pk.b.data(), 1, stepwise);
    }
    EXPECT_TRUE(bit_equal(all, stepwise)) << name;
  }
}

TEST(Microkernel, ZeroStepsLeaveCUnchanged) {
  for (auto [name, kernel] : kernels()) {
    QuatMatrix c = random_matrix(2, 2, 9);
    c(1, 0).y = -0.0;
    const QuatMatrix before = c;
    const Panels p = make_panels(QuatMatrix(2, 0), QuatMatrix(0, 2));
    kernel(p.a.data(), p.b.data(), 0, c);
    EXPECT_TRUE(bit_equal(c, before)) << name;
  }
}

TEST(Microkernel, StridedTileOfLargerMatrix) {
  const QuatMatrix a = random_matrix(2, 4, 11), b = random_matrix(4, 2, 12);
  QuatMatrix big = random_matrix(5, 4, 13);
  QuatMatrix small = to_matrix(big.block(1, 2, 2, 2));
  const Panels p = make_panels(a, b);
  microkernel(p.a.data(), p.b.data(), 4, big.block(1, 2, 2, 2));
  microkernel_portable(p.a.data(), p.b.data(), 4, small);
  EXPECT_TRUE(bit_equal(to_matrix(big.block(1, 2, 2, 2)), small));
}

TEST(Microkernel, RejectsBadShapes) {
  const Panels p = make_panels(random_matrix(2, 2, 1), random_matrix(2, 2, 2));
  QuatMatrix c3(3, 2), c(2, 2);
  EXPECT_THROW(microkernel_portable(p.a.data(), p.b.data(), 2, c3), dimension_error);
  EXPECT_THROW(microkernel_portable(p.a.data(), p.b.data(), 3, c), dimension_error);
}

TEST(Microkernel, PortableAndVectorAreBitIdentical) {
  if (!lanes::has_vector_backend) GTEST_SKIP() << "no 4-lane real64 vectors in this build";
#if defined(__AVX__)
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t kc = rng() % 65;
    const QuatMatrix a = kc ? random_matrix(2, kc, rng()) : QuatMatrix(2, 0);
    const QuatMatrix b = kc ? random_matrix(kc, 2, rng()) : QuatMatrix(0, 2);
    const QuatMatrix c0 = random_matrix(2, 2, rng());
    QuatMatrix cv = c0, cp = c0;
    const Panels p = make_panels(a, b);
    microkernel_vector(p.a.data(), p.b.data(), kc, cv);
    microkernel_portable(p.a.data(), p.b.data(), kc, cp);
    ASSERT_TRUE(bit_equal(cv, cp)) << "trial " << t;
  }
#endif
}

TEST(Microkernel, GenericKernelMatchesHmulSum) {
  const BlockingConfig cfg{3, 3, 5, 3, 3};
  const QuatMatrix a = random_matrix(3, 5, 1), b = random_matrix(5, 3, 2);
  const PackedPanelA pa = pack_a(a, Quaternion::one(), cfg);
  const PackedPanelB pb = pack_b(b, cfg);
  QuatMatrix c = random_matrix(3, 3, 3);
  QuatMatrix want = c;
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t i = 0; i < 3; ++i) want(i, j) = want(i, j) + hmul(a(i, k), b(k, j));
  microkernel_generic(pa.panel(0), pb.panel(0), 5, c);
  EXPECT_TRUE(bit_equal(c, want));
}

// ---------------------------------------------------------------------------
// Operation budget and transpose composition

TEST(OpBudget, PerStepCounts) {
  for (std::size_t kc : {1u, 7u, 64u}) {
    const Panels p = make_panels(random_matrix(2, kc, 1), random_matrix(kc, 2, 2));
    QuatMatrix c(2, 2);
    const auto n = instrumented::count_microkernel(p.a.data(), p.b.data(), kc, c);
    EXPECT_EQ(n.panel_loads, 4 * kc);
    EXPECT_EQ(n.lane_shuffles, 8 * kc);
    EXPECT_EQ(n.lane_arith, 32 * kc);
    EXPECT_EQ(n.c_loads, 4u);
    EXPECT_EQ(n.c_stores, 4u);
    EXPECT_EQ(n.transposes, 2u);
  }
}

#if defined(__AVX__)
TEST(OpBudget, VectorBackendIssuesTheSameSequence) {
  const Panels p = make_panels(random_matrix(2, 9, 1), random_matrix(9, 2, 2));
  QuatMatrix cs = random_matrix(2, 2, 3), cv = cs;
  const auto ns = instrumented::count_microkernel<lanes::scalar_ops>(p.a.data(), p.b.data(), 9, cs);
  const auto nv = instrumented::count_microkernel<lanes::avx_ops>(p.a.data(), p.b.data(), 9, cv);
  EXPECT_EQ(ns, nv);
  EXPECT_TRUE(bit_equal(cs, cv));
}
#endif

namespace {

// Lane tags: component c of quaternion q is encoded as 10 * q + c, so a1 = 1x,
// a2 = 2x, b1 = 3x, b2 = 4x. Every tag is exactly representable.
template <class Ops>
void stage2_lanes(const std::array<double, 8>& a_step, const std::array<double, 8>& b_step,
                  std::array<std::array<double, 4>, 4>& a_out,
                  std::array<std::array<double, 4>, 4>& b_out) {
  Ops ops;
  using V = typename Ops::vec;
  alignas(32) double a[8], b[8];
  std::copy(a_step.begin(), a_step.end(), a);
  std::copy(b_step.begin(), b_step.end(), b);
  V av[4], bv[4];
  detail::stage2_a(ops, a, av);
  detail::stage2_b(ops, b, bv);
  for (int c = 0; c < 4; ++c) {
    ops.storeu(a_out[c].data(), av[c]);
    ops.storeu(b_out[c].data(), bv[c]);
  }
}

}  // namespace

TEST(TransposeComposition, PackThenKernelGivesComponentLanes) {
  QuatMatrix a(2, 1), b(1, 2);
  a(0, 0) = {10, 11, 12, 13};
  a(1, 0) = {20, 21, 22, 23};
  b(0, 0) = {30, 31, 32, 33};
  b(0, 1) = {40, 41, 42, 43};
  const Panels p = make_panels(a, b);
  std::array<double, 8> as{}, bs{};
  std::copy_n(p.a.data().begin(), 8, as.begin());
  std::copy_n(p.b.data().begin(), 8, bs.begin());

  std::array<std::array<double, 4>, 4> lanes_a{}, lanes_b{};
  stage2_lanes<lanes::scalar_ops>(as, bs, lanes_a, lanes_b);
  for (int c = 0; c < 4; ++c) {
    // A^c = [a1c, a1c, a2c, a2c], B^c = [b1c, b2c, b1c, b2c]
    EXPECT_EQ(lanes_a[c], (std::array<double, 4>{10. + c, 10. + c, 20. + c, 20. + c}));
    EXPECT_EQ(lanes_b[c], (std::array<double, 4>{30. + c, 40. + c, 30. + c, 40. + c}));
  }
#if defined(__AVX__)
  std::array<std::array<double, 4>, 4> va{}, vb{};
  stage2_lanes<lanes::avx_ops>(as, bs, va, vb);
  EXPECT_EQ(va, lanes_a);
  EXPECT_EQ(vb, lanes_b);
#endif
}

TEST(TransposeComposition, FullTransposeIsAnInvolution) {
  auto check = [](auto ops) {
    using Ops = decltype(ops);
    alignas(32) double m[16];
    for (int i = 0; i < 16; ++i) m[i] = i;
    typename Ops::vec r[4] = {ops.loadu(m), ops.loadu(m + 4), ops.loadu(m + 8), ops.loadu(m + 12)};
    ops.transpose4(r[0], r[1], r[2], r[3]);
    double t[16];
    for (int i = 0; i < 4; ++i) ops.storeu(t + 4 * i, r[i]);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) EXPECT_EQ(t[4 * i + j], m[4 * j + i]);
    ops.transpose4(r[0], r[1], r[2], r[3]);
    for (int i = 0; i < 4; ++i) ops.storeu(t + 4 * i, r[i]);
    for (int i = 0; i < 16; ++i) EXPECT_EQ(t[i], m[i]);
  };
  check(lanes::scalar_ops{});
#if defined(__AVX__)
  check(lanes::avx_ops{});
#endif
}
