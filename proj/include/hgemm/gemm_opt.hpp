#pragma once

// Layered (cache-blocked) HGEMM.
//
//   C <- beta C                                   (one sweep, beta on the left)
//   for jc over N step nc:
//     for pc over K step kc:     pack B(pc, jc)         -> B~
//       for ic over M step mc:   pack alpha A(ic, pc)   -> A~
//         for jr over nc step nr:
//           for ir over mc step mr:  C_r += A~_ir B~_jr  (microkernel)
//
// Ragged register tiles go through a scratch tile: the valid part of C is
// copied in, padding is zero, and only the valid part is copied back. The
// per-element accumulation order (ascending k, one c + alpha a b update per
// step) is the same as in gemm_ref.

#include <algorithm>
#include <vector>

#include "hgemm/blocking.hpp"
#include "hgemm/gemm_ref.hpp"
#include "hgemm/microkernel.hpp"
#include "hgemm/pack.hpp"

namespace hgemm {

enum class KernelPath {
  automatic,  // vector kernel when built with AVX
  portable,
  vector,  // config_error when unavailable
};

inline void gemm_opt(const Quaternion& alpha, ConstQuatView a, ConstQuatView b,
                     const Quaternion& beta, QuatView c, const BlockingConfig& cfg,
                     KernelPath path = KernelPath::automatic) {
  detail::check_gemm_operands(a, b, c);
  cfg.validate();
  if (path == KernelPath::vector && !lanes::has_vector_backend)
    throw config_error("vector microkernel not available in this build");

  const std::size_t m = c.rows(), n = c.cols(), k = a.cols();
  detail::scale_left(beta, c);
  if (m == 0 || n == 0 || k == 0 || alpha == Quaternion::zero()) return;

  const std::size_t mr = cfg.mr, nr = cfg.nr;
  const bool two_by_two = cfg.uses_2x2_kernel();
  auto kernel = [&](std::span<const double> ap, std::span<const double> bp, std::size_t kc,
                    QuatView cr) {
    if (!two_by_two) {
      microkernel_generic(ap, bp, kc, cr);
    } else if (path == KernelPath::portable) {
      microkernel_portable(ap, bp, kc, cr);
    } else {
      microkernel(ap, bp, kc, cr);
    }
  };

  PackedPanelA a_packed(cfg);
  PackedPanelB b_packed(cfg);
  std::vector<Quaternion> scratch(mr * nr);
  const QuatView tile(scratch.data(), mr, nr, mr);

  for (std::size_t jc = 0; jc < n; jc += cfg.nc) {
    const std::size_t nb = std::min(cfg.nc, n - jc);
    for (std::size_t pc = 0; pc < k; pc += cfg.kc) {
      const std::size_t kb = std::min(cfg.kc, k - pc);
      pack_b(b.block(pc, jc, kb, nb), b_packed);
      for (std::size_t ic = 0; ic < m; ic += cfg.mc) {
        const std::size_t mb = std::min(cfg.mc, m - ic);
        pack_a(a.block(ic, pc, mb, kb), alpha, a_packed);
        for (std::size_t jr = 0, jp = 0; jr < nb; jr += nr, ++jp) {
          const std::size_t cols = std::min(nr, nb - jr);
          const auto bp = b_packed.panel(jp);
          for (std::size_t ir = 0, ip = 0; ir < mb; ir += mr, ++ip) {
            const std::size_t rows = std::min(mr, mb - ir);
            const auto ap = a_packed.panel(ip);
            const QuatView cr = c.block(ic + ir, jc + jr, rows, cols);
            if (rows == mr && cols == nr) {
              kernel(ap, bp, kb, cr);
              continue;
            }
            for (std::size_t j = 0; j < nr; ++j)
              for (std::size_t i = 0; i < mr; ++i)
                tile(i, j) = (i < rows && j < cols) ? cr(i, j) : Quaternion::zero();
            kernel(ap, bp, kb, tile);
            for (std::size_t j = 0; j < cols; ++j)
              for (std::size_t i = 0; i < rows; ++i) cr(i, j) = tile(i, j);
          }
        }
      }
    }
  }
}

inline void gemm_opt(const Quaternion& alpha, ConstQuatView a, ConstQuatView b,
                     const Quaternion& beta, QuatView c) {
  gemm_opt(alpha, a, b, beta, c, default_blocking_config());
}

}  // namespace hgemm
