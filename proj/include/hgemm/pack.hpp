#pragma once

/**
 * @file pack.hpp
 * @brief Panel packing for the layered HGEMM.
 *
 * A block of A (mc x kc) is packed into ceil(mc/mr) contiguous row panels;
 * a block of B (kc x nc) into ceil(nc/nr) contiguous column panels. Within a
 * panel, the mr (or nr) quaternions of one k-step are adjacent, and k-steps
 * follow in ascending order. Ragged panels are zero padded to mr (nr) rows.
 *
 * For the 2x2 register block the four components of the two quaternions of a
 * k-step are permuted at pack time (first half of the register transpose):
 *
 *   A step (a1, a2):  [a1w a1x a2w a2x | a1y a1z a2y a2z]
 *   B step (b1, b2):  [b1w b2w b1y b2y | b1x b2x b1z b2z]
 *
 * so that the kernel only needs in-lane duplicates for A and 128-bit-half
 * duplicates for B to form the component lanes. Both permutations are space
 * preserving. Other register shapes store each quaternion as [w x y z].
 */

#include <algorithm>
#include <cstring>
#include <memory>
#include <new>
#include <span>

#include "hgemm/blocking.hpp"
#include "hgemm/error.hpp"
#include "hgemm/matrix.hpp"

namespace hgemm {

/// 32-byte aligned, uninitialized array of doubles.
class AlignedBuffer {
 public:
  static constexpr std::size_t alignment = 32;

  AlignedBuffer() = default;
  explicit AlignedBuffer(std::size_t count)
      : data_(count == 0 ? nullptr
                         : static_cast<double*>(::operator new(
                               count * sizeof(double), std::align_val_t{alignment}))),
        size_(count) {}

  double* data() { return data_.get(); }
  const double* data() const { return data_.get(); }
  std::size_t size() const { return size_; }

 private:
  struct deleter {
    void operator()(double* p) const { ::operator delete(p, std::align_val_t{alignment}); }
  };
  std::unique_ptr<double, deleter> data_;
  std::size_t size_ = 0;
};

enum class PanelLayout {
  stage1_2x2,  // permuted components, mr = 2 (A) or nr = 2 (B)
  plain,       // [w x y z] per quaternion
};

namespace detail {

/// Shared storage for a packed A or B block.
class PackedPanel {
 public:
  PackedPanel() = default;
  PackedPanel(std::size_t block_cap, std::size_t kc_cap, std::size_t reg, PanelLayout layout)
      : buf_(4 * block_cap * kc_cap), block_cap_(block_cap), kc_cap_(kc_cap), reg_(reg),
        layout_(layout) {}

  PanelLayout layout() const { return layout_; }
  std::size_t register_block() const { return reg_; }
  std::size_t kc() const { return kc_; }
  /// Logical rows of A (or columns of B) held.
  std::size_t extent() const { return extent_; }
  std::size_t padded_extent() const { return panels() * reg_; }
  std::size_t panels() const { return (extent_ + reg_ - 1) / reg_; }

  /// Packed doubles in use: kc * padded_extent quaternions.
  std::size_t size() const { return 4 * kc_ * padded_extent(); }
  std::size_t capacity() const { return buf_.size(); }

  std::span<const double> data() const { return {buf_.data(), size()}; }

  /// Contiguous k-steps of panel `p`.
  std::span<const double> panel(std::size_t p) const {
    const std::size_t stride = 4 * kc_ * reg_;
    return {buf_.data() + p * stride, stride};
  }

 protected:
  void reset(std::size_t extent, std::size_t kc) {
    if (extent > block_cap_ || kc > kc_cap_)
      throw dimension_error("pack: block exceeds configured panel capacity");
    extent_ = extent;
    kc_ = kc;
  }
  double* mutable_panel(std::size_t p) { return buf_.data() + p * 4 * kc_ * reg_; }

 private:
  AlignedBuffer buf_;
  std::size_t block_cap_ = 0;
  std::size_t kc_cap_ = 0;
  std::size_t reg_ = 1;
  PanelLayout layout_ = PanelLayout::plain;
  std::size_t extent_ = 0;
  std::size_t kc_ = 0;
};

}  // namespace detail

/// Packed (alpha-scaled) block of A.
class PackedPanelA : public detail::PackedPanel {
 public:
  PackedPanelA() = default;
  explicit PackedPanelA(const BlockingConfig& cfg)
      : PackedPanel(cfg.mc, cfg.kc, cfg.mr,
                    cfg.uses_2x2_kernel() ? PanelLayout::stage1_2x2 : PanelLayout::plain) {}

  friend void pack_a(ConstQuatView block, const Quaternion& alpha, PackedPanelA& out);
};

/// Packed block of B.
class PackedPanelB : public detail::PackedPanel {
 public:
  PackedPanelB() = default;
  explicit PackedPanelB(const BlockingConfig& cfg)
      : PackedPanel(cfg.nc, cfg.kc, cfg.nr,
                    cfg.uses_2x2_kernel() ? PanelLayout::stage1_2x2 : PanelLayout::plain) {}

  friend void pack_b(ConstQuatView block, PackedPanelB& out);
};

/// Packs `block` (mc x kc) scaled on the left by alpha into `out`, reusing
/// its storage.
inline void pack_a(ConstQuatView block, const Quaternion& alpha, PackedPanelA& out) {
  const std::size_t mc = block.rows(), kc = block.cols(), mr = out.register_block();
  out.reset(mc, kc);
  auto element = [&](std::size_t i, std::size_t k) {
    return i < mc ? hmul(alpha, block(i, k)) : Quaternion::zero();
  };
  for (std::size_t p = 0; p < out.panels(); ++p) {
    double* dst = out.mutable_panel(p);
    const std::size_t i0 = p * mr;
    for (std::size_t k = 0; k < kc; ++k) {
      if (out.layout() == PanelLayout::stage1_2x2) {
        const Quaternion a1 = element(i0, k), a2 = element(i0 + 1, k);
        const double step[8] = {a1.w, a1.x, a2.w, a2.x, a1.y, a1.z, a2.y, a2.z};
        std::memcpy(dst, step, sizeof step);
        dst += 8;
      } else {
        for (std::size_t r = 0; r < mr; ++r) {
          const Quaternion q = element(i0 + r, k);
          dst[0] = q.w;
          dst[1] = q.x;
          dst[2] = q.y;
          dst[3] = q.z;
          dst += 4;
        }
      }
    }
  }
}

/// Packs `block` (kc x nc) into `out`, reusing its storage.
inline void pack_b(ConstQuatView block, PackedPanelB& out) {
  const std::size_t kc = block.rows(), nc = block.cols(), nr = out.register_block();
  out.reset(nc, kc);
  auto element = [&](std::size_t k, std::size_t j) {
    return j < nc ? block(k, j) : Quaternion::zero();
  };
  for (std::size_t p = 0; p < out.panels(); ++p) {
    double* dst = out.mutable_panel(p);
    const std::size_t j0 = p * nr;
    for (std::size_t k = 0; k < kc; ++k) {
      if (out.layout() == PanelLayout::stage1_2x2) {
        const Quaternion b1 = element(k, j0), b2 = element(k, j0 + 1);
        const double step[8] = {b1.w, b2.w, b1.y, b2.y, b1.x, b2.x, b1.z, b2.z};
        std::memcpy(dst, step, sizeof step);
        dst += 8;
      } else {
        for (std::size_t r = 0; r < nr; ++r) {
          const Quaternion q = element(k, j0 + r);
          dst[0] = q.w;
          dst[1] = q.x;
          dst[2] = q.y;
          dst[3] = q.z;
          dst += 4;
        }
      }
    }
  }
}

inline PackedPanelA pack_a(ConstQuatView block, const Quaternion& alpha,
                           const BlockingConfig& cfg) {
  cfg.validate();
  PackedPanelA out(cfg);
  pack_a(block, alpha, out);
  return out;
}

inline PackedPanelB pack_b(ConstQuatView block, const BlockingConfig& cfg) {
  cfg.validate();
  PackedPanelB out(cfg);
  pack_b(block, out);
  return out;
}

}  // namespace hgemm
