#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "slicegap/rng.hpp"
#include "slicegap/tensor.hpp"

namespace slicegap {

/// 3D scalar grid indexed (z, y, x) with per-axis physical spacing in mm.
/// Intensities are dimensionless; meta carries free-form provenance tags.
template <typename Scalar>
struct Volume3 {
  Tensor<Scalar> data;                        // shape [D, H, W]
  std::array<double, 3> spacing{1.0, 1.0, 1.0};  // (s_z, s_y, s_x), mm
  std::map<std::string, std::string> meta;

  Volume3() = default;
  Volume3(Index d, Index h, Index w, std::array<double, 3> sp = {1.0, 1.0, 1.0})
      : data(std::vector<Index>{d, h, w}), spacing(sp) {}

  Index depth() const { return data.rank() == 3 ? data.dim(0) : 0; }
  Index height() const { return data.rank() == 3 ? data.dim(1) : 0; }
  Index width() const { return data.rank() == 3 ? data.dim(2) : 0; }

  Scalar& at(Index z, Index y, Index x) { return data.at3(z, y, x); }
  Scalar at(Index z, Index y, Index x) const { return data.at3(z, y, x); }

  Eigen::Map<MatrixX<Scalar>> slice(Index z) {
    return Eigen::Map<MatrixX<Scalar>>(data.data() + z * height() * width(), height(), width());
  }
  Eigen::Map<const MatrixX<Scalar>> slice(Index z) const {
    return Eigen::Map<const MatrixX<Scalar>>(data.data() + z * height() * width(), height(), width());
  }
};

/// One 2D slice extracted along the stacking (z) axis.
template <typename Scalar>
struct Slice2 {
  MatrixX<Scalar> data;  // H x W
  Index index = 0;       // slice position in the source volume
};

/// Co-registered LR/HR crops on a shared grid.
template <typename Scalar>
struct PatchPair {
  Tensor<Scalar> lr_patch;  // [d, h, w]
  Tensor<Scalar> hr_patch;  // [d, h, w]
  std::array<Index, 3> origin{0, 0, 0};
};

using Volume3f = Volume3<float>;
using Volume3d = Volume3<double>;

// ---------------------------------------------------------------------------

/// Slice-subsampling degradation: keeps slices {offset, offset+K, ...} and
/// scales z-spacing by K. Retained voxels are copied bitwise.
template <typename Scalar>
Volume3<Scalar> degrade(const Volume3<Scalar>& vol, int k, int offset = 0) {
  if (k < 1) throw std::invalid_argument("degrade: K must be positive");
  if (offset < 0 || offset >= k) throw std::invalid_argument("degrade: offset must lie in [0, K)");
  const Index d = vol.depth();
  if (d <= offset) throw std::invalid_argument("degrade: volume shallower than offset");

  const Index d_out = (d - 1 - offset) / k + 1;
  Volume3<Scalar> out(d_out, vol.height(), vol.width(),
                      {vol.spacing[0] * k, vol.spacing[1], vol.spacing[2]});
  for (Index n = 0; n < d_out; ++n) out.slice(n) = vol.slice(offset + n * k);
  out.meta = vol.meta;
  out.meta["degrade_k"] = std::to_string(k);
  out.meta["degrade_offset"] = std::to_string(offset);
  return out;
}

/// q-th percentile (linear interpolation between order statistics, as in
/// numpy's default). q in [0, 100].
template <typename Scalar>
double percentile(const Tensor<Scalar>& t, double q) {
  if (t.size() == 0) throw std::invalid_argument("percentile: empty tensor");
  std::vector<Scalar> v(t.data(), t.data() + t.size());
  std::sort(v.begin(), v.end());
  const double rank = q / 100.0 * static_cast<double>(v.size() - 1);
  const Index lo = static_cast<Index>(std::floor(rank));
  const Index hi = std::min<Index>(lo + 1, static_cast<Index>(v.size()) - 1);
  const double frac = rank - static_cast<double>(lo);
  return static_cast<double>(v[lo]) + frac * (static_cast<double>(v[hi]) - static_cast<double>(v[lo]));
}

/// Clip at the upper percentile, then map [min, clip] affinely onto [0, 1].
/// Constant volumes map to all-zeros.
template <typename Scalar>
Volume3<Scalar> normalize_intensity(const Volume3<Scalar>& vol, double clip_percentile = 99.9) {
  if (vol.data.size() == 0) throw std::invalid_argument("normalize_intensity: empty volume");
  const double lo = static_cast<double>(vol.data.array().minCoeff());
  const double hi = percentile(vol.data, clip_percentile);
  Volume3<Scalar> out = vol;
  if (hi <= lo) {
    out.data.array().setZero();
  } else {
    const double scale = 1.0 / (hi - lo);
    for (Index i = 0; i < out.data.size(); ++i) {
      const double v = std::min(static_cast<double>(vol.data[i]), hi);
      out.data[i] = static_cast<Scalar>((v - lo) * scale);
    }
  }
  out.meta["normalized"] = "1";
  return out;
}

template <typename Scalar>
std::vector<Slice2<Scalar>> extract_slices(const Volume3<Scalar>& vol) {
  std::vector<Slice2<Scalar>> out;
  out.reserve(static_cast<std::size_t>(vol.depth()));
  for (Index z = 0; z < vol.depth(); ++z) out.push_back({vol.slice(z), z});
  return out;
}

template <typename Scalar>
Volume3<Scalar> stack_slices(const std::vector<Slice2<Scalar>>& slices,
                             std::array<double, 3> spacing) {
  if (slices.empty()) throw std::invalid_argument("stack_slices: no slices");
  const Index h = slices.front().data.rows();
  const Index w = slices.front().data.cols();
  Volume3<Scalar> out(static_cast<Index>(slices.size()), h, w, spacing);
  for (std::size_t i = 0; i < slices.size(); ++i) {
    if (slices[i].data.rows() != h || slices[i].data.cols() != w)
      throw std::invalid_argument("stack_slices: slice shape mismatch");
    out.slice(static_cast<Index>(i)) = slices[i].data;
  }
  return out;
}

/// Linear interpolation along z only (in-plane resolution is untouched in
/// this task). Output depth is K*(D-1)+1; anchor slices are copied bitwise.
template <typename Scalar>
Volume3<Scalar> trilinear_upsample(const Volume3<Scalar>& vol, int k) {
  if (k < 1) throw std::invalid_argument("trilinear_upsample: K must be positive");
  const Index d = vol.depth();
  if (d < 2) throw std::invalid_argument("trilinear_upsample: need at least 2 slices");

  const Index d_out = static_cast<Index>(k) * (d - 1) + 1;
  Volume3<Scalar> out(d_out, vol.height(), vol.width(),
                      {vol.spacing[0] / k, vol.spacing[1], vol.spacing[2]});
  for (Index n = 0; n < d; ++n) out.slice(n * k) = vol.slice(n);
  for (Index n = 0; n + 1 < d; ++n) {
    for (Index j = 1; j < k; ++j) {
      const Scalar t = static_cast<Scalar>(j) / static_cast<Scalar>(k);
      out.slice(n * k + j) =
          (Scalar(1) - t) * vol.slice(n).array() + t * vol.slice(n + 1).array();
    }
  }
  out.meta = vol.meta;
  out.meta["upsample"] = "trilinear";
  out.meta["upsample_k"] = std::to_string(k);
  return out;
}

/// Random co-registered crops from two volumes on the same grid.
/// Deterministic for a given seed.
template <typename Scalar>
std::vector<PatchPair<Scalar>> sample_patch_pairs(const Volume3<Scalar>& lr,
                                                  const Volume3<Scalar>& hr,
                                                  std::array<Index, 3> patch_size, Index count,
                                                  std::uint64_t rng_seed) {
  if (!lr.data.same_shape(hr.data))
    throw std::invalid_argument("sample_patch_pairs: lr/hr grids differ");
  const auto [pd, ph, pw] = patch_size;
  if (pd < 1 || ph < 1 || pw < 1 || pd > hr.depth() || ph > hr.height() || pw > hr.width())
    throw std::invalid_argument("sample_patch_pairs: patch does not fit inside volume");

  Rng rng(rng_seed);
  std::vector<PatchPair<Scalar>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Index c = 0; c < count; ++c) {
    const Index z0 = rng.uniform_int(hr.depth() - pd + 1);
    const Index y0 = rng.uniform_int(hr.height() - ph + 1);
    const Index x0 = rng.uniform_int(hr.width() - pw + 1);
    PatchPair<Scalar> p;
    p.origin = {z0, y0, x0};
    p.lr_patch = Tensor<Scalar>({pd, ph, pw});
    p.hr_patch = Tensor<Scalar>({pd, ph, pw});
    for (Index z = 0; z < pd; ++z)
      for (Index y = 0; y < ph; ++y)
        for (Index x = 0; x < pw; ++x) {
          p.lr_patch.at3(z, y, x) = lr.at(z0 + z, y0 + y, x0 + x);
          p.hr_patch.at3(z, y, x) = hr.at(z0 + z, y0 + y, x0 + x);
        }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace slicegap
