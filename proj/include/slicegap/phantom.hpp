#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "slicegap/rng.hpp"
#include "slicegap/volume.hpp"

namespace slicegap {

/// Parameters for synthetic layered-ellipsoid phantoms. The structures drift
/// smoothly along z (correlation length smoothness_z, in slices) so that
/// intensity is z-coherent but not affine in z.
struct PhantomSpec {
  Index depth = 33, height = 64, width = 64;  // 33 = 4*8+1, so K=4 divides evenly
  int num_structures = 3;
  double smoothness_z = 6.0;   // correlation length of structure drift, slices
  double drift_amp = 0.06;     // center/radius drift amplitude, fraction of min(H,W)
  double noise_sd = 0.01;
  std::uint64_t seed = 0;
};

namespace detail {

/// Gaussian-smoothed white noise along z, rescaled to unit sample SD.
inline std::vector<double> smooth_drift_curve(Rng& rng, Index n, double corr_len) {
  std::vector<double> white(static_cast<std::size_t>(n));
  for (auto& v : white) v = rng.normal();
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * corr_len)));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double ksum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * (i / corr_len) * (i / corr_len));
    ksum += kernel[static_cast<std::size_t>(i + radius)];
  }
  for (auto& v : kernel) v /= ksum;

  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (Index z = 0; z < n; ++z) {
    double acc = 0.0;
    for (int i = -radius; i <= radius; ++i) {
      Index src = z + i;
      if (src < 0) src = -src;                    // reflect
      if (src >= n) src = 2 * (n - 1) - src;
      src = std::clamp<Index>(src, 0, n - 1);
      acc += kernel[static_cast<std::size_t>(i + radius)] * white[static_cast<std::size_t>(src)];
    }
    out[static_cast<std::size_t>(z)] = acc;
  }
  double mean = 0.0;
  for (double v : out) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : out) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  const double sd = std::sqrt(var);
  if (sd > 0.0)
    for (double& v : out) v = (v - mean) / sd;
  else
    for (double& v : out) v = 0.0;
  return out;
}

inline double smoothstep01(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

}  // namespace detail

/// Deterministic synthetic phantom: nested soft-edged ellipsoid layers (a
/// darker shell around a bright core, thin high-contrast interface between
/// them) over a flat background, drifting smoothly along z, plus optional
/// Gaussian noise. Values are clipped to [0, 1].
template <typename Scalar = float>
Volume3<Scalar> make_phantom(const PhantomSpec& spec) {
  if (spec.depth < 1 || spec.height < 1 || spec.width < 1 || spec.smoothness_z <= 0.0)
    throw std::invalid_argument("make_phantom: invalid spec");
  Rng rng(spec.seed);
  const Index d = spec.depth, h = spec.height, w = spec.width;
  const double extent = static_cast<double>(std::min(h, w));

  Volume3<double> acc(d, h, w);
  const double background = 0.08;
  acc.data.array().setConstant(background);

  const double edge = 1.1;  // soft-edge width, px

  for (int s = 0; s < spec.num_structures; ++s) {
    const double cy0 = rng.uniform(0.28, 0.72) * static_cast<double>(h);
    const double cx0 = rng.uniform(0.28, 0.72) * static_cast<double>(w);
    const double ry0 = rng.uniform(0.14, 0.30) * extent;
    const double rx0 = rng.uniform(0.14, 0.30) * extent;
    const double core_val = rng.uniform(0.60, 0.95);
    const double shell_val = rng.uniform(0.25, 0.45);
    const double shell_thick = rng.uniform(2.0, 4.0);  // px

    const auto cy_curve = detail::smooth_drift_curve(rng, d, spec.smoothness_z);
    const auto cx_curve = detail::smooth_drift_curve(rng, d, spec.smoothness_z);
    const auto r_curve = detail::smooth_drift_curve(rng, d, spec.smoothness_z);
    const double amp = spec.drift_amp * extent;

    for (Index z = 0; z < d; ++z) {
      const double cy = cy0 + amp * cy_curve[static_cast<std::size_t>(z)];
      const double cx = cx0 + amp * cx_curve[static_cast<std::size_t>(z)];
      const double rs = std::max(0.25, 1.0 + 0.5 * spec.drift_amp * r_curve[static_cast<std::size_t>(z)] * 4.0);
      const double ry = ry0 * rs, rx = rx0 * rs;
      const double r_eff = std::sqrt(ry * rx);
      for (Index y = 0; y < h; ++y)
        for (Index x = 0; x < w; ++x) {
          const double dy = (static_cast<double>(y) - cy) / ry;
          const double dx = (static_cast<double>(x) - cx) / rx;
          const double rho = std::sqrt(dy * dy + dx * dx);
          // signed distances (px) inward from the outer and inner boundaries
          const double d_outer = (1.0 - rho) * r_eff;
          const double d_inner = d_outer - shell_thick;
          const double m_outer = detail::smoothstep01(d_outer / edge);
          const double m_inner = detail::smoothstep01(d_inner / edge);
          double& v = acc.at(z, y, x);
          v = v + m_outer * (shell_val - v);
          v = v + m_inner * (core_val - v);
        }
    }
  }

  if (spec.noise_sd > 0.0)
    for (Index i = 0; i < acc.data.size(); ++i) acc.data[i] += spec.noise_sd * rng.normal();
  for (Index i = 0; i < acc.data.size(); ++i) acc.data[i] = std::clamp(acc.data[i], 0.0, 1.0);

  Volume3<Scalar> out;
  out.data = acc.data.template cast<Scalar>();
  out.spacing = {1.0, 1.0, 1.0};
  out.meta["generator"] = "phantom";
  out.meta["seed"] = std::to_string(spec.seed);
  return out;
}

}  // namespace slicegap
