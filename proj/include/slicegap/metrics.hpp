#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "slicegap/errors.hpp"
#include "slicegap/volume.hpp"

namespace slicegap {

/// Per-method PSNR/SSIM aggregate, Table-style.
struct EvalReport {
  struct PerVolume {
    std::string id;
    double psnr = 0.0;
    double ssim = 0.0;
  };
  std::string method;
  double psnr_mean = 0.0, psnr_sd = 0.0;
  double ssim_mean = 0.0, ssim_sd = 0.0;
  std::vector<PerVolume> per_volume;
  int psnr_inf_excluded = 0;  // identical-volume sentinels dropped from the mean
};

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  int dof = 0;
  bool degenerate = false;  // zero variance of differences; p undefined
};

/// Two-sided paired t-test. Degenerate when all differences are equal.
TTestResult paired_t_test(const std::vector<double>& xs, const std::vector<double>& ys);

/// Student t CDF, and the regularized incomplete beta it is built on.
double student_t_cdf(double t, int dof);
double incomplete_beta(double a, double b, double x);

// ---------------------------------------------------------------------------

namespace detail {

template <typename Scalar>
double masked_mse(const Volume3<Scalar>& a, const Volume3<Scalar>& b,
                  const std::vector<Index>& z_indices) {
  const Index hw = a.height() * a.width();
  double acc = 0.0;
  for (Index z : z_indices) {
    const Scalar* pa = a.data.data() + z * hw;
    const Scalar* pb = b.data.data() + z * hw;
    for (Index i = 0; i < hw; ++i) {
      const double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
      acc += d * d;
    }
  }
  return acc / (static_cast<double>(z_indices.size()) * static_cast<double>(hw));
}

}  // namespace detail

inline std::vector<Index> all_indices(Index d) {
  std::vector<Index> out(static_cast<std::size_t>(d));
  for (Index z = 0; z < d; ++z) out[static_cast<std::size_t>(z)] = z;
  return out;
}

/// Slice indices NOT retained by degrade(·, K) — the positions a method has
/// to fill in and the default evaluation region.
inline std::vector<Index> unobserved_indices(Index d, int k) {
  std::vector<Index> out;
  for (Index z = 0; z < d; ++z)
    if (z % k != 0) out.push_back(z);
  return out;
}

template <typename Scalar>
double psnr_masked(const Volume3<Scalar>& a, const Volume3<Scalar>& b,
                   const std::vector<Index>& z_indices, double max_val = 1.0) {
  if (!a.data.same_shape(b.data)) throw std::invalid_argument("psnr: shape mismatch");
  if (z_indices.empty()) throw std::invalid_argument("psnr: empty slice mask");
  const double mse = detail::masked_mse(a, b, z_indices);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(max_val * max_val / mse);
}

/// 10*log10(max^2 / MSE); identical inputs return +infinity.
template <typename Scalar>
double psnr(const Volume3<Scalar>& a, const Volume3<Scalar>& b, double max_val = 1.0) {
  return psnr_masked(a, b, all_indices(a.depth()), max_val);
}

// ---------------------------------------------------------------------------
// Multiscale SSIM, computed per z-slice (the 2003 metric is 2D) and averaged.

struct MsSsimOptions {
  int scales = 0;  // 0 = as many of the 5 reference scales as the image admits
  double k1 = 0.01, k2 = 0.03;
  double max_val = 1.0;
  int window = 11;
  double sigma = 1.5;
};

namespace detail {

inline const double kMsSsimWeights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

inline std::vector<double> gaussian_window(int size, double sigma) {
  std::vector<double> w(static_cast<std::size_t>(size));
  const double c = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    w[static_cast<std::size_t>(i)] = std::exp(-0.5 * ((i - c) / sigma) * ((i - c) / sigma));
    sum += w[static_cast<std::size_t>(i)];
  }
  for (auto& v : w) v /= sum;
  return w;
}

// separable valid-mode filter
inline MatrixX<double> filter_valid(const MatrixX<double>& img, const std::vector<double>& w) {
  const int k = static_cast<int>(w.size());
  const Index h = img.rows(), wid = img.cols();
  MatrixX<double> tmp(h, wid - k + 1);
  for (Index y = 0; y < h; ++y)
    for (Index x = 0; x + k <= wid; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += w[static_cast<std::size_t>(i)] * img(y, x + i);
      tmp(y, x) = acc;
    }
  MatrixX<double> out(h - k + 1, wid - k + 1);
  for (Index y = 0; y + k <= h; ++y)
    for (Index x = 0; x < tmp.cols(); ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += w[static_cast<std::size_t>(i)] * tmp(y + i, x);
      out(y, x) = acc;
    }
  return out;
}

// 2x2 block-average downsample (floor sizes)
inline MatrixX<double> downsample2(const MatrixX<double>& img) {
  const Index h = img.rows() / 2, w = img.cols() / 2;
  MatrixX<double> out(h, w);
  for (Index y = 0; y < h; ++y)
    for (Index x = 0; x < w; ++x)
      out(y, x) =
          0.25 * (img(2 * y, 2 * x) + img(2 * y, 2 * x + 1) + img(2 * y + 1, 2 * x) + img(2 * y + 1, 2 * x + 1));
  return out;
}

struct SsimMeans {
  double cs = 0.0;    // mean contrast-structure term
  double ssim = 0.0;  // mean full ssim (luminance * cs)
};

inline SsimMeans ssim_scale_means(const MatrixX<double>& a, const MatrixX<double>& b,
                                  const MsSsimOptions& opt) {
  const auto w = gaussian_window(opt.window, opt.sigma);
  const double c1 = (opt.k1 * opt.max_val) * (opt.k1 * opt.max_val);
  const double c2 = (opt.k2 * opt.max_val) * (opt.k2 * opt.max_val);
  const auto mu1 = filter_valid(a, w);
  const auto mu2 = filter_valid(b, w);
  const auto s11 = filter_valid(a.cwiseProduct(a), w);
  const auto s22 = filter_valid(b.cwiseProduct(b), w);
  const auto s12 = filter_valid(a.cwiseProduct(b), w);
  double cs_sum = 0.0, ssim_sum = 0.0;
  for (Index y = 0; y < mu1.rows(); ++y)
    for (Index x = 0; x < mu1.cols(); ++x) {
      const double m1 = mu1(y, x), m2 = mu2(y, x);
      const double v1 = s11(y, x) - m1 * m1;
      const double v2 = s22(y, x) - m2 * m2;
      const double cov = s12(y, x) - m1 * m2;
      const double cs = (2.0 * cov + c2) / (v1 + v2 + c2);
      const double lum = (2.0 * m1 * m2 + c1) / (m1 * m1 + m2 * m2 + c1);
      cs_sum += cs;
      ssim_sum += lum * cs;
    }
  const double n = static_cast<double>(mu1.rows() * mu1.cols());
  return {cs_sum / n, ssim_sum / n};
}

}  // namespace detail

inline int ms_ssim_max_scales(Index h, Index w, int window = 11) {
  int m = 0;
  Index side = std::min(h, w);
  while (m < 5 && side >= window) {
    ++m;
    side /= 2;
  }
  return m;
}

/// Multiscale SSIM of one slice pair. Negative terms are clamped at zero
/// before exponentiation (reference-weight convention).
inline double ms_ssim_slice(const MatrixX<double>& a, const MatrixX<double>& b,
                            MsSsimOptions opt = {}) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("ms_ssim: shape mismatch");
  const int max_scales = ms_ssim_max_scales(a.rows(), a.cols(), opt.window);
  const int scales = opt.scales == 0 ? max_scales : opt.scales;
  if (scales < 1 || scales > 5 || scales > max_scales)
    throw std::invalid_argument("ms_ssim: volume too small for scale pyramid");

  double wsum = 0.0;
  for (int j = 0; j < scales; ++j) wsum += detail::kMsSsimWeights[j];

  MatrixX<double> ca = a, cb = b;
  double result = 1.0;
  for (int j = 0; j < scales; ++j) {
    const auto means = detail::ssim_scale_means(ca, cb, opt);
    const double weight = detail::kMsSsimWeights[j] / wsum;
    const double term = (j == scales - 1) ? means.ssim : means.cs;
    result *= std::pow(std::max(term, 0.0), weight);
    if (j + 1 < scales) {
      ca = detail::downsample2(ca);
      cb = detail::downsample2(cb);
    }
  }
  return result;
}

template <typename Scalar>
double ms_ssim_masked(const Volume3<Scalar>& a, const Volume3<Scalar>& b,
                      const std::vector<Index>& z_indices, MsSsimOptions opt = {}) {
  if (!a.data.same_shape(b.data)) throw std::invalid_argument("ms_ssim: shape mismatch");
  if (z_indices.empty()) throw std::invalid_argument("ms_ssim: empty slice mask");
  double acc = 0.0;
  for (Index z : z_indices) {
    const MatrixX<double> sa = a.slice(z).template cast<double>();
    const MatrixX<double> sb = b.slice(z).template cast<double>();
    acc += ms_ssim_slice(sa, sb, opt);
  }
  return acc / static_cast<double>(z_indices.size());
}

template <typename Scalar>
double ms_ssim(const Volume3<Scalar>& a, const Volume3<Scalar>& b, MsSsimOptions opt = {}) {
  return ms_ssim_masked(a, b, all_indices(a.depth()), opt);
}

/// Voxelwise |a - b|.
template <typename Scalar>
Volume3<Scalar> error_map(const Volume3<Scalar>& a, const Volume3<Scalar>& b) {
  if (!a.data.same_shape(b.data)) throw std::invalid_argument("error_map: shape mismatch");
  Volume3<Scalar> out = a;
  out.data.array() = (a.data.array() - b.data.array()).abs();
  out.meta["kind"] = "error_map";
  return out;
}

// ---------------------------------------------------------------------------

enum class EvalRegion { UnobservedSlices, WholeVolume };

/// First/last-slices-in protocol: degrade each ground-truth volume by K, run
/// the method on the result, and score PSNR/SSIM on the slices the method had
/// to synthesize (or the whole volume when region says so). +inf PSNR
/// sentinels are excluded from the mean.
template <typename Scalar>
EvalReport evaluate_protocol(const std::vector<Volume3<Scalar>>& hr_gt,
                             const std::function<Volume3<Scalar>(const Volume3<Scalar>&)>& method,
                             int k, const std::string& method_tag,
                             EvalRegion region = EvalRegion::UnobservedSlices,
                             MsSsimOptions ssim_opt = {}) {
  if (hr_gt.empty()) throw std::invalid_argument("evaluate_protocol: empty dataset");
  EvalReport rep;
  rep.method = method_tag;
  std::vector<double> psnrs, ssims;
  for (std::size_t vi = 0; vi < hr_gt.size(); ++vi) {
    const auto& hr = hr_gt[vi];
    if ((hr.depth() - 1) % k != 0)
      throw std::invalid_argument("evaluate_protocol: (D-1) not divisible by K");
    const auto lr = degrade(hr, k);
    const auto est = method(lr);
    if (!est.data.same_shape(hr.data))
      throw std::invalid_argument("evaluate_protocol: method output grid mismatch");
    const auto mask = region == EvalRegion::UnobservedSlices ? unobserved_indices(hr.depth(), k)
                                                             : all_indices(hr.depth());
    EvalReport::PerVolume pv;
    auto it = hr.meta.find("id");
    pv.id = it != hr.meta.end() ? it->second : "vol_" + std::to_string(vi);
    pv.psnr = psnr_masked(est, hr, mask);
    pv.ssim = ms_ssim_masked(est, hr, mask, ssim_opt);
    rep.per_volume.push_back(pv);
    if (std::isinf(pv.psnr))
      ++rep.psnr_inf_excluded;
    else
      psnrs.push_back(pv.psnr);
    ssims.push_back(pv.ssim);
  }

  auto mean_sd = [](const std::vector<double>& v) -> std::pair<double, double> {
    if (v.empty()) return {std::numeric_limits<double>::infinity(), 0.0};
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - m) * (x - m);
    const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    return {m, sd};
  };
  std::tie(rep.psnr_mean, rep.psnr_sd) = mean_sd(psnrs);
  std::tie(rep.ssim_mean, rep.ssim_sd) = mean_sd(ssims);
  return rep;
}

/// Aligned-text table over several method reports (Table-style layout).
std::string format_report_table(const std::vector<EvalReport>& reports);

}  // namespace slicegap
