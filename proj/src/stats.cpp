#include "slicegap/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace slicegap {

namespace {

// Lentz's continued fraction for the regularized incomplete beta.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16, kFpmin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpmin) d = kFpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpmin) d = kFpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpmin) c = kFpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpmin) d = kFpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpmin) c = kFpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, int dof) {
  if (dof < 1) throw std::invalid_argument("student_t_cdf: dof must be >= 1");
  const double v = static_cast<double>(dof);
  const double x = v / (v + t * t);
  const double tail = 0.5 * incomplete_beta(v / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

TTestResult paired_t_test(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("paired_t_test: length mismatch");
  const auto n = xs.size();
  if (n < 2) throw std::invalid_argument("paired_t_test: need at least 2 pairs");

  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += xs[i] - ys[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = xs[i] - ys[i] - mean;
    var += d * d;
  }
  var /= static_cast<double>(n - 1);

  TTestResult r;
  r.dof = static_cast<int>(n) - 1;
  if (var == 0.0) {
    r.degenerate = true;
    r.t = mean == 0.0 ? 0.0
                      : std::copysign(std::numeric_limits<double>::infinity(), mean);
    r.p = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.t = mean / std::sqrt(var / static_cast<double>(n));
  r.p = 2.0 * (1.0 - student_t_cdf(std::fabs(r.t), r.dof));
  return r;
}

std::string format_report_table(const std::vector<EvalReport>& reports) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof(line), "%-28s | %10s %8s | %10s %8s\n", "Method", "PSNR mean", "SD",
                "SSIM mean", "SD");
  os << line;
  os << std::string(74, '-') << "\n";
  for (const auto& r : reports) {
    char psnr_mean[32];
    if (std::isinf(r.psnr_mean))
      std::snprintf(psnr_mean, sizeof(psnr_mean), "%s", "inf");
    else
      std::snprintf(psnr_mean, sizeof(psnr_mean), "%.3f", r.psnr_mean);
    std::snprintf(line, sizeof(line), "%-28s | %10s %8.3f | %10.3f %8.3f\n", r.method.c_str(),
                  psnr_mean, r.psnr_sd, r.ssim_mean, r.ssim_sd);
    os << line;
  }
  return os.str();
}

}  // namespace slicegap
