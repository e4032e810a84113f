#include "pic/bd_metrics.hpp"

#include <cmath>
#include <vector>

#include "pic/interpolation.hpp"

namespace pic {

namespace {

constexpr double kQuadratureRelTol = 1e-8;

PiecewiseCubic fit(std::span<const double> x, std::span<const double> y,
                   Interp interp) {
  return interp == Interp::CubicSpline ? natural_cubic_spline(x, y)
                                       : monotone_pchip(x, y);
}

// log10(bpp) as a function of psnr.
PiecewiseCubic fit_log_rate(const RDCurve& curve, Interp interp) {
  std::vector<double> x, y;
  for (const RDPoint& p : curve.points()) {
    x.push_back(p.psnr);
    y.push_back(std::log10(p.bpp));
  }
  return fit(x, y, interp);
}

// psnr as a function of log10(bpp).
PiecewiseCubic fit_psnr(const RDCurve& curve, Interp interp) {
  std::vector<double> x, y;
  for (const RDPoint& p : curve.points()) {
    x.push_back(std::log10(p.bpp));
    y.push_back(p.psnr);
  }
  return fit(x, y, interp);
}

std::pair<double, double> overlap(double a_lo, double a_hi, double b_lo,
                                  double b_hi) {
  double lo = std::max(a_lo, b_lo);
  double hi = std::min(a_hi, b_hi);
  if (!(hi > lo)) {
    throw NoOverlap("curves share no quality range");
  }
  return {lo, hi};
}

}  // namespace

double bd_rate(const RDCurve& anchor, const RDCurve& test, Interp interp,
               std::optional<std::pair<double, double>> psnr_window) {
  PiecewiseCubic fa = fit_log_rate(anchor, interp);
  PiecewiseCubic ft = fit_log_rate(test, interp);
  auto [lo, hi] =
      overlap(anchor.min_psnr(), anchor.max_psnr(), test.min_psnr(), test.max_psnr());
  if (psnr_window) {
    std::tie(lo, hi) = overlap(lo, hi, psnr_window->first, psnr_window->second);
  }
  double ia = integrate(fa, lo, hi, kQuadratureRelTol);
  double it = integrate(ft, lo, hi, kQuadratureRelTol);
  double mean_log_gap = (it - ia) / (hi - lo);
  return (std::pow(10.0, mean_log_gap) - 1.0) * 100.0;
}

double bd_psnr(const RDCurve& anchor, const RDCurve& test, Interp interp) {
  PiecewiseCubic fa = fit_psnr(anchor, interp);
  PiecewiseCubic ft = fit_psnr(test, interp);
  auto [lo, hi] = overlap(fa.min_x(), fa.max_x(), ft.min_x(), ft.max_x());
  double ia = integrate(fa, lo, hi, kQuadratureRelTol);
  double it = integrate(ft, lo, hi, kQuadratureRelTol);
  return (it - ia) / (hi - lo);
}

double interpolate_rate_at(const RDCurve& curve, double psnr, Interp interp) {
  if (psnr < curve.min_psnr() || psnr > curve.max_psnr()) {
    throw OutOfRange("psnr outside the curve span");
  }
  return std::pow(10.0, fit_log_rate(curve, interp).eval(psnr));
}

}  // namespace pic
