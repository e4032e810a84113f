#include "pic/interpolation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "pic/errors.hpp"

namespace pic {

PiecewiseCubic::PiecewiseCubic(std::vector<double> knots,
                               std::vector<std::array<double, 4>> coeffs)
    : knots_(std::move(knots)), coeffs_(std::move(coeffs)) {
  assert(knots_.size() >= 2 && coeffs_.size() == knots_.size() - 1);
}

double PiecewiseCubic::eval(double x) const {
  if (x < knots_.front() || x > knots_.back()) {
    throw OutOfRange("interpolation query outside knot span");
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  size_t i = size_t(std::distance(knots_.begin(), it));
  i = (i == 0) ? 0 : std::min(i - 1, coeffs_.size() - 1);
  double t = x - knots_[i];
  const auto& c = coeffs_[i];
  return c[0] + t * (c[1] + t * (c[2] + t * c[3]));
}

namespace {

void check_knots(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw BadParameter("interpolation needs >= 2 matched samples");
  }
  for (size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) {
      throw BadParameter("interpolation abscissae must strictly increase");
    }
  }
}

// Hermite interval coefficients from endpoint values and derivatives.
std::array<double, 4> hermite_coeffs(double h, double y0, double y1, double d0,
                                     double d1) {
  double slope = (y1 - y0) / h;
  return {y0, d0, (3.0 * slope - 2.0 * d0 - d1) / h,
          (d0 + d1 - 2.0 * slope) / (h * h)};
}

}  // namespace

PiecewiseCubic natural_cubic_spline(std::span<const double> x,
                                    std::span<const double> y) {
  check_knots(x, y);
  size_t n = x.size();
  std::vector<double> h(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) h[i] = x[i + 1] - x[i];

  // Second derivatives with natural end conditions, Thomas solve.
  std::vector<double> m(n, 0.0);
  if (n > 2) {
    std::vector<double> diag(n - 2), rhs(n - 2), upper(n - 2, 0.0);
    for (size_t i = 1; i + 1 < n; ++i) {
      diag[i - 1] = (h[i - 1] + h[i]) / 3.0;
      rhs[i - 1] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
      if (i + 2 < n) upper[i - 1] = h[i] / 6.0;
    }
    for (size_t i = 1; i < diag.size(); ++i) {
      double lower = h[i] / 6.0;  // sub-diagonal entry for row i
      double w = lower / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    for (size_t i = diag.size(); i-- > 0;) {
      double acc = rhs[i];
      if (i + 1 < diag.size()) acc -= upper[i] * m[i + 2];
      m[i + 1] = acc / diag[i];
    }
  }

  std::vector<std::array<double, 4>> coeffs(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    double b = (y[i + 1] - y[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
    coeffs[i] = {y[i], b, m[i] / 2.0, (m[i + 1] - m[i]) / (6.0 * h[i])};
  }
  return PiecewiseCubic(std::vector<double>(x.begin(), x.end()), std::move(coeffs));
}

PiecewiseCubic monotone_pchip(std::span<const double> x,
                              std::span<const double> y) {
  check_knots(x, y);
  size_t n = x.size();
  std::vector<double> h(n - 1), slope(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    slope[i] = (y[i + 1] - y[i]) / h[i];
  }

  std::vector<double> d(n, 0.0);
  if (n == 2) {
    d[0] = d[1] = slope[0];
  } else {
    for (size_t i = 1; i + 1 < n; ++i) {
      if (slope[i - 1] * slope[i] <= 0.0) {
        d[i] = 0.0;
      } else {
        double w1 = 2.0 * h[i] + h[i - 1];
        double w2 = h[i] + 2.0 * h[i - 1];
        d[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
      }
    }
    auto edge = [](double h0, double h1, double s0, double s1) {
      double dd = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
      if (dd * s0 <= 0.0) return 0.0;
      if (s0 * s1 < 0.0 && std::abs(dd) > 3.0 * std::abs(s0)) return 3.0 * s0;
      return dd;
    };
    d[0] = edge(h[0], h[1], slope[0], slope[1]);
    d[n - 1] = edge(h[n - 2], h[n - 3], slope[n - 2], slope[n - 3]);
  }

  std::vector<std::array<double, 4>> coeffs(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    coeffs[i] = hermite_coeffs(h[i], y[i], y[i + 1], d[i], d[i + 1]);
  }
  return PiecewiseCubic(std::vector<double>(x.begin(), x.end()), std::move(coeffs));
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double& fm) {
  double m = 0.5 * (a + b);
  fm = f(m);
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double fa, double b, double fb, double m, double fm,
                       double whole, double eps, int depth) {
  double fml, fmr;
  double left = simpson(f, a, fa, m, fm, fml);
  double right = simpson(f, m, fm, b, fb, fmr);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, fa, m, fm, 0.5 * (a + m), fml, left, 0.5 * eps,
                         depth - 1) +
         simpson_recurse(f, m, fm, b, fb, 0.5 * (m + b), fmr, right, 0.5 * eps,
                         depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm;
  double whole = simpson(f, a, fa, b, fb, fm);
  double eps = rel_tol * std::max(std::abs(whole), 1e-12);
  return simpson_recurse(f, a, fa, b, fb, 0.5 * (a + b), fm, whole, eps, 48);
}

double integrate(const PiecewiseCubic& f, double a, double b, double rel_tol) {
  if (a > b) return -integrate(f, b, a, rel_tol);
  if (a < f.min_x() || b > f.max_x()) {
    throw OutOfRange("integration bounds outside knot span");
  }
  auto fn = [&f](double x) { return f.eval(x); };
  // Cut at the knots so the quadrature only ever sees one cubic per call,
  // for which Simpson is exact.
  std::vector<double> cuts{a};
  for (double k : f.knots()) {
    if (k > a && k < b) cuts.push_back(k);
  }
  cuts.push_back(b);
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += adaptive_simpson(fn, cuts[i], cuts[i + 1], rel_tol);
  }
  return total;
}

}  // namespace pic
