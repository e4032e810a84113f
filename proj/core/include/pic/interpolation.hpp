// Piecewise-cubic interpolants and adaptive Simpson quadrature used by the
// BD-rate statistics.
#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace pic {

// c0 + c1*t + c2*t^2 + c3*t^3 per interval, t = X - x[i]. Knots are strictly
// increasing; evaluation outside the knot span is the caller's error.
class PiecewiseCubic {
public:
  PiecewiseCubic(std::vector<double> knots,
                 std::vector<std::array<double, 4>> coeffs);

  double eval(double x) const;
  double min_x() const { return knots_.front(); }
  double max_x() const { return knots_.back(); }
  const std::vector<double>& knots() const { return knots_; }

private:
  std::vector<double> knots_;
  std::vector<std::array<double, 4>> coeffs_;
};

// Classic natural cubic spline (zero second derivative at the ends).
PiecewiseCubic natural_cubic_spline(std::span<const double> x,
                                    std::span<const double> y);

// Monotone piecewise cubic (Fritsch-Carlson weighted-harmonic slopes with
// one-sided three-point end derivatives). Preserves monotonicity of the data.
PiecewiseCubic monotone_pchip(std::span<const double> x,
                              std::span<const double> y);

// Adaptive Simpson quadrature of f over [a, b] at the given relative
// tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol = 1e-8);

// Integrates a piecewise cubic over [a, b] inside its knot span, running the
// quadrature segment by segment so each call sees a single polynomial.
double integrate(const PiecewiseCubic& f, double a, double b,
                 double rel_tol = 1e-8);

}  // namespace pic
