// Bjontegaard-delta statistics between two RD curves.
#pragma once

#include <optional>
#include <utility>

#include "pic/rd_curve.hpp"

namespace pic {

enum class Interp { CubicSpline, MonotonePchip };

// Average percentage rate difference of `test` against `anchor` at equal
// quality: fits log10(bpp) as a function of psnr per curve, integrates both
// over the common psnr range, and maps the mean log-rate gap back to percent.
// A negative result means `test` needs fewer bits. When `psnr_window` is
// given the integration range is its intersection with the natural overlap.
double bd_rate(const RDCurve& anchor, const RDCurve& test,
               Interp interp = Interp::MonotonePchip,
               std::optional<std::pair<double, double>> psnr_window = {});

// Average vertical psnr gap over the common log10(bpp) range.
double bd_psnr(const RDCurve& anchor, const RDCurve& test,
               Interp interp = Interp::MonotonePchip);

// Rate (bpp) the curve reaches at the given quality, from the fitted
// log-rate interpolant.
double interpolate_rate_at(const RDCurve& curve, double psnr,
                           Interp interp = Interp::MonotonePchip);

}  // namespace pic
