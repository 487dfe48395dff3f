#pragma once

namespace mobo {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kLog2Pi = 1.83787706640934548356;
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Standard normal density.
double norm_pdf(double x);
double log_norm_pdf(double x);

/// Standard normal CDF via erfc.
double norm_cdf(double x);

/// log(Phi(x)), stable in the deep lower tail where erfc underflows.
double log_norm_cdf(double x);

/// Inverse standard normal CDF (Wichura's PPND16 rational approximation).
/// Requires p in (0,1).
double norm_quantile(double p);

}  // namespace mobo
