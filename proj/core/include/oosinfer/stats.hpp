#pragma once

#include <cstddef>
#include <span>

namespace oosinfer {

/// Standard normal CDF.
double normal_cdf(double x);

/// Inverse standard normal CDF. Rational approximation (Acklam) refined
/// with one Halley step; absolute error well below 1e-8 on (0,1).
double normal_quantile(double p);

/// Upper tail of the chi-squared distribution with one degree of freedom.
double chi_squared1_upper_tail(double q);

double mean(std::span<const double> v);
double variance(std::span<const double> v);  // population (1/n) variance
double sample_skewness(std::span<const double> v);
double sample_kurtosis(std::span<const double> v);

}  // namespace oosinfer
