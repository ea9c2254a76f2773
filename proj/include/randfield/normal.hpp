#pragma once

namespace randfield {

double normal_pdf(double x);

/// Standard normal CDF via erfc; absolute error below 1e-15.
double normal_cdf(double x);
double normal_cdf(double x, double mean, double var);

/// Standard normal quantile: Wichura's AS241 rational approximation
/// followed by one Newton step on the CDF. Absolute error well under 1e-10.
double normal_quantile(double p);

}  // namespace randfield
