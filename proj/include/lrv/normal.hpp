#pragma once

namespace lrv {

// Standard normal cumulative distribution function, via erfc.
// Absolute error below 1e-15 over the whole real line.
double normal_cdf(double x);

// Standard normal density.
double normal_pdf(double x);

// Inverse of the standard normal CDF on (0,1).
// Rational approximation (Acklam) refined by one Newton step against
// normal_cdf; absolute error well below 1e-9. Throws std::domain_error
// for arguments outside (0,1).
double inverse_normal_cdf(double u);

}  // namespace lrv
