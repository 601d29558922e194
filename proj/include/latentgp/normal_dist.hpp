#pragma once

namespace latentgp {

// Standard normal density, cdf and inverse cdf.
//
// The cdf uses Cody's rational Chebyshev approximation to erf/erfc, the
// inverse uses Acklam's rational approximation with one Halley refinement.
// Both are accurate to better than 1e-12 absolute and, unlike the libm
// functions, give the same bits on every platform, which keeps exported
// artifacts comparable across machines. Log-scale variants cover the far
// tails where the plain cdf underflows.

double std_normal_pdf(double x);
double log_std_normal_pdf(double x);

// Phi(x), full double range; underflows to 0 below roughly x = -38.
double std_normal_cdf(double x);

// log Phi(x); accurate for x as small as -1e9 (asymptotic tail expansion).
double log_std_normal_cdf(double x);

// Phi^-1(p) for p in (0,1).
double inv_std_normal_cdf(double p);

// Phi^-1(exp(logp)) for logp < 0; stays accurate when exp(logp) underflows.
double inv_std_normal_cdf_log(double logp);

}  // namespace latentgp
