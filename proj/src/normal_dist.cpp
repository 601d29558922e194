#include "latentgp/normal_dist.hpp"

#include <cmath>
#include <limits>

#include "latentgp/common.hpp"

namespace latentgp {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kInvSqrtPi = 0.5641895835477563;
constexpr double kLogSqrt2Pi = 0.9189385332046727;

// Cody's rational Chebyshev coefficients for erf on |x| <= 0.46875.
constexpr double ca[5] = {3.16112374387056560e+00, 1.13864154151050156e+02,
                          3.77485237685302021e+02, 3.20937758913846947e+03,
                          1.85777706184603153e-01};
constexpr double cb[4] = {2.36012909523441209e+01, 2.44024637934444173e+02,
                          1.28261652607737228e+03, 2.84423683343917062e+03};
// erfc on 0.46875 < x <= 4.
constexpr double cc[9] = {5.64188496988670089e-01, 8.88314979438837594e+00,
                          6.61191906371416295e+01, 2.98635138197400131e+02,
                          8.81952221241769090e+02, 1.71204761263407058e+03,
                          2.05107837782607147e+03, 1.23033935479799725e+03,
                          2.15311535474403846e-08};
constexpr double cd[8] = {1.57449261107098347e+01, 1.17693950891312499e+02,
                          5.37181101862009858e+02, 1.62138957456669019e+03,
                          3.29079923573345963e+03, 4.36261909014324716e+03,
                          3.43936767414372164e+03, 1.23033935480374942e+03};
// erfc on x > 4 (scaled by x*exp(x^2)).
constexpr double cp[6] = {3.05326634961232344e-01, 3.60344899949804439e-01,
                          1.25781726111229246e-01, 1.60837851487422766e-02,
                          6.58749161529837803e-04, 1.63153871373020978e-02};
constexpr double cq[5] = {2.56852019228982242e+00, 1.87295284992346047e+00,
                          5.27905102951428412e-01, 6.05183413124413191e-02,
                          2.33520497626869185e-03};

double erf_small(double x) {
    const double z = x * x;
    double num = ca[4] * z;
    double den = z;
    for (int i = 0; i < 3; ++i) {
        num = (num + ca[i]) * z;
        den = (den + cb[i]) * z;
    }
    return x * (num + ca[3]) / (den + cb[3]);
}

double erfc_mid(double x) {
    double num = cc[8] * x;
    double den = x;
    for (int i = 0; i < 7; ++i) {
        num = (num + cc[i]) * x;
        den = (den + cd[i]) * x;
    }
    const double frac = (num + cc[7]) / (den + cd[7]);
    // exp(-x^2) split to limit rounding in the exponent.
    const double xh = std::floor(x * 16.0) / 16.0;
    const double del = (x - xh) * (x + xh);
    return std::exp(-xh * xh) * std::exp(-del) * frac;
}

double erfc_large(double x) {
    const double z = 1.0 / (x * x);
    double num = cp[5] * z;
    double den = z;
    for (int i = 0; i < 4; ++i) {
        num = (num + cp[i]) * z;
        den = (den + cq[i]) * z;
    }
    double frac = z * (num + cp[4]) / (den + cq[4]);
    frac = (kInvSqrtPi - frac) / x;
    const double xh = std::floor(x * 16.0) / 16.0;
    const double del = (x - xh) * (x + xh);
    return std::exp(-xh * xh) * std::exp(-del) * frac;
}

// erfc(x) for x >= 0.
double erfc_pos(double x) {
    if (x <= 0.46875) return 1.0 - erf_small(x);
    if (x <= 4.0) return erfc_mid(x);
    if (x >= 26.6) return 0.0;  // underflow of exp(-x^2)
    return erfc_large(x);
}

// Acklam's inverse normal cdf coefficients.
constexpr double ia[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                          -2.759285104469687e+02, 1.383577518672690e+02,
                          -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double ib[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                          -1.556989798598866e+02, 6.680131188771972e+01,
                          -1.328068155288572e+01};
constexpr double ic[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                          -2.400758277161838e+00, -2.549732539343734e+00,
                          4.374664141464968e+00,  2.938163982698783e+00};
constexpr double id[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                          2.445134137142996e+00, 3.754408661907416e+00};

constexpr double kPLow = 0.02425;

double acklam_tail(double q) {
    // q = sqrt(-2 log p); returns the (negative) lower-tail quantile.
    const double num = ((((ic[0] * q + ic[1]) * q + ic[2]) * q + ic[3]) * q + ic[4]) * q + ic[5];
    const double den = (((id[0] * q + id[1]) * q + id[2]) * q + id[3]) * q + 1.0;
    return num / den;
}

double acklam_central(double p) {
    const double q = p - 0.5;
    const double r = q * q;
    const double num = ((((ia[0] * r + ia[1]) * r + ia[2]) * r + ia[3]) * r + ia[4]) * r + ia[5];
    const double den = ((((ib[0] * r + ib[1]) * r + ib[2]) * r + ib[3]) * r + ib[4]) * r + 1.0;
    return q * num / den;
}

// One Halley step against the high-precision cdf, done in log space so it
// stays usable deep in the tail.
double refine_log(double x, double logp) {
    const double logc = log_std_normal_cdf(x);
    const double e = logc - logp;
    if (!std::isfinite(e)) return x;
    // d/dx log Phi = pdf/Phi; Newton on log scale.
    const double hazard = std::exp(log_std_normal_pdf(x) - logc);
    if (!(hazard > 0.0) || !std::isfinite(hazard)) return x;
    const double step = e / hazard;
    const double halley_den = 1.0 + 0.5 * step * (x + hazard);
    return halley_den > 0.5 ? x - step / halley_den : x - step;
}

}  // namespace

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double log_std_normal_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

double std_normal_cdf(double x) {
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    const double t = -x / kSqrt2;
    if (t >= 0.0) return 0.5 * erfc_pos(t);
    return 1.0 - 0.5 * erfc_pos(-t);
}

double log_std_normal_cdf(double x) {
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x >= 8.0) {
        // Phi(x) = 1 - Phi(-x) with Phi(-x) tiny.
        return std::log1p(-std_normal_cdf(-x));
    }
    if (x >= -37.0) {
        return std::log(std_normal_cdf(x));  // cdf >= ~6e-300, still a normal double
    }
    // Mills-ratio asymptotic expansion for the deep lower tail.
    const double z = -x;
    const double zi = 1.0 / (z * z);
    const double series = 1.0 + zi * (-1.0 + zi * (3.0 + zi * (-15.0 + zi * 105.0)));
    return log_std_normal_pdf(z) - std::log(z) + std::log(series);
}

double inv_std_normal_cdf(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw ArgumentError("inv_std_normal_cdf: p must lie in (0,1)");
    }
    if (p < kPLow) return inv_std_normal_cdf_log(std::log(p));
    if (p > 1.0 - kPLow) return -inv_std_normal_cdf_log(std::log1p(-p));
    const double x = acklam_central(p);
    return refine_log(x, std::log(p));
}

double inv_std_normal_cdf_log(double logp) {
    if (!(logp < 0.0)) {
        if (logp == 0.0) return std::numeric_limits<double>::infinity();
        throw ArgumentError("inv_std_normal_cdf_log: logp must be negative");
    }
    if (logp == -std::numeric_limits<double>::infinity()) {
        return -std::numeric_limits<double>::infinity();
    }
    const double logplow = std::log(kPLow);
    if (logp > logplow) {
        return refine_log(acklam_central(std::exp(logp)), logp);
    }
    const double q = std::sqrt(-2.0 * logp);
    return refine_log(acklam_tail(q), logp);
}

}  // namespace latentgp
