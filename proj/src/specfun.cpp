#include "fblmimo/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fblmimo {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438187;

// Rational initial guess for the standard normal quantile (P. Acklam's
// approximation, |rel err| < 1.15e-9 on (0,1)), evaluated for the lower
// tail / central region p <= 0.5.
double norm_quantile_guess(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};

    if (p < 0.02425) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double gaussian_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Solve gaussian_q(x) = p for p in (0, 0.5]; returns x >= 0.
double q_inv_tail(double p) {
    // Acklam gives the CDF quantile; the tail quantile is its negation.
    double x = -norm_quantile_guess(p);
    // Two Newton steps on Q(x) - p.  Q is evaluated through erfc, which is
    // accurate in the far tail, so this converges to a few ulp.
    for (int i = 0; i < 2; ++i) {
        const double err = gaussian_q(x) - p;
        x += err / gaussian_pdf(x);
    }
    return x;
}

}  // namespace

Probability::Probability(double p) : p_(p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::domain_error("probability must lie strictly inside (0,1), got " +
                                std::to_string(p));
    }
}

double gaussian_q(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("gaussian_q: argument must be finite");
    }
    return 0.5 * std::erfc(x / kSqrt2);
}

double gaussian_q_inv(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::domain_error("gaussian_q_inv: argument must lie strictly inside (0,1)");
    }
    if (p == 0.5) return 0.0;
    // Reduce to the tail half so antisymmetry holds by construction.
    return p > 0.5 ? -q_inv_tail(1.0 - p) : q_inv_tail(p);
}

double gaussian_q_inv(Probability p) { return gaussian_q_inv(p.value()); }

}  // namespace fblmimo
