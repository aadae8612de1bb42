#pragma once

#include <stdexcept>

namespace fblmimo {

/// Probability constrained to the open interval (0,1).  The endpoints are
/// rejected rather than mapped to +-inf: the blocklength solver downstream
/// must never see an infinite tail quantile.
class Probability {
public:
    explicit Probability(double p);
    double value() const noexcept { return p_; }

private:
    double p_;
};

/// Upper tail of the standard normal: integral of the unit Gaussian density
/// over [x, inf).  Strictly decreasing; gaussian_q(0) == 0.5.
/// Throws std::domain_error for non-finite x.
double gaussian_q(double x);

/// Inverse of gaussian_q on (0,1).  Positive iff p < 0.5.
/// Round-trip accuracy: |gaussian_q(gaussian_q_inv(p)) - p| stays within a
/// few ulp of max(p, 1-p) across the whole open interval.
double gaussian_q_inv(double p);
double gaussian_q_inv(Probability p);

}  // namespace fblmimo
