#pragma once

#include <optional>
#include <string>

#include "fblmimo/randmat.hpp"

namespace fblmimo {

enum class DispersionMethod { closed_form, high_snr, monte_carlo };

/// Mean (and optionally variance) of the channel dispersion V(H), together
/// with how it was obtained and whether the value is inside its validity
/// region.  V(H) lies in [0, dof) pointwise, so a closed-form mean outside
/// that range is reported as-is but flagged invalid -- never clamped.
struct DispersionStats {
    double mean = 0.0;
    std::optional<double> variance;
    DispersionMethod method = DispersionMethod::closed_form;
    bool valid = true;
    std::string validity_note;
};

/// Calibration constants for the cross-term corrections of the dispersion
/// variance.  Values exist only at the 5 dB and 7 dB anchors; the correction
/// has no known functional form in rho.
struct EmendationParams {
    double psi;
    double xi;
    double snr_db_anchor;
};

/// The four terms of the dispersion second-moment expansion,
/// assembled as g1 - 2*g2 + g3 + g4.
struct VarianceTerms {
    double g1 = 0.0, g2 = 0.0, g3 = 0.0, g4 = 0.0;
    double assembled() const noexcept { return g1 - 2.0 * g2 + g3 + g4; }
};

struct DispersionVariance {
    DispersionStats stats;
    VarianceTerms terms;
    double assembled_second_moment = 0.0;
    double variance_estimate = 0.0;  // assembled - mean(S)^2, kept even when negative
};

/// E{ sum_i 1/lambda_i } for the Gram spectrum:
///   rx/(tx-rx) for tx > rx, tx/(rx-tx) for tx < rx.
/// The mean diverges for square arrays; with allow_square_convention the
/// one-extra-antenna convention tx-1 is returned instead.
double inv_eigen_sum_mean(const AntennaConfig& cfg, bool allow_square_convention = false);

/// Closed-form mean of V(H).  Undefined for square arrays (validity_error;
/// use the Monte-Carlo estimator there).
DispersionStats dispersion_mean(const AntennaConfig& cfg, double rho);

/// High-SNR form: dof - (tx^2/rho^2) * tx*rx / (d^3 - d), d = |tx - rx|.
/// Requires |tx - rx| >= 2 (the denominator vanishes otherwise).
DispersionStats dispersion_mean_highsnr(const AntennaConfig& cfg, double rho);

/// Closed-form variance of V(H) via the four-term expansion; requires
/// tx > rx + 1.  A negative assembled value is returned flagged invalid
/// (the emendation constants do not apply at that rho), with all terms
/// attached for inspection.
DispersionVariance dispersion_variance(const AntennaConfig& cfg, double rho,
                                       const EmendationParams& em);

/// Calibrated (psi, xi) at the 5 dB / 7 dB anchors, nullopt elsewhere.
std::optional<EmendationParams> default_emendation(double snr_db);

struct BoundCheckReport {
    bool pass = false;
    double max_ratio = 0.0;
    int argmax_tx = 0;
    int argmax_dof = 0;
};

/// Exhaustive check that tx^3 / ((tx-m)^3 - (tx-m)) < 13 for every even
/// tx in [4, max_tx] and every m in [1, tx/2] with positive denominator.
/// This is what keeps the high-SNR correction term below 1 once rho^2 > 13.
BoundCheckReport highsnr_correction_bound_check(int max_tx);

}  // namespace fblmimo
