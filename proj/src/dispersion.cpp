#include "fblmimo/dispersion.hpp"

#include <cmath>
#include <string>

namespace fblmimo {

namespace {

void require_rho(double rho) {
    if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
}

void check_range(DispersionStats& st, double dof) {
    if (!(st.mean >= 0.0 && st.mean <= dof)) {
        st.valid = false;
        st.validity_note = "mean " + std::to_string(st.mean) + " outside [0, dof=" +
                           std::to_string(dof) + "]; closed form out of its validity region";
    }
}

}  // namespace

double inv_eigen_sum_mean(const AntennaConfig& cfg, bool allow_square_convention) {
    if (!cfg.valid()) throw std::domain_error("antenna counts must be >= 1");
    const double M = cfg.tx, N = cfg.rx;
    if (cfg.tx > cfg.rx) return N / (M - N);
    if (cfg.tx < cfg.rx) return M / (N - M);
    if (!allow_square_convention) {
        throw validity_error(
            "mean of the inverse-eigenvalue sum diverges for square arrays (tx == rx); "
            "opt into the one-extra-antenna convention or use Monte-Carlo");
    }
    // One-extra-antenna convention; heavy-tailed, use with care.
    return M - 1.0;
}

DispersionStats dispersion_mean(const AntennaConfig& cfg, double rho) {
    if (!cfg.valid()) throw std::domain_error("antenna counts must be >= 1");
    require_rho(rho);
    if (cfg.tx == cfg.rx) {
        throw validity_error(
            "closed-form dispersion mean is undefined for square arrays (tx == rx): "
            "use the Monte-Carlo estimator");
    }
    const double M = cfg.tx, N = cfg.rx;
    DispersionStats st;
    st.method = DispersionMethod::closed_form;
    if (N > M) {
        const double root = std::hypot(rho * N * N - rho * M * N + 2.0 * M * N,
                                       std::sqrt(8.0 * rho * N * N * M * M));
        const double inner =
            rho * (N * M - N * N) / (4.0 * M * M) - N / (2.0 * M) + root / (4.0 * M * M);
        st.mean = M - M * M / (2.0 * rho * (N - M)) + M * M / (2.0 * rho * N) * inner;
    } else {
        const double root = std::hypot(rho * M * M - rho * M * N + 2.0 * M * N,
                                       std::sqrt(8.0 * rho * N * N * M * M));
        const double inner =
            rho * (N * M - M * M) / (4.0 * N * N) - M / (2.0 * N) + root / (4.0 * N * N);
        st.mean = N - M * N / (2.0 * rho * (M - N)) + N / (2.0 * rho) * inner;
    }
    check_range(st, cfg.dof());
    return st;
}

DispersionStats dispersion_mean_highsnr(const AntennaConfig& cfg, double rho) {
    if (!cfg.valid()) throw std::domain_error("antenna counts must be >= 1");
    require_rho(rho);
    const double d = std::abs(cfg.tx - cfg.rx);
    if (d < 2.0) {
        throw validity_error(
            "high-SNR dispersion mean needs |tx - rx| >= 2 (cubic denominator vanishes)");
    }
    const double M = cfg.tx, N = cfg.rx;
    DispersionStats st;
    st.method = DispersionMethod::high_snr;
    st.mean = cfg.dof() - (M * M) / (rho * rho) * (N * M) / (d * d * d - d);
    check_range(st, cfg.dof());
    return st;
}

DispersionVariance dispersion_variance(const AntennaConfig& cfg, double rho,
                                       const EmendationParams& em) {
    if (!cfg.valid()) throw std::domain_error("antenna counts must be >= 1");
    require_rho(rho);
    if (cfg.tx <= cfg.rx + 1) {
        throw validity_error(
            "closed-form dispersion variance needs tx > rx + 1; use Monte-Carlo");
    }
    if (!(em.psi > 0.0) || !(em.xi > 0.0)) {
        throw std::domain_error("emendation parameters must be positive");
    }
    const double M = cfg.tx, N = cfg.rx;
    const double d = M - N;
    const double pref = (M / (2.0 * rho)) * (M / (2.0 * rho));

    DispersionVariance out;
    out.terms.g1 = pref * M * N / (d * d * d - d);
    out.terms.g3 = pref * N * (N - 1.0) / (d * (d + 1.0));

    // shared root of the two cross terms
    const double root = std::hypot(M - N + 2.0 * N / rho, std::sqrt(8.0 * N * N / rho));
    const double zeta = 1.0 / (em.psi * N);
    out.terms.g2 = zeta * pref * (N * N / d) *
                   ((N - M) / (4.0 * rho * N) - 0.5 + rho * root / (4.0 * N));
    const double g4_inner = M * (N - M) / (8.0 * N) - M / (4.0 * rho) + M * root / (8.0 * N);
    out.terms.g4 = em.xi * g4_inner * g4_inner;

    out.assembled_second_moment = out.terms.assembled();

    DispersionStats mean_stats = dispersion_mean(cfg, rho);
    const double s_mean = cfg.dof() - mean_stats.mean;  // mean of the subtracted sum
    out.variance_estimate = out.assembled_second_moment - s_mean * s_mean;

    out.stats.method = DispersionMethod::closed_form;
    out.stats.mean = mean_stats.mean;
    out.stats.valid = mean_stats.valid;
    out.stats.validity_note = mean_stats.validity_note;
    if (out.assembled_second_moment < 0.0 || out.variance_estimate < 0.0) {
        out.stats.variance.reset();
        out.stats.valid = false;
        out.stats.validity_note =
            "assembled variance " + std::to_string(out.variance_estimate) +
            " is negative: the emendation constants do not apply at rho=" + std::to_string(rho);
    } else {
        out.stats.variance = out.variance_estimate;
    }
    return out;
}

std::optional<EmendationParams> default_emendation(double snr_db) {
    if (std::abs(snr_db - 5.0) < 1e-9) return EmendationParams{1.41, 0.5, 5.0};
    if (std::abs(snr_db - 7.0) < 1e-9) return EmendationParams{1.29, 0.6, 7.0};
    return std::nullopt;  // no functional form in rho; caller must supply values
}

BoundCheckReport highsnr_correction_bound_check(int max_tx) {
    if (max_tx < 4 || max_tx % 2 != 0) {
        throw std::domain_error("bound check wants an even max_tx >= 4");
    }
    BoundCheckReport rep;
    for (int M = 4; M <= max_tx; M += 2) {
        for (int m = 1; m <= M / 2; ++m) {
            const double d = M - m;
            const double denom = d * d * d - d;
            if (denom <= 0.0) continue;
            const double ratio = static_cast<double>(M) * M * M / denom;
            if (ratio > rep.max_ratio) {
                rep.max_ratio = ratio;
                rep.argmax_tx = M;
                rep.argmax_dof = m;
            }
        }
    }
    rep.pass = rep.max_ratio < 13.0;
    return rep;
}

}  // namespace fblmimo
