#pragma once

#include <cstdint>

#include "fblmimo/dispersion.hpp"
#include "fblmimo/randmat.hpp"
#include "fblmimo/specfun.hpp"

namespace fblmimo {

/// Operating point of a finite-blocklength link: linear SNR, target block
/// error probability, and blocklength in channel uses.
struct LinkParams {
    double rho;
    Probability epsilon;
    std::int64_t n;
};

/// Per-realization quantities for one channel draw.
struct RealizationMetrics {
    double capacity = 0.0;    // bits per channel use
    double dispersion = 0.0;  // in [0, dof)
    double rate_star = 0.0;   // normal approximation, O(log n / n) term omitted
};

enum class RateMethod { normal_approx, high_snr };

struct RateBound {
    double r_bar = 0.0;       // bits per channel use
    double normalized = 0.0;  // r_bar / dof
    RateMethod method = RateMethod::normal_approx;
};

/// Shannon capacity conditioned on the draw: sum_j log2(1 + rho*lambda_j/tx).
/// All rates in this library are base-2 (bits per channel use).
double capacity_of(const EigenSample& eig, const AntennaConfig& cfg, double rho);

/// Channel dispersion conditioned on the draw:
///   V = dof - sum_j 1/(1 + rho*lambda_j/tx)^2, in [0, dof).
double dispersion_of(const EigenSample& eig, const AntennaConfig& cfg, double rho);

/// Normal approximation of the maximal achievable rate at blocklength n:
///   C - sqrt(V/n) * Qinv(epsilon).
/// The omitted O(log n / n) remainder makes this an approximation, not a
/// guaranteed bound.
double rate_star(double capacity, double dispersion, const LinkParams& link);

RealizationMetrics realization_metrics(const EigenSample& eig, const AntennaConfig& cfg,
                                       const LinkParams& link);

/// Average-rate bound assembled from a dispersion mean and a mean capacity
/// (Monte-Carlo or high-SNR): cap_mean - sqrt(disp.mean/n) * Qinv(epsilon).
RateBound avg_rate_bound(const AntennaConfig& cfg, const LinkParams& link,
                         const DispersionStats& disp, double cap_mean);

/// High-SNR bound: dof*log2(1+rho) - sqrt(dof/n) * Qinv(epsilon); uses the
/// large-rho limits E[V] ~ dof and E[C] ~ dof*log2(1+rho).  The normalized
/// form depends on dof and n only through their product.
RateBound highsnr_rate_bound(const AntennaConfig& cfg, const LinkParams& link);

struct BlocklengthResult {
    std::int64_t n = 0;    // integer ceiling
    double n_real = 0.0;   // real-valued threshold
};

/// Smallest blocklength n with n >= m*Qinv(eps)^2 / (m*log2(1+rho) - r_bar)^2.
/// Requires epsilon < 0.5 and r_bar strictly below m*log2(1+rho); otherwise no
/// finite blocklength reaches the target rate.
BlocklengthResult min_blocklength(int m, double rho, Probability epsilon, double r_bar);

}  // namespace fblmimo
