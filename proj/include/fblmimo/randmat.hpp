#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fblmimo/errors.hpp"

namespace fblmimo {

/// Antenna geometry of the link.  tx/rx are the transmit/receive array
/// sizes; dof() is the number of parallel spatial streams, min(tx, rx).
struct AntennaConfig {
    int tx = 1;
    int rx = 1;

    int dof() const noexcept { return tx < rx ? tx : rx; }
    bool valid() const noexcept { return tx >= 1 && rx >= 1; }
};

/// Identifies one draw inside a seeded stream.
struct ChannelStream {
    std::uint64_t seed = 0;
    std::uint64_t draw = 0;
};

/// One i.i.d. Rayleigh channel realization: rx x tx complex Gaussian matrix,
/// unit variance per entry, plus the RNG lineage that produced it.
struct ChannelDraw {
    Eigen::MatrixXcd entries;
    ChannelStream stream;
};

/// Eigenvalues of the smaller-side Gram matrix of a draw, descending.
struct EigenSample {
    std::vector<double> lambdas;
    ChannelStream stream;
};

/// Fill `h` (resized to rx x tx) with CN(0,1) entries addressed by `stream`.
/// Deterministic: the same (seed, draw) always yields the same matrix.
void fill_channel(Eigen::MatrixXcd& h, const AntennaConfig& cfg, const ChannelStream& stream);

ChannelDraw sample_channel(const AntennaConfig& cfg, const ChannelStream& stream);

/// Reusable scratch for Gram formation + Hermitian eigensolve, so the
/// Monte-Carlo hot loop does not allocate per trial.
class GramEigenWorkspace {
public:
    /// Eigenvalues of H*H^H (rx <= tx) or H^H*H (rx > tx), sorted descending.
    /// Round-off negatives above -1e-10 * lambda_max are clamped to zero;
    /// anything below that, or solver non-convergence, raises numeric_error
    /// carrying the draw's lineage.
    const std::vector<double>& compute(const Eigen::MatrixXcd& h, const ChannelStream& stream);

private:
    Eigen::MatrixXcd gram_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver_;
    std::vector<double> lambdas_;
};

EigenSample gram_eigenvalues(const ChannelDraw& draw);

/// Stieltjes transform of the Marchenko-Pastur law with aspect ratio c,
/// evaluated on the negative real axis:
///   mu(z) = (1-c)/(2cz) - 1/(2c) - sqrt((1-c-z)^2 - 4cz) / (2cz),  z < 0.
/// The square-root argument is positive for all z < 0, so the value is real.
double mp_stieltjes_raw(double c, double z);

/// Large-matrix mean of the shifted inverse-eigenvalue sum
///   E{ sum_i 1/(2 tx / rho + lambda_i) },
/// lambda_i the Gram eigenvalues of a unit-variance complex Gaussian channel.
/// This is the MP transform of the m x m Gram spectrum (ratio m/max(tx,rx),
/// scale 1/max(tx,rx)) at -2 tx / rho, reduced to a cancellation-free form.
/// Always in [0, m*rho/(2*tx)); exact (sqrt(1+2 rho)-1)/2 in the square case.
double mp_stieltjes_mean(const AntennaConfig& cfg, double rho);

}  // namespace fblmimo
