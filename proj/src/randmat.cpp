#include "fblmimo/randmat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fblmimo/rng.hpp"

namespace fblmimo {

void fill_channel(Eigen::MatrixXcd& h, const AntennaConfig& cfg, const ChannelStream& stream) {
    if (!cfg.valid()) throw std::domain_error("antenna counts must be >= 1");
    const int rows = cfg.rx, cols = cfg.tx;
    h.resize(rows, cols);
    // Entry (i,j) is addressed by its row-major index, so a draw is the same
    // matrix no matter how or where it is generated.
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            h(i, j) = gaussian_complex(stream.seed, stream.draw,
                                       static_cast<std::uint32_t>(i) * cols + j);
        }
    }
}

ChannelDraw sample_channel(const AntennaConfig& cfg, const ChannelStream& stream) {
    ChannelDraw d;
    d.stream = stream;
    fill_channel(d.entries, cfg, stream);
    return d;
}

const std::vector<double>& GramEigenWorkspace::compute(const Eigen::MatrixXcd& h,
                                                       const ChannelStream& stream) {
    const auto rows = h.rows(), cols = h.cols();
    if (cols >= rows) {
        gram_.noalias() = h * h.adjoint();        // rx x rx
    } else {
        gram_.noalias() = h.adjoint() * h;        // tx x tx
    }
    solver_.compute(gram_, Eigen::EigenvaluesOnly);
    if (solver_.info() != Eigen::Success) {
        throw numeric_error("Hermitian eigensolver failed to converge", stream.seed, stream.draw);
    }
    const auto& ev = solver_.eigenvalues();  // ascending
    const auto m = ev.size();
    lambdas_.resize(static_cast<std::size_t>(m));
    for (Eigen::Index k = 0; k < m; ++k) {
        lambdas_[static_cast<std::size_t>(m - 1 - k)] = ev[k];
    }
    const double lmax = lambdas_.empty() ? 0.0 : lambdas_.front();
    for (double& l : lambdas_) {
        if (l < 0.0) {
            if (l < -1e-10 * lmax) {
                throw numeric_error("negative eigenvalue beyond round-off tolerance",
                                    stream.seed, stream.draw);
            }
            l = 0.0;
        }
    }
    return lambdas_;
}

EigenSample gram_eigenvalues(const ChannelDraw& draw) {
    GramEigenWorkspace ws;
    EigenSample s;
    s.stream = draw.stream;
    s.lambdas = ws.compute(draw.entries, draw.stream);
    return s;
}

double mp_stieltjes_raw(double c, double z) {
    if (!(c > 0.0)) throw std::domain_error("mp_stieltjes_raw: aspect ratio c must be positive");
    if (!(z < 0.0)) throw std::domain_error("mp_stieltjes_raw: argument z must be negative");
    const double t = 1.0 - c - z;
    const double root = std::sqrt(t * t - 4.0 * c * z);
    return (1.0 - c) / (2.0 * c * z) - 1.0 / (2.0 * c) - root / (2.0 * c * z);
}

double mp_stieltjes_mean(const AntennaConfig& cfg, double rho) {
    if (!cfg.valid()) throw std::domain_error("antenna counts must be >= 1");
    if (!(rho > 0.0)) throw std::domain_error("mp_stieltjes_mean: rho must be positive");
    const double M = cfg.tx, N = cfg.rx;
    const double m = cfg.dof();
    const double d = std::abs(M - N);
    // Rationalized transform value: 2 rho m / (a + sqrt(a^2 + 8 rho M m))
    // with a = rho*d + 2M.  No subtractive cancellation as rho -> 0.
    const double a = rho * d + 2.0 * M;
    const double s = std::hypot(a, std::sqrt(8.0 * rho * M * m));
    return 2.0 * rho * m / (a + s);
}

}  // namespace fblmimo
