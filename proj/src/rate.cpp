#include "fblmimo/rate.hpp"

#include <cmath>
#include <string>

namespace fblmimo {

namespace {
constexpr double kInvLn2 = 1.44269504088896340735992468100189214;
}

double capacity_of(const EigenSample& eig, const AntennaConfig& cfg, double rho) {
    if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
    const double M = cfg.tx;
    double c = 0.0;
    for (double l : eig.lambdas) {
        c += std::log1p(rho * l / M) * kInvLn2;
    }
    return c;
}

double dispersion_of(const EigenSample& eig, const AntennaConfig& cfg, double rho) {
    if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
    const double M = cfg.tx;
    double s = 0.0;
    for (double l : eig.lambdas) {
        const double t = 1.0 / (1.0 + rho * l / M);
        s += t * t;
    }
    return static_cast<double>(eig.lambdas.size()) - s;
}

double rate_star(double capacity, double dispersion, const LinkParams& link) {
    if (link.n < 1) throw std::domain_error("blocklength must be >= 1");
    return capacity - std::sqrt(dispersion / static_cast<double>(link.n)) *
                          gaussian_q_inv(link.epsilon);
}

RealizationMetrics realization_metrics(const EigenSample& eig, const AntennaConfig& cfg,
                                       const LinkParams& link) {
    RealizationMetrics m;
    m.capacity = capacity_of(eig, cfg, link.rho);
    m.dispersion = dispersion_of(eig, cfg, link.rho);
    m.rate_star = rate_star(m.capacity, m.dispersion, link);
    return m;
}

RateBound avg_rate_bound(const AntennaConfig& cfg, const LinkParams& link,
                         const DispersionStats& disp, double cap_mean) {
    if (link.n < 1) throw std::domain_error("blocklength must be >= 1");
    if (!(disp.mean >= 0.0)) throw std::domain_error("dispersion mean must be nonnegative");
    RateBound b;
    b.method = RateMethod::normal_approx;
    b.r_bar = cap_mean - std::sqrt(disp.mean / static_cast<double>(link.n)) *
                             gaussian_q_inv(link.epsilon);
    b.normalized = b.r_bar / cfg.dof();
    return b;
}

RateBound highsnr_rate_bound(const AntennaConfig& cfg, const LinkParams& link) {
    if (!(link.rho > 0.0)) throw std::domain_error("rho must be positive");
    if (link.n < 1) throw std::domain_error("blocklength must be >= 1");
    const double m = cfg.dof();
    RateBound b;
    b.method = RateMethod::high_snr;
    b.r_bar = m * std::log1p(link.rho) * kInvLn2 -
              std::sqrt(m / static_cast<double>(link.n)) * gaussian_q_inv(link.epsilon);
    b.normalized = b.r_bar / m;
    return b;
}

BlocklengthResult min_blocklength(int m, double rho, Probability epsilon, double r_bar) {
    if (m < 1) throw std::domain_error("spatial dof must be >= 1");
    if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
    if (!(r_bar > 0.0)) throw std::domain_error("target rate must be positive");
    if (!(epsilon.value() < 0.5)) {
        // Squaring the quantile would silently discard its sign here.
        throw std::domain_error("blocklength solver needs epsilon < 0.5");
    }
    const double cap = m * std::log1p(rho) * kInvLn2;
    if (!(cap > r_bar)) {
        throw std::domain_error(
            "infeasible rate: target " + std::to_string(r_bar) +
            " is not below the high-SNR capacity " + std::to_string(cap) +
            "; no finite blocklength reaches it");
    }
    const double q = gaussian_q_inv(epsilon);
    const double gap = cap - r_bar;
    BlocklengthResult res;
    res.n_real = m * q * q / (gap * gap);
    res.n = static_cast<std::int64_t>(std::ceil(res.n_real));
    if (res.n < 1) res.n = 1;
    return res;
}

}  // namespace fblmimo
