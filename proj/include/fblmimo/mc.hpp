#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fblmimo/randmat.hpp"

namespace fblmimo {

/// Per-draw functionals of the Gram eigenvalues that the estimator knows
/// how to evaluate.
enum class Functional {
    capacity,                   // sum log2(1 + rho*lambda/tx)
    dispersion,                 // dof - sum 1/(1 + rho*lambda/tx)^2
    sqrt_dispersion,            // sqrt of the above
    inv_eigen_sum,              // sum 1/lambda          (draw can be rejected)
    shifted_inv_sum,            // sum 1/(2 tx/rho + lambda)
    inv_eigen_sq_sum,           // sum 1/lambda^2        (draw can be rejected)
    dispersion_second_moment,   // V^2
};

const char* functional_name(Functional f);
std::optional<Functional> functional_from_name(const std::string& name);

/// Single-pass mean/variance accumulator (Welford update, Chan merge).
/// Merging two accumulators reproduces the count, mean and second central
/// moment of the concatenated stream.
struct RunningMoments {
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    void merge(const RunningMoments& o) noexcept {
        if (o.count == 0) return;
        if (count == 0) { *this = o; return; }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(o.count);
        const double d = o.mean - mean;
        const double n = na + nb;
        mean += d * (nb / n);
        m2 += o.m2 + d * d * (na * nb / n);
        count += o.count;
    }

    double sample_variance() const noexcept {
        return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
    }
};

/// Result of a seeded estimation run.  std_error = sqrt(variance/trials)
/// where trials counts accepted draws.  reliable=false flags estimates with
/// a rejection rate above 1% or a known heavy-tailed target (inverse
/// eigenvalue sums on square arrays).
struct McEstimate {
    Functional target = Functional::capacity;
    AntennaConfig cfg;
    double rho = 0.0;
    std::int64_t trials = 0;
    std::int64_t rejected = 0;
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
    bool reliable = true;
    std::string note;
};

/// One (functional, rho) pair to evaluate inside a shared drawing pass.
struct McTask {
    Functional target;
    double rho;
};

/// OpenMP-parallel estimator.  Trials are split into fixed-size chunks whose
/// accumulators are merged in chunk order, so the result is bit-identical
/// for any worker count; draw t depends only on (seed, t).
/// workers <= 0 picks the OpenMP default.
McEstimate estimate(Functional target, const AntennaConfig& cfg, double rho,
                    std::int64_t trials, std::uint64_t seed, int workers = 0);

/// Shared-pass variant: one set of draws, many functionals.  Each entry in
/// the result is identical to the corresponding single-target estimate()
/// with the same (seed, trials).
std::vector<McEstimate> estimate_batch(std::span<const McTask> tasks, const AntennaConfig& cfg,
                                       std::int64_t trials, std::uint64_t seed, int workers = 0);

/// Serial single-pass reference (no chunking, trials accumulated in order).
/// Kept for testing the parallel path; agrees with estimate() to floating-
/// point associativity tolerance.
McEstimate estimate_reference(Functional target, const AntennaConfig& cfg, double rho,
                              std::int64_t trials, std::uint64_t seed);

/// Custom per-draw statistic over the same seeded draws; the evaluator may
/// return nullopt to reject a draw.  Used by tests to cross-check closed
/// forms that are not part of the standard functional set.
using DrawFunctional = std::function<std::optional<double>(const std::vector<double>& lambdas)>;
McEstimate estimate_custom(const std::string& name, const AntennaConfig& cfg, double rho,
                           std::int64_t trials, std::uint64_t seed, const DrawFunctional& fn,
                           int workers = 0);

/// Pairwise merge of two estimates over disjoint substreams.
/// Throws std::invalid_argument on mismatched target/config/rho.
McEstimate merge(const McEstimate& a, const McEstimate& b);

}  // namespace fblmimo
