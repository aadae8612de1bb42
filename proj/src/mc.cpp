#include "fblmimo/mc.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fblmimo {

namespace {

constexpr std::int64_t kChunk = 4096;       // trials per accumulator chunk
constexpr double kSingularRatio = 1e-12;    // lambda_min/lambda_max rejection threshold
constexpr double kInvLn2 = 1.44269504088896340735992468100189214;

bool uses_inverse_eigenvalues(Functional f) {
    return f == Functional::inv_eigen_sum || f == Functional::inv_eigen_sq_sum;
}

struct NamedTask {
    std::string name;
    Functional target = Functional::capacity;
    bool is_standard = false;
    double rho = 0.0;
    DrawFunctional fn;
    bool heavy_tailed = false;
};

struct ChunkAcc {
    RunningMoments rm;
    std::int64_t rejected = 0;
};

McEstimate finalize(const NamedTask& task, const AntennaConfig& cfg, std::int64_t requested,
                    std::uint64_t seed, const RunningMoments& rm, std::int64_t rejected) {
    McEstimate e;
    e.target = task.target;
    e.cfg = cfg;
    e.rho = task.rho;
    e.trials = rm.count;
    e.rejected = rejected;
    e.mean = rm.mean;
    e.variance = rm.sample_variance();
    e.std_error = rm.count > 0 ? std::sqrt(e.variance / static_cast<double>(rm.count)) : 0.0;
    e.seed = seed;
    if (!task.is_standard) e.note = task.name;
    if (rejected > 0 && rejected * 100 > requested) {
        e.reliable = false;
        e.note += (e.note.empty() ? "" : "; ");
        e.note += "rejection rate above 1%";
    }
    if (task.heavy_tailed) {
        e.reliable = false;
        e.note += (e.note.empty() ? "" : "; ");
        e.note += "heavy-tailed inverse-eigenvalue target on a square array";
    }
    return e;
}

std::vector<McEstimate> run_engine(const std::vector<NamedTask>& tasks, const AntennaConfig& cfg,
                                   std::int64_t trials, std::uint64_t seed, int workers) {
    if (!cfg.valid()) throw std::domain_error("antenna counts must be >= 1");
    if (trials < 2) throw std::domain_error("need at least 2 trials");

    const std::int64_t nchunks = (trials + kChunk - 1) / kChunk;
    const std::size_t ntasks = tasks.size();
    std::vector<ChunkAcc> acc(static_cast<std::size_t>(nchunks) * ntasks);

#ifdef _OPENMP
    const int nthreads = workers > 0 ? workers : omp_get_max_threads();
#else
    (void)workers;
#endif

#ifdef _OPENMP
#pragma omp parallel num_threads(nthreads)
#endif
    {
        Eigen::MatrixXcd h;
        GramEigenWorkspace ws;
#ifdef _OPENMP
#pragma omp for schedule(dynamic)
#endif
        for (std::int64_t c = 0; c < nchunks; ++c) {
            ChunkAcc* slot = &acc[static_cast<std::size_t>(c) * ntasks];
            const std::int64_t lo = c * kChunk;
            const std::int64_t hi = std::min(trials, lo + kChunk);
            for (std::int64_t t = lo; t < hi; ++t) {
                const ChannelStream stream{seed, static_cast<std::uint64_t>(t)};
                fill_channel(h, cfg, stream);
                const std::vector<double>& lam = ws.compute(h, stream);
                for (std::size_t k = 0; k < ntasks; ++k) {
                    if (const auto v = tasks[k].fn(lam)) {
                        slot[k].rm.add(*v);
                    } else {
                        ++slot[k].rejected;
                    }
                }
            }
        }
    }

    // chunk-ordered merge: identical result for any worker count
    std::vector<McEstimate> out;
    out.reserve(ntasks);
    for (std::size_t k = 0; k < ntasks; ++k) {
        RunningMoments rm;
        std::int64_t rejected = 0;
        for (std::int64_t c = 0; c < nchunks; ++c) {
            const ChunkAcc& a = acc[static_cast<std::size_t>(c) * ntasks + k];
            rm.merge(a.rm);
            rejected += a.rejected;
        }
        out.push_back(finalize(tasks[k], cfg, trials, seed, rm, rejected));
    }
    return out;
}

NamedTask standard_task(Functional f, const AntennaConfig& cfg, double rho) {
    if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
    NamedTask t;
    t.name = functional_name(f);
    t.target = f;
    t.is_standard = true;
    t.rho = rho;
    t.heavy_tailed = uses_inverse_eigenvalues(f) && cfg.tx == cfg.rx;

    const double M = cfg.tx;
    const double m = cfg.dof();
    const double shift = 2.0 * M / rho;
    switch (f) {
        case Functional::capacity:
            t.fn = [M, rho](const std::vector<double>& lam) -> std::optional<double> {
                double c = 0.0;
                for (double l : lam) c += std::log1p(rho * l / M) * kInvLn2;
                return c;
            };
            break;
        case Functional::dispersion:
            t.fn = [M, m, rho](const std::vector<double>& lam) -> std::optional<double> {
                double s = 0.0;
                for (double l : lam) {
                    const double u = 1.0 / (1.0 + rho * l / M);
                    s += u * u;
                }
                return m - s;
            };
            break;
        case Functional::sqrt_dispersion:
            t.fn = [M, m, rho](const std::vector<double>& lam) -> std::optional<double> {
                double s = 0.0;
                for (double l : lam) {
                    const double u = 1.0 / (1.0 + rho * l / M);
                    s += u * u;
                }
                const double v = m - s;
                return std::sqrt(v > 0.0 ? v : 0.0);
            };
            break;
        case Functional::inv_eigen_sum:
            t.fn = [](const std::vector<double>& lam) -> std::optional<double> {
                const double lmax = lam.front();
                double s = 0.0;
                for (double l : lam) {
                    if (l < kSingularRatio * lmax || l == 0.0) return std::nullopt;
                    s += 1.0 / l;
                }
                return s;
            };
            break;
        case Functional::shifted_inv_sum:
            t.fn = [shift](const std::vector<double>& lam) -> std::optional<double> {
                double s = 0.0;
                for (double l : lam) s += 1.0 / (shift + l);
                return s;
            };
            break;
        case Functional::inv_eigen_sq_sum:
            t.fn = [](const std::vector<double>& lam) -> std::optional<double> {
                const double lmax = lam.front();
                double s = 0.0;
                for (double l : lam) {
                    if (l < kSingularRatio * lmax || l == 0.0) return std::nullopt;
                    s += 1.0 / (l * l);
                }
                return s;
            };
            break;
        case Functional::dispersion_second_moment:
            t.fn = [M, m, rho](const std::vector<double>& lam) -> std::optional<double> {
                double s = 0.0;
                for (double l : lam) {
                    const double u = 1.0 / (1.0 + rho * l / M);
                    s += u * u;
                }
                const double v = m - s;
                return v * v;
            };
            break;
    }
    return t;
}

}  // namespace

const char* functional_name(Functional f) {
    switch (f) {
        case Functional::capacity: return "capacity";
        case Functional::dispersion: return "dispersion";
        case Functional::sqrt_dispersion: return "sqrt-dispersion";
        case Functional::inv_eigen_sum: return "inv-eigen-sum";
        case Functional::shifted_inv_sum: return "shifted-inv-sum";
        case Functional::inv_eigen_sq_sum: return "inv-eigen-sq-sum";
        case Functional::dispersion_second_moment: return "dispersion-second-moment";
    }
    return "?";
}

std::optional<Functional> functional_from_name(const std::string& name) {
    for (Functional f : {Functional::capacity, Functional::dispersion,
                         Functional::sqrt_dispersion, Functional::inv_eigen_sum,
                         Functional::shifted_inv_sum, Functional::inv_eigen_sq_sum,
                         Functional::dispersion_second_moment}) {
        if (name == functional_name(f)) return f;
    }
    return std::nullopt;
}

McEstimate estimate(Functional target, const AntennaConfig& cfg, double rho,
                    std::int64_t trials, std::uint64_t seed, int workers) {
    const std::vector<NamedTask> tasks{standard_task(target, cfg, rho)};
    return run_engine(tasks, cfg, trials, seed, workers).front();
}

std::vector<McEstimate> estimate_batch(std::span<const McTask> specs, const AntennaConfig& cfg,
                                       std::int64_t trials, std::uint64_t seed, int workers) {
    std::vector<NamedTask> tasks;
    tasks.reserve(specs.size());
    for (const McTask& s : specs) tasks.push_back(standard_task(s.target, cfg, s.rho));
    return run_engine(tasks, cfg, trials, seed, workers);
}

McEstimate estimate_reference(Functional target, const AntennaConfig& cfg, double rho,
                              std::int64_t trials, std::uint64_t seed) {
    if (!cfg.valid()) throw std::domain_error("antenna counts must be >= 1");
    if (trials < 2) throw std::domain_error("need at least 2 trials");
    NamedTask task = standard_task(target, cfg, rho);
    Eigen::MatrixXcd h;
    GramEigenWorkspace ws;
    RunningMoments rm;
    std::int64_t rejected = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        const ChannelStream stream{seed, static_cast<std::uint64_t>(t)};
        fill_channel(h, cfg, stream);
        const std::vector<double>& lam = ws.compute(h, stream);
        if (const auto v = task.fn(lam)) {
            rm.add(*v);
        } else {
            ++rejected;
        }
    }
    return finalize(task, cfg, trials, seed, rm, rejected);
}

McEstimate estimate_custom(const std::string& name, const AntennaConfig& cfg, double rho,
                           std::int64_t trials, std::uint64_t seed, const DrawFunctional& fn,
                           int workers) {
    NamedTask t;
    t.name = name;
    t.is_standard = false;
    t.rho = rho;
    t.fn = fn;
    return run_engine({t}, cfg, trials, seed, workers).front();
}

McEstimate merge(const McEstimate& a, const McEstimate& b) {
    if (a.target != b.target || a.cfg.tx != b.cfg.tx || a.cfg.rx != b.cfg.rx ||
        a.rho != b.rho) {
        throw std::invalid_argument("merge: estimates measure different functionals");
    }
    RunningMoments ra{a.trials, a.mean, a.variance * static_cast<double>(a.trials > 1 ? a.trials - 1 : 0)};
    RunningMoments rb{b.trials, b.mean, b.variance * static_cast<double>(b.trials > 1 ? b.trials - 1 : 0)};
    ra.merge(rb);

    McEstimate out = a;
    out.trials = ra.count;
    out.rejected = a.rejected + b.rejected;
    out.mean = ra.mean;
    out.variance = ra.sample_variance();
    out.std_error = ra.count > 0 ? std::sqrt(out.variance / static_cast<double>(ra.count)) : 0.0;
    out.reliable = a.reliable && b.reliable;
    if (a.seed != b.seed) {
        out.note += (out.note.empty() ? "" : "; ");
        out.note += "merged disjoint substreams";
    }
    return out;
}

}  // namespace fblmimo
