#include "fblmimo/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "fblmimo/dispersion.hpp"
#include "fblmimo/mc.hpp"
#include "fblmimo/randmat.hpp"
#include "fblmimo/rate.hpp"
#include "fblmimo/specfun.hpp"

namespace fblmimo {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

const char* var_name(SweepSpec::Var v) {
    switch (v) {
        case SweepSpec::Var::tx: return "tx";
        case SweepSpec::Var::rx: return "rx";
        case SweepSpec::Var::dof: return "dof";
        case SweepSpec::Var::rho_db: return "rho_db";
        case SweepSpec::Var::blocklength: return "n";
    }
    return "?";
}

const char* quantity_name(SweepSpec::Quantity q) {
    switch (q) {
        case SweepSpec::Quantity::stieltjes_mean: return "stieltjes-mean";
        case SweepSpec::Quantity::dispersion_mean: return "dispersion-mean";
        case SweepSpec::Quantity::dispersion_variance: return "dispersion-variance";
        case SweepSpec::Quantity::rate_bound: return "rate-bound";
        case SweepSpec::Quantity::blocklength: return "blocklength";
    }
    return "?";
}

const char* method_name(SweepSpec::Method m) {
    switch (m) {
        case SweepSpec::Method::closed: return "closed";
        case SweepSpec::Method::high_snr: return "high-snr";
        case SweepSpec::Method::mc: return "mc";
        case SweepSpec::Method::both: return "both";
    }
    return "?";
}

bool integral_var(SweepSpec::Var v) { return v != SweepSpec::Var::rho_db; }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct Row {
    double value;     // swept value
    int tx, rx;
    double rho_db;
    double rho;
};

// Resolved per-row state assembled before formatting.
struct Cells {
    std::vector<std::string> quantity_cells;
    bool valid = true;
};

}  // namespace

SweepSpec figure_preset(int id) {
    SweepSpec s;
    s.figure = id;
    s.var = SweepSpec::Var::rho_db;
    s.from = 0.0;
    s.to = 15.0;
    s.step = 1.0;
    s.method = SweepSpec::Method::both;
    switch (id) {
        case 1:
            s.quantity = SweepSpec::Quantity::stieltjes_mean;
            s.configs = {{8, 16}, {32, 64}};
            s.description = "shifted inverse-eigenvalue mean vs SNR, rx > tx";
            break;
        case 2:
            s.quantity = SweepSpec::Quantity::stieltjes_mean;
            s.configs = {{16, 8}, {64, 32}};
            s.description = "shifted inverse-eigenvalue mean vs SNR, rx < tx";
            break;
        case 3:
            s.quantity = SweepSpec::Quantity::dispersion_mean;
            s.configs = {{8, 16}, {32, 64}};
            s.description = "dispersion mean vs SNR, rx > tx";
            break;
        case 4:
            s.quantity = SweepSpec::Quantity::dispersion_mean;
            s.configs = {{4, 16}, {8, 64}};
            s.description = "dispersion mean vs SNR, strongly rectangular rx > tx";
            break;
        case 5:
            s.quantity = SweepSpec::Quantity::dispersion_mean;
            s.configs = {{16, 8}, {64, 32}};
            s.description = "dispersion mean vs SNR, rx < tx";
            break;
        case 6:
            s.quantity = SweepSpec::Quantity::dispersion_variance;
            s.configs = {{10, 4}};
            s.from = 5.0;
            s.to = 7.0;
            s.step = 2.0;
            s.description = "dispersion variance at the calibrated 5 dB / 7 dB anchors";
            break;
        case 7:
            s.quantity = SweepSpec::Quantity::blocklength;
            s.var = SweepSpec::Var::dof;
            s.from = 1.0;
            s.to = 64.0;
            s.step = 1.0;
            s.snr_db = 15.0;
            s.epsilon = 1e-7;
            s.method = SweepSpec::Method::closed;
            s.configs.clear();
            s.description = "minimal blocklength vs spatial dof at 15 dB, epsilon 1e-7";
            break;
        default:
            throw std::invalid_argument("figure preset must be 1..7");
    }
    return s;
}

std::size_t run_sweep(const SweepSpec& spec, std::ostream& out) {
    if (!(spec.step > 0.0)) throw std::invalid_argument("sweep step must be positive");
    if (spec.from > spec.to) throw std::invalid_argument("empty sweep range");
    if (spec.var == SweepSpec::Var::dof && spec.quantity != SweepSpec::Quantity::blocklength &&
        spec.quantity != SweepSpec::Quantity::rate_bound) {
        throw std::invalid_argument("sweeping dof applies to blocklength/rate-bound only");
    }
    if (spec.var == SweepSpec::Var::blocklength &&
        spec.quantity == SweepSpec::Quantity::blocklength) {
        throw std::invalid_argument("cannot sweep n while solving for n");
    }

    // swept values, inclusive of `to` up to round-off
    std::vector<double> values;
    for (double v = spec.from; v <= spec.to + 1e-9 * spec.step; v += spec.step) {
        values.push_back(integral_var(spec.var) ? std::round(v) : v);
    }
    if (values.empty()) throw std::invalid_argument("empty sweep range");

    std::vector<std::array<int, 2>> configs = spec.configs;
    if (spec.var == SweepSpec::Var::dof) {
        configs = {{0, 0}};  // resolved per row from the swept dof value
    } else if (configs.empty()) {
        throw std::invalid_argument("sweep needs at least one antenna config");
    }

    // materialize rows in sweep order
    std::vector<Row> rows;
    for (double v : values) {
        for (const auto& c : configs) {
            Row r{};
            r.value = v;
            r.tx = c[0];
            r.rx = c[1];
            r.rho_db = spec.snr_db;
            switch (spec.var) {
                case SweepSpec::Var::tx: r.tx = static_cast<int>(v); break;
                case SweepSpec::Var::rx: r.rx = static_cast<int>(v); break;
                case SweepSpec::Var::dof: r.tx = r.rx = static_cast<int>(v); break;
                case SweepSpec::Var::rho_db: r.rho_db = v; break;
                case SweepSpec::Var::blocklength: break;
            }
            r.rho = db_to_linear(r.rho_db);
            rows.push_back(r);
        }
    }

    const bool want_closed = spec.method == SweepSpec::Method::closed ||
                             spec.method == SweepSpec::Method::high_snr ||
                             spec.method == SweepSpec::Method::both;
    const bool want_mc =
        spec.method == SweepSpec::Method::mc || spec.method == SweepSpec::Method::both;
    const bool high_snr = spec.method == SweepSpec::Method::high_snr;

    // one shared drawing pass per antenna config when only rho varies
    std::map<std::pair<int, int>, std::vector<McEstimate>> mc_by_config;
    if (want_mc && spec.var == SweepSpec::Var::rho_db &&
        spec.quantity != SweepSpec::Quantity::blocklength) {
        for (const auto& c : configs) {
            std::vector<McTask> tasks;
            for (double v : values) {
                const double rho = db_to_linear(v);
                switch (spec.quantity) {
                    case SweepSpec::Quantity::stieltjes_mean:
                        tasks.push_back({Functional::shifted_inv_sum, rho});
                        break;
                    case SweepSpec::Quantity::dispersion_mean:
                    case SweepSpec::Quantity::dispersion_variance:
                        tasks.push_back({Functional::dispersion, rho});
                        break;
                    case SweepSpec::Quantity::rate_bound:
                        tasks.push_back({Functional::capacity, rho});
                        tasks.push_back({Functional::dispersion, rho});
                        break;
                    default:
                        break;
                }
            }
            mc_by_config[{c[0], c[1]}] = estimate_batch(
                tasks, AntennaConfig{c[0], c[1]}, spec.trials, spec.seed, spec.workers);
        }
    }
    auto mc_for = [&](const Row& r, Functional f) -> McEstimate {
        const auto it = mc_by_config.find({r.tx, r.rx});
        if (it != mc_by_config.end()) {
            for (const McEstimate& e : it->second) {
                if (e.target == f && e.rho == r.rho) return e;
            }
        }
        return estimate(f, AntennaConfig{r.tx, r.rx}, r.rho, spec.trials, spec.seed,
                        spec.workers);
    };

    // header comments: full parameterization, no timestamps (byte-stable)
    out << "# fblmimo sweep\n";
    if (spec.figure > 0) {
        out << "# figure=" << spec.figure << " " << spec.description << "\n";
    } else if (!spec.description.empty()) {
        out << "# " << spec.description << "\n";
    }
    out << "# quantity=" << quantity_name(spec.quantity) << " method=" << method_name(spec.method)
        << " var=" << var_name(spec.var) << " from=" << fmt(spec.from) << " to=" << fmt(spec.to)
        << " step=" << fmt(spec.step) << "\n";
    out << "# fixed: snr_db=" << fmt(spec.snr_db) << " epsilon=" << fmt(spec.epsilon)
        << " n=" << spec.n << " rate_fraction=" << fmt(spec.rate_fraction)
        << " trials=" << spec.trials << " seed=" << spec.seed << " workers=" << spec.workers
        << " psi=" << fmt(spec.psi) << " xi=" << fmt(spec.xi) << "\n";
    if (spec.quantity == SweepSpec::Quantity::dispersion_variance) {
        out << "# mc_var_std_error uses the normal-theory approximation var*sqrt(2/(trials-1))\n";
    }

    // column set per quantity/method
    std::vector<std::string> cols{var_name(spec.var), "tx", "rx", "rho_db"};
    switch (spec.quantity) {
        case SweepSpec::Quantity::stieltjes_mean:
        case SweepSpec::Quantity::dispersion_mean:
            if (want_closed) cols.push_back(high_snr ? "high_snr" : "closed");
            if (want_mc) { cols.push_back("mc_mean"); cols.push_back("mc_std_error"); }
            break;
        case SweepSpec::Quantity::dispersion_variance:
            if (want_closed) cols.push_back("closed_var");
            if (want_mc) { cols.push_back("mc_var"); cols.push_back("mc_var_std_error"); }
            break;
        case SweepSpec::Quantity::rate_bound:
            if (want_closed) { cols.push_back("r_bar_high_snr"); cols.push_back("normalized_high_snr"); }
            if (want_mc) { cols.push_back("r_bar_normal"); cols.push_back("cap_mean"); cols.push_back("disp_mean"); }
            break;
        case SweepSpec::Quantity::blocklength:
            cols.push_back("n_min");
            cols.push_back("n_real");
            cols.push_back("r_bar_target");
            break;
    }
    cols.push_back("validity");
    cols.push_back("seed");
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::size_t written = 0;
    for (const Row& r : rows) {
        Cells c;
        const AntennaConfig cfg{r.tx, r.rx};
        switch (spec.quantity) {
            case SweepSpec::Quantity::stieltjes_mean: {
                if (want_closed) c.quantity_cells.push_back(fmt(mp_stieltjes_mean(cfg, r.rho)));
                if (want_mc) {
                    const McEstimate e = mc_for(r, Functional::shifted_inv_sum);
                    c.quantity_cells.push_back(fmt(e.mean));
                    c.quantity_cells.push_back(fmt(e.std_error));
                }
                break;
            }
            case SweepSpec::Quantity::dispersion_mean: {
                if (want_closed) {
                    try {
                        const DispersionStats st = high_snr ? dispersion_mean_highsnr(cfg, r.rho)
                                                            : dispersion_mean(cfg, r.rho);
                        c.quantity_cells.push_back(fmt(st.mean));
                        c.valid = c.valid && st.valid;
                    } catch (const validity_error&) {
                        c.quantity_cells.push_back(fmt(nan));
                        c.valid = false;
                    }
                }
                if (want_mc) {
                    const McEstimate e = mc_for(r, Functional::dispersion);
                    c.quantity_cells.push_back(fmt(e.mean));
                    c.quantity_cells.push_back(fmt(e.std_error));
                }
                break;
            }
            case SweepSpec::Quantity::dispersion_variance: {
                if (want_closed) {
                    EmendationParams em{spec.psi, spec.xi, r.rho_db};
                    if (!(spec.psi > 0.0) || !(spec.xi > 0.0)) {
                        if (const auto d = default_emendation(r.rho_db)) {
                            em = *d;
                        } else {
                            em = EmendationParams{0.0, 0.0, r.rho_db};
                        }
                    }
                    if (!(em.psi > 0.0)) {
                        // no calibration at this SNR and none supplied
                        c.quantity_cells.push_back(fmt(nan));
                        c.valid = false;
                    } else {
                        try {
                            const DispersionVariance dv = dispersion_variance(cfg, r.rho, em);
                            c.quantity_cells.push_back(fmt(dv.variance_estimate));
                            c.valid = c.valid && dv.stats.valid;
                        } catch (const validity_error&) {
                            c.quantity_cells.push_back(fmt(nan));
                            c.valid = false;
                        }
                    }
                }
                if (want_mc) {
                    const McEstimate e = mc_for(r, Functional::dispersion);
                    c.quantity_cells.push_back(fmt(e.variance));
                    const double n1 = e.trials > 1 ? static_cast<double>(e.trials - 1) : 1.0;
                    c.quantity_cells.push_back(fmt(e.variance * std::sqrt(2.0 / n1)));
                }
                break;
            }
            case SweepSpec::Quantity::rate_bound: {
                const std::int64_t n_row = spec.var == SweepSpec::Var::blocklength
                                               ? static_cast<std::int64_t>(r.value)
                                               : spec.n;
                const LinkParams link{r.rho, Probability(spec.epsilon), n_row};
                if (want_closed) {
                    const RateBound b = highsnr_rate_bound(cfg, link);
                    c.quantity_cells.push_back(fmt(b.r_bar));
                    c.quantity_cells.push_back(fmt(b.normalized));
                }
                if (want_mc) {
                    const McEstimate cap = mc_for(r, Functional::capacity);
                    const McEstimate dis = mc_for(r, Functional::dispersion);
                    DispersionStats ds;
                    ds.mean = dis.mean;
                    ds.method = DispersionMethod::monte_carlo;
                    const RateBound b = avg_rate_bound(cfg, link, ds, cap.mean);
                    c.quantity_cells.push_back(fmt(b.r_bar));
                    c.quantity_cells.push_back(fmt(cap.mean));
                    c.quantity_cells.push_back(fmt(dis.mean));
                }
                break;
            }
            case SweepSpec::Quantity::blocklength: {
                const int m = spec.var == SweepSpec::Var::dof ? static_cast<int>(r.value)
                                                              : cfg.dof();
                const double cap = m * std::log2(1.0 + r.rho);
                const double target = spec.rate_fraction * cap;
                try {
                    const BlocklengthResult res =
                        min_blocklength(m, r.rho, Probability(spec.epsilon), target);
                    c.quantity_cells.push_back(fmt(res.n));
                    c.quantity_cells.push_back(fmt(res.n_real));
                    c.quantity_cells.push_back(fmt(target));
                } catch (const std::domain_error&) {
                    c.quantity_cells.push_back(fmt(nan));
                    c.quantity_cells.push_back(fmt(nan));
                    c.quantity_cells.push_back(fmt(target));
                    c.valid = false;
                }
                break;
            }
        }

        out << fmt(r.value) << "," << r.tx << "," << r.rx << "," << fmt(r.rho_db);
        for (const std::string& cell : c.quantity_cells) out << "," << cell;
        out << "," << (c.valid ? "ok" : "invalid") << "," << spec.seed << "\n";
        ++written;
    }
    return written;
}

}  // namespace fblmimo
