// Command-line front end: scalar bound computations, seeded Monte-Carlo
// estimation, and CSV parameter sweeps.
//
// Exit codes: 0 success, 2 domain/validity error, 1 internal error.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "fblmimo/dispersion.hpp"
#include "fblmimo/errors.hpp"
#include "fblmimo/mc.hpp"
#include "fblmimo/randmat.hpp"
#include "fblmimo/rate.hpp"
#include "fblmimo/specfun.hpp"
#include "fblmimo/sweep.hpp"

namespace {

constexpr int kExitDomain = 2;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct SnrOpt {
    std::optional<double> db;
    std::optional<double> linear;

    double rho() const {
        if (db && linear) throw std::domain_error("give --snr-db or --snr-linear, not both");
        if (linear) {
            if (!(*linear > 0.0)) throw std::domain_error("linear SNR must be positive");
            return *linear;
        }
        if (db) return std::pow(10.0, *db / 10.0);
        throw std::domain_error("SNR required: --snr-db or --snr-linear");
    }
    double as_db() const {
        if (db) return *db;
        if (linear) return 10.0 * std::log10(*linear);
        throw std::domain_error("SNR required: --snr-db or --snr-linear");
    }
};

void add_snr(CLI::App* cmd, SnrOpt& snr) {
    auto* a = cmd->add_option("--snr-db", snr.db, "SNR in dB");
    auto* b = cmd->add_option("--snr-linear", snr.linear, "SNR as a linear power ratio");
    a->excludes(b);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-blocklength massive MIMO rate bounds"};
    app.require_subcommand(1);

    // ---- q-inv ----
    double qi_eps = 0.0;
    auto* qinv = app.add_subcommand("q-inv", "inverse Gaussian tail function");
    qinv->add_option("--epsilon", qi_eps, "probability in (0,1)")->required();

    // ---- dispersion ----
    int d_M = 8, d_N = 4;
    SnrOpt d_snr;
    std::string d_stat = "mean", d_method = "closed";
    std::int64_t d_trials = 100000;
    std::uint64_t d_seed = 42;
    int d_workers = 0;
    double d_psi = 0.0, d_xi = 0.0;
    bool d_square_convention = false;
    auto* disp = app.add_subcommand("dispersion", "channel dispersion statistics");
    disp->add_option("--M", d_M, "transmit antennas")->required();
    disp->add_option("--N", d_N, "receive antennas")->required();
    add_snr(disp, d_snr);
    disp->add_option("--stat", d_stat)->check(CLI::IsMember({"mean", "var"}));
    disp->add_option("--method", d_method)
        ->check(CLI::IsMember({"closed", "high-snr", "mc", "both"}));
    disp->add_option("--trials", d_trials)->envname("FBLMIMO_TRIALS");
    disp->add_option("--seed", d_seed)->envname("FBLMIMO_SEED");
    disp->add_option("--workers", d_workers);
    disp->add_option("--psi", d_psi, "variance cross-term calibration");
    disp->add_option("--xi", d_xi, "variance cross-term calibration");
    disp->add_flag("--square-convention", d_square_convention,
                   "accept the one-extra-antenna convention for M == N diagnostics");

    // ---- rate ----
    int r_M = 8, r_N = 4;
    SnrOpt r_snr;
    double r_eps = 1e-7;
    std::int64_t r_n = 100, r_trials = 100000;
    std::uint64_t r_seed = 42;
    int r_workers = 0;
    std::string r_method = "normal";
    auto* rate = app.add_subcommand("rate", "average maximal achievable rate bound");
    rate->add_option("--M", r_M)->required();
    rate->add_option("--N", r_N)->required();
    add_snr(rate, r_snr);
    rate->add_option("--epsilon", r_eps)->required();
    rate->add_option("--n", r_n, "blocklength in channel uses")->required();
    rate->add_option("--method", r_method)->check(CLI::IsMember({"normal", "high-snr"}));
    rate->add_option("--trials", r_trials)->envname("FBLMIMO_TRIALS");
    rate->add_option("--seed", r_seed)->envname("FBLMIMO_SEED");
    rate->add_option("--workers", r_workers);

    // ---- blocklength ----
    int b_m = 4;
    SnrOpt b_snr;
    double b_eps = 1e-7, b_fraction = 0.0, b_rbar = 0.0;
    auto* блок = nullptr; (void)блок;
    auto* blk = app.add_subcommand("blocklength", "minimal blocklength for a target rate");
    blk->add_option("--m", b_m, "spatial degrees of freedom")->required();
    add_snr(blk, b_snr);
    blk->add_option("--epsilon", b_eps)->required();
    auto* bf = blk->add_option("--rate-fraction", b_fraction,
                               "target rate as a fraction of m*log2(1+rho)");
    auto* br = blk->add_option("--r-bar", b_rbar, "target rate in bits per channel use");
    bf->excludes(br);

    // ---- mc ----
    std::string m_target = "dispersion";
    int m_M = 8, m_N = 4, m_workers = 0;
    SnrOpt m_snr;
    std::int64_t m_trials = 100000;
    std::uint64_t m_seed = 42;
    auto* mc = app.add_subcommand("mc", "seeded Monte-Carlo estimation");
    mc->add_option("--target", m_target)
        ->check(CLI::IsMember({"capacity", "dispersion", "sqrt-dispersion", "inv-eigen-sum",
                               "shifted-inv-sum", "inv-eigen-sq-sum",
                               "dispersion-second-moment"}));
    mc->add_option("--M", m_M)->required();
    mc->add_option("--N", m_N)->required();
    add_snr(mc, m_snr);
    mc->add_option("--trials", m_trials)->envname("FBLMIMO_TRIALS");
    mc->add_option("--seed", m_seed)->envname("FBLMIMO_SEED");
    mc->add_option("--workers", m_workers);

    // ---- sweep ----
    int s_figure = 0;
    std::string s_var, s_quantity = "dispersion-mean", s_method = "both", s_out;
    double s_from = 0.0, s_to = 0.0, s_step = 1.0;
    int s_M = 8, s_N = 4, s_workers = 0;
    SnrOpt s_snr;
    double s_eps = 1e-7, s_fraction = 0.8, s_psi = 0.0, s_xi = 0.0;
    std::int64_t s_n = 100, s_trials = 100000;
    std::uint64_t s_seed = 42;
    auto* sweep = app.add_subcommand("sweep", "parameter sweep written as CSV");
    sweep->add_option("--figure", s_figure, "paper-figure preset 1..7");
    sweep->add_option("--var", s_var)->check(CLI::IsMember({"M", "N", "m", "rho_db", "n"}));
    sweep->add_option("--from", s_from);
    sweep->add_option("--to", s_to);
    sweep->add_option("--step", s_step);
    sweep->add_option("--quantity", s_quantity)
        ->check(CLI::IsMember({"stieltjes-mean", "dispersion-mean", "dispersion-variance",
                               "rate-bound", "blocklength"}));
    sweep->add_option("--method", s_method)
        ->check(CLI::IsMember({"closed", "high-snr", "mc", "both"}));
    sweep->add_option("--M", s_M);
    sweep->add_option("--N", s_N);
    add_snr(sweep, s_snr);
    sweep->add_option("--epsilon", s_eps);
    sweep->add_option("--n", s_n);
    sweep->add_option("--rate-fraction", s_fraction);
    sweep->add_option("--psi", s_psi);
    sweep->add_option("--xi", s_xi);
    sweep->add_option("--trials", s_trials)->envname("FBLMIMO_TRIALS");
    sweep->add_option("--seed", s_seed)->envname("FBLMIMO_SEED");
    sweep->add_option("--workers", s_workers);
    sweep->add_option("--out", s_out, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (qinv->parsed()) {
            const double x = fblmimo::gaussian_q_inv(fblmimo::Probability(qi_eps));
            std::cout << "x=" << fmt(x) << "\n";
            return 0;
        }

        if (disp->parsed()) {
            const fblmimo::AntennaConfig cfg{d_M, d_N};
            const double rho = d_snr.rho();
            std::ostringstream line;
            if (d_stat == "mean") {
                if (d_method == "closed" || d_method == "both") {
                    const auto st = fblmimo::dispersion_mean(cfg, rho);
                    line << "mean_closed=" << fmt(st.mean)
                         << " validity=" << (st.valid ? "ok" : "invalid");
                    if (!st.valid) {
                        std::cout << line.str() << "\n";
                        std::cerr << "validity: " << st.validity_note << "\n";
                        return kExitDomain;
                    }
                } else if (d_method == "high-snr") {
                    const auto st = fblmimo::dispersion_mean_highsnr(cfg, rho);
                    line << "mean_high_snr=" << fmt(st.mean)
                         << " validity=" << (st.valid ? "ok" : "invalid");
                }
                if (d_method == "mc" || d_method == "both") {
                    const auto e = fblmimo::estimate(fblmimo::Functional::dispersion, cfg, rho,
                                                     d_trials, d_seed, d_workers);
                    if (line.tellp() > 0) line << " ";
                    line << "mean_mc=" << fmt(e.mean) << " std_error=" << fmt(e.std_error)
                         << " trials=" << e.trials << " seed=" << e.seed;
                }
            } else {  // var
                if (d_method == "closed" || d_method == "both") {
                    fblmimo::EmendationParams em{d_psi, d_xi, d_snr.as_db()};
                    if (!(d_psi > 0.0) || !(d_xi > 0.0)) {
                        const auto dflt = fblmimo::default_emendation(d_snr.as_db());
                        if (!dflt) {
                            throw fblmimo::validity_error(
                                "no calibrated (psi, xi) at this SNR: defaults exist at "
                                "5 dB and 7 dB only; pass --psi/--xi explicitly");
                        }
                        em = *dflt;
                    }
                    const auto dv = fblmimo::dispersion_variance(cfg, rho, em);
                    line << "var_closed=" << fmt(dv.variance_estimate)
                         << " g1=" << fmt(dv.terms.g1) << " g2=" << fmt(dv.terms.g2)
                         << " g3=" << fmt(dv.terms.g3) << " g4=" << fmt(dv.terms.g4)
                         << " validity=" << (dv.stats.valid ? "ok" : "invalid");
                    if (!dv.stats.valid) {
                        std::cout << line.str() << "\n";
                        std::cerr << "validity: " << dv.stats.validity_note << "\n";
                        return kExitDomain;
                    }
                }
                if (d_method == "mc" || d_method == "both") {
                    const auto e = fblmimo::estimate(fblmimo::Functional::dispersion, cfg, rho,
                                                     d_trials, d_seed, d_workers);
                    if (line.tellp() > 0) line << " ";
                    line << "var_mc=" << fmt(e.variance) << " trials=" << e.trials
                         << " seed=" << e.seed;
                }
            }
            std::cout << line.str() << "\n";
            return 0;
        }

        if (rate->parsed()) {
            const fblmimo::AntennaConfig cfg{r_M, r_N};
            const fblmimo::LinkParams link{r_snr.rho(), fblmimo::Probability(r_eps), r_n};
            if (r_method == "high-snr") {
                const auto b = fblmimo::highsnr_rate_bound(cfg, link);
                std::cout << "r_bar=" << fmt(b.r_bar) << " normalized=" << fmt(b.normalized)
                          << " method=high-snr\n";
            } else {
                const fblmimo::McTask tasks[] = {
                    {fblmimo::Functional::capacity, link.rho},
                    {fblmimo::Functional::dispersion, link.rho},
                };
                const auto est = fblmimo::estimate_batch(tasks, cfg, r_trials, r_seed, r_workers);
                fblmimo::DispersionStats ds;
                ds.mean = est[1].mean;
                ds.method = fblmimo::DispersionMethod::monte_carlo;
                const auto b = fblmimo::avg_rate_bound(cfg, link, ds, est[0].mean);
                std::cout << "r_bar=" << fmt(b.r_bar) << " normalized=" << fmt(b.normalized)
                          << " cap_mean=" << fmt(est[0].mean) << " disp_mean=" << fmt(est[1].mean)
                          << " method=normal-approx trials=" << est[0].trials
                          << " seed=" << est[0].seed << "\n";
            }
            return 0;
        }

        if (blk->parsed()) {
            const double rho = b_snr.rho();
            double target = b_rbar;
            if (b_fraction > 0.0) target = b_fraction * b_m * std::log2(1.0 + rho);
            if (!(target > 0.0)) {
                throw std::domain_error("give a positive --rate-fraction or --r-bar");
            }
            const auto res =
                fblmimo::min_blocklength(b_m, rho, fblmimo::Probability(b_eps), target);
            std::cout << "n=" << res.n << " n_real=" << fmt(res.n_real)
                      << " r_bar=" << fmt(target) << "\n";
            return 0;
        }

        if (mc->parsed()) {
            const auto f = fblmimo::functional_from_name(m_target);
            const fblmimo::AntennaConfig cfg{m_M, m_N};
            const auto e =
                fblmimo::estimate(*f, cfg, m_snr.rho(), m_trials, m_seed, m_workers);
            std::cout << "target=" << fblmimo::functional_name(e.target) << " mean=" << fmt(e.mean)
                      << " variance=" << fmt(e.variance) << " std_error=" << fmt(e.std_error)
                      << " trials=" << e.trials << " rejected=" << e.rejected
                      << " seed=" << e.seed << " reliable=" << (e.reliable ? "yes" : "no")
                      << "\n";
            if (!e.note.empty()) std::cerr << "note: " << e.note << "\n";
            return 0;
        }

        if (sweep->parsed()) {
            fblmimo::SweepSpec spec;
            if (s_figure > 0) {
                spec = fblmimo::figure_preset(s_figure);
            } else {
                if (s_var.empty()) {
                    throw std::domain_error("sweep needs --figure or --var");
                }
                if (s_var == "M") spec.var = fblmimo::SweepSpec::Var::tx;
                else if (s_var == "N") spec.var = fblmimo::SweepSpec::Var::rx;
                else if (s_var == "m") spec.var = fblmimo::SweepSpec::Var::dof;
                else if (s_var == "rho_db") spec.var = fblmimo::SweepSpec::Var::rho_db;
                else spec.var = fblmimo::SweepSpec::Var::blocklength;
                spec.from = s_from;
                spec.to = s_to;
                spec.step = s_step;
                spec.configs = {{s_M, s_N}};
                if (s_quantity == "stieltjes-mean")
                    spec.quantity = fblmimo::SweepSpec::Quantity::stieltjes_mean;
                else if (s_quantity == "dispersion-mean")
                    spec.quantity = fblmimo::SweepSpec::Quantity::dispersion_mean;
                else if (s_quantity == "dispersion-variance")
                    spec.quantity = fblmimo::SweepSpec::Quantity::dispersion_variance;
                else if (s_quantity == "rate-bound")
                    spec.quantity = fblmimo::SweepSpec::Quantity::rate_bound;
                else
                    spec.quantity = fblmimo::SweepSpec::Quantity::blocklength;
                if (s_method == "closed") spec.method = fblmimo::SweepSpec::Method::closed;
                else if (s_method == "high-snr") spec.method = fblmimo::SweepSpec::Method::high_snr;
                else if (s_method == "mc") spec.method = fblmimo::SweepSpec::Method::mc;
                else spec.method = fblmimo::SweepSpec::Method::both;
            }
            if (s_snr.db || s_snr.linear) spec.snr_db = s_snr.as_db();
            if (sweep->count("--epsilon")) spec.epsilon = s_eps;
            if (sweep->count("--n")) spec.n = s_n;
            if (sweep->count("--rate-fraction")) spec.rate_fraction = s_fraction;
            if (sweep->count("--psi")) spec.psi = s_psi;
            if (sweep->count("--xi")) spec.xi = s_xi;
            spec.trials = s_trials;
            spec.seed = s_seed;
            spec.workers = s_workers;

            // validate before touching the output path: an empty range must
            // not leave a file behind
            std::ostringstream buf;
            const std::size_t rows = fblmimo::run_sweep(spec, buf);
            std::ofstream out(s_out, std::ios::binary);
            if (!out) throw std::runtime_error("cannot open output path: " + s_out);
            out << buf.str();
            out.close();
            std::cout << "rows=" << rows << " out=" << s_out << "\n";
            return 0;
        }
    } catch (const fblmimo::validity_error& e) {
        std::cerr << "validity error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
