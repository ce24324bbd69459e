#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "csv.hpp"
#include "dephaselab/error.hpp"
#include "dephaselab/fock.hpp"
#include "dephaselab/meanfield.hpp"
#include "dephaselab/parallel.hpp"
#include "dephaselab/random.hpp"
#include "dephaselab/rmt.hpp"
#include "dephaselab/specfun.hpp"

#ifndef DEPHASELAB_VERSION
#define DEPHASELAB_VERSION "0.0.0"
#endif

namespace dephaselab::cli {
namespace {

using specfun::FormFactor;

Json ext_json(const ExtReal& x) {
    if (x.is_divergent()) return "divergent";
    return x.value();
}

Json number_or_null(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

Json sidecar_header(const RunConfig& cfg) {
    return Json{{"version", version()}, {"command", cfg.command}, {"config", to_json(cfg, false)}};
}

specfun::Cutoff parse_cutoff(const std::string& s) {
    if (s == "hard") return specfun::Cutoff::Hard;
    if (s == "exp") return specfun::Cutoff::Exponential;
    throw std::invalid_argument("cutoff must be hard or exp, got '" + s + "'");
}

std::uint64_t require_seed(const RunConfig& cfg) {
    if (!cfg.seed) throw std::invalid_argument(cfg.command + ": --seed is required for stochastic runs");
    return *cfg.seed;
}

void check_threads(const RunConfig& cfg) {
    if (cfg.threads < 1) throw std::invalid_argument("--threads must be >= 1");
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) throw std::invalid_argument("frequency grid: need at least 2 points and max > min");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return g;
}

rmt::LevelEnsemble parse_ensemble(const RmtConfig& c) {
    rmt::LevelEnsemble ens;
    ens.levels = c.levels;
    ens.delta = c.delta;
    if (c.ensemble == "poisson") {
        ens.kind = rmt::LevelKind::PoissonSpacings;
    } else if (c.ensemble == "goe") {
        ens.kind = rmt::LevelKind::GOEMatrix;
    } else if (c.ensemble == "gue") {
        ens.kind = rmt::LevelKind::GUEMatrix;
    } else if (c.ensemble == "surmise-b1" || c.ensemble == "surmise-b2" || c.ensemble == "surmise-b4") {
        ens.kind = rmt::LevelKind::SurmiseSpacings;
        ens.beta = c.ensemble.back() - '0';
    } else {
        throw std::invalid_argument("unknown ensemble '" + c.ensemble + "'");
    }
    ens.validate();
    return ens;
}

rmt::PairSelection parse_pairs(const std::string& s) {
    if (s == "all") return rmt::PairSelection::AllPairs;
    if (s == "nearest") return rmt::PairSelection::NearestNeighbor;
    throw std::invalid_argument("pairs must be all or nearest, got '" + s + "'");
}

CommandOutput rmt_spacings(const RunConfig& cfg, const rmt::LevelEnsemble& ens, std::uint64_t seed) {
    const auto& c = cfg.rmt;
    if (c.bins < 1 || !(c.s_max > 0.0)) throw std::invalid_argument("spacings: need bins >= 1 and s_max > 0");
    if (c.realizations < 1) throw std::invalid_argument("spacings: need at least one realization");

    std::vector<std::vector<double>> per(c.realizations);
    parallel_for(c.realizations, cfg.threads, [&](std::size_t r) {
        per[r] = rmt::sample_levels(ens, derive_seed(seed, stream::kLevels, r)).spacings();
    });
    std::vector<double> s;
    for (const auto& v : per) {
        for (double x : v) s.push_back(x / ens.delta);
    }

    const auto law = rmt::reference_law(ens);
    const int beta = rmt::reference_beta(ens);
    const double width = c.s_max / static_cast<double>(c.bins);
    std::vector<std::size_t> counts(c.bins, 0);
    for (double x : s) {
        if (x < 0.0 || x >= c.s_max) continue;
        counts[std::min(c.bins - 1, static_cast<std::size_t>(x / width))]++;
    }

    CsvTable table({"s", "empirical_pdf", "theory_pdf"});
    for (std::size_t b = 0; b < c.bins; ++b) {
        const double centre = (static_cast<double>(b) + 0.5) * width;
        table.add_row({CsvTable::number(centre),
                       CsvTable::number(static_cast<double>(counts[b]) / (static_cast<double>(s.size()) * width)),
                       CsvTable::number(rmt::spacing_pdf(law, beta, centre))});
    }

    double mean = 0.0;
    for (double x : s) mean += x;
    mean /= static_cast<double>(s.size());

    CommandOutput out;
    out.primary = table.str();
    out.sidecar = sidecar_header(cfg);
    out.sidecar["ks_statistic"] = rmt::ks_statistic(s, law, beta);
    out.sidecar["reference_law"] = law == rmt::SpacingLaw::Poisson ? "poisson" : "wigner-surmise";
    out.sidecar["reference_beta"] = law == rmt::SpacingLaw::Poisson ? Json(nullptr) : Json(beta);
    out.sidecar["samples"] = s.size();
    out.sidecar["mean_spacing"] = mean;
    return out;
}

rmt::SpectralEstimate rmt_estimate(const RunConfig& cfg, const rmt::LevelEnsemble& ens, std::uint64_t seed,
                                   double default_max, std::size_t default_count) {
    const auto& c = cfg.rmt;
    const double bw = c.bandwidth.value_or(0.05 * c.delta);
    const double hi = c.omega_max.value_or(default_max);
    const auto grid = linspace(c.omega_min.value_or(0.0), hi, c.omega_count ? c.omega_count : default_count);

    rmt::BathSpec bath{ens, rmt::CouplingOptions{c.qbar2, c.zero_diagonal}};
    rmt::EstimatorOptions opt;
    opt.bandwidth = bw;
    opt.pairs = parse_pairs(c.pairs);
    opt.bootstrap_replicates = c.bootstrap;
    opt.bootstrap_seed = seed;
    opt.threads = cfg.threads;
    return rmt::estimate_spectral_function(bath, c.realizations, seed, grid, opt);
}

}  // namespace

std::string version() { return DEPHASELAB_VERSION; }

CommandOutput run_spinboson(const RunConfig& cfg) {
    const auto& c = cfg.spinboson;
    const FormFactor ff(c.kappa, c.lambda, c.omega_c, parse_cutoff(c.cutoff));
    if (!(c.temperature >= 0.0) || !std::isfinite(c.temperature)) {
        throw std::invalid_argument("temperature must be finite and >= 0");
    }
    if (!(c.tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    if (c.kappa <= -2.0) {
        throw NonIntegrable("gamma_t diverges for kappa <= -2: |g|^2 (1 - cos wt) is not integrable at w = 0");
    }
    bool closed = false;
    if (c.method == "auto") {
        closed = specfun::has_closed_form(ff);
    } else if (c.method == "closed-form") {
        if (!specfun::has_closed_form(ff)) throw std::invalid_argument("no closed form for this coupling; use quadrature");
        closed = true;
    } else if (c.method != "quadrature") {
        throw std::invalid_argument("method must be auto, closed-form or quadrature");
    }

    const auto times = c.times.points();
    CsvTable table({"t", "gamma_t", "coherence", "method"});
    bool unconverged = false;
    for (double t : times) {
        double g = 0.0;
        std::string label{specfun::to_string(closed ? specfun::Method::ClosedForm : specfun::Method::Quadrature)};
        if (closed) {
            g = *specfun::decoherence_exponent_closed_form(ff, t);
        } else {
            try {
                g = specfun::decoherence_exponent(ff, t, c.tolerance);
            } catch (const ToleranceNotMet& e) {
                g = e.best_estimate();
                label = "quadrature-unconverged";
                unconverged = true;
            }
        }
        table.add_row({CsvTable::number(t), CsvTable::number(g), CsvTable::number(std::exp(-g)), label});
    }

    CommandOutput out;
    out.primary = table.str();
    Json& j = out.sidecar = sidecar_header(cfg);
    j["regime"] = std::string(specfun::to_string(specfun::classify(ff)));
    j["norm_sq"] = ext_json(specfun::norm_sq(ff));
    j["cloud_energy"] = ext_json(specfun::cloud_energy(ff));

    Json rate;
    rate["analytic"] = ext_json(specfun::asymptotic_rate(ff));
    rate["half_spectral"] = ext_json(specfun::half_spectral_rate(ff));
    std::vector<double> tail(12);
    for (std::size_t i = 0; i < tail.size(); ++i) {
        tail[i] = 10.0 * std::pow(100.0, static_cast<double>(i) / 11.0) / c.omega_c;
    }
    tail.back() = 1000.0 / c.omega_c;
    try {
        const auto est = specfun::extrapolated_rate(ff, tail, c.tolerance);
        rate["extrapolated"] = Json{{"value", est.value}, {"uncertainty", est.uncertainty},
                                    {"t_range", Json::array({tail.front(), tail.back()})}};
    } catch (const NotConverging&) {
        rate["extrapolated"] = nullptr;
    } catch (const ToleranceNotMet&) {
        rate["extrapolated"] = nullptr;
        unconverged = true;
    }
    j["asymptotic_rate"] = rate;
    j["overlaps"] = Json{{"ground_states", specfun::ground_state_overlap(ff)},
                         {"initial_ground", specfun::initial_state_overlap(ff)}};
    j["temperature"] = c.temperature;
    j["thermal_rate"] = ext_json(specfun::rate_from_spectral({ff, c.temperature}));
    j["gamma_t_bath_state"] = "vacuum";
    j["status"] = unconverged ? "tolerance_not_met" : "ok";
    if (unconverged) {
        out.exit_code = kExitTolerance;
        out.message = "quadrature could not certify the requested tolerance; affected rows are flagged";
    }
    return out;
}

CommandOutput run_oracle_check(const RunConfig& cfg) {
    const auto& c = cfg.oracle;
    const FormFactor ff(c.kappa, c.lambda, c.omega_c, parse_cutoff(c.cutoff));
    fock::Scheme scheme;
    if (c.scheme == "midpoint") {
        scheme = fock::Scheme::MidpointUniform;
    } else if (c.scheme == "gauss") {
        scheme = fock::Scheme::GaussNodes;
    } else {
        throw std::invalid_argument("scheme must be midpoint or gauss");
    }
    if (c.modes < 1) throw std::invalid_argument("--modes must be >= 1");
    if (c.n_max < 0) throw std::invalid_argument("--n-max must be >= 0 (0 selects it automatically)");
    const double norm = std::sqrt(std::norm(c.alpha_plus) + std::norm(c.alpha_minus));
    if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("alpha_plus and alpha_minus are both zero");
    const fock::Complex ap = c.alpha_plus / norm;
    const fock::Complex am = c.alpha_minus / norm;

    auto bath = fock::discretize(ff, c.modes, scheme);
    const int n_max = c.n_max > 0 ? c.n_max : fock::recommended_n_max(bath);
    const fock::TruncatedFockSpace space(bath, n_max);
    const auto times = c.times.points();

    fock::OracleRun run;
    try {
        run = fock::propagate_and_reduce(space, ap, am, times);
    } catch (const TruncationLeak& e) {
        std::ostringstream msg;
        msg << e.what() << " (leakage " << format_number(e.leakage()) << " at n_max = " << n_max
            << "); raise --n-max";
        throw TruncationLeak(msg.str(), e.leakage());
    }

    const bool superposition = std::abs(ap) > 0.0 && std::abs(am) > 0.0;
    const double weight = std::abs(ap) * std::abs(am);
    const bool closed = specfun::has_closed_form(ff);
    bool continuum_ok = true;

    CsvTable table({"t", "gamma_oracle", "gamma_discrete", "gamma_continuum", "abs_coherence", "diag_deviation",
                    "energy_drift", "leakage"});
    double max_rel = 0.0;
    double max_gamma = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        CsvTable::Cell oracle_gamma = CsvTable::empty();
        CsvTable::Cell coherence = CsvTable::empty();
        if (superposition) {
            const double expected = weight * std::exp(-run.gamma_discrete[i]);
            const double dev = std::abs(run.abs_coherence[i] - expected);
            max_rel = std::max(max_rel, expected > 0.0 ? dev / expected : dev);
            const double g = run.curve->gamma[i];
            max_gamma = std::max(max_gamma, std::abs(g - run.gamma_discrete[i]));
            oracle_gamma = CsvTable::number(g);
            coherence = CsvTable::number(run.abs_coherence[i]);
        }
        CsvTable::Cell continuum = CsvTable::empty();
        if (closed) {
            continuum = CsvTable::number(*specfun::decoherence_exponent_closed_form(ff, t));
        } else {
            try {
                continuum = CsvTable::number(specfun::decoherence_exponent(ff, t, c.tolerance));
            } catch (const ToleranceNotMet&) {
                continuum_ok = false;
            }
        }
        table.add_row({CsvTable::number(t), oracle_gamma, CsvTable::number(run.gamma_discrete[i]), continuum,
                       coherence, CsvTable::number(std::abs(run.states[i](0, 0).real() - std::norm(ap))),
                       CsvTable::number(std::abs(run.energy[i] - run.energy.front())),
                       CsvTable::number(run.leakage[i])});
    }

    const bool pass = superposition ? max_rel <= 1e-5 : run.max_diagonal_deviation <= 1e-10;

    CommandOutput out;
    out.primary = table.str();
    Json& j = out.sidecar = sidecar_header(cfg);
    j["alpha_plus_normalized"] = Json::array({ap.real(), ap.imag()});
    j["alpha_minus_normalized"] = Json::array({am.real(), am.imag()});
    j["n_max"] = n_max;
    j["dimension"] = space.dimension();
    Json modes = Json::array();
    for (const auto& m : space.bath().modes()) modes.push_back(Json{{"omega", m.omega}, {"g", m.g.real()}});
    j["modes_table"] = modes;
    j["discrete_norm_sq"] = space.bath().norm_sq();
    j["continuum_norm_sq"] = ext_json(specfun::norm_sq(ff));
    j["superposition"] = superposition;
    j["max_coherence_rel_deviation"] = superposition ? Json(max_rel) : Json(nullptr);
    j["max_gamma_deviation"] = superposition ? Json(max_gamma) : Json(nullptr);
    j["max_diagonal_deviation"] = run.max_diagonal_deviation;
    j["max_energy_drift"] = run.max_energy_drift;
    j["max_leakage"] = run.max_leakage;
    j["continuum_converged"] = continuum_ok;
    j["pass"] = pass;
    if (!pass) {
        out.exit_code = kExitFailure;
        out.message = superposition ? "oracle deviates from the discrete closed form by more than 1e-5"
                                    : "diagonal populations drift by more than 1e-10";
    }
    return out;
}

CommandOutput run_rmt(const RunConfig& cfg) {
    check_threads(cfg);
    const auto& c = cfg.rmt;
    const auto ens = parse_ensemble(c);
    const std::uint64_t seed = require_seed(cfg);
    if (c.bandwidth && !(*c.bandwidth > 0.0)) throw std::invalid_argument("--bandwidth must be > 0");
    if (!(c.qbar2 >= 0.0)) throw std::invalid_argument("--qbar2 must be >= 0");

    if (c.mode == "spacings") return rmt_spacings(cfg, ens, seed);

    const auto law = rmt::reference_law(ens);
    const int beta = rmt::reference_beta(ens);
    if (c.mode == "spectral") {
        const auto est = rmt_estimate(cfg, ens, seed, 2.0 * c.delta, 161);
        CsvTable table({"omega", "r_hat", "stderr", "surmise"});
        for (std::size_t i = 0; i < est.omega_grid.size(); ++i) {
            const double w = est.omega_grid[i];
            table.add_row({CsvTable::number(w), CsvTable::number(est.r_hat[i]),
                           CsvTable::number(est.standard_error[i]),
                           CsvTable::number(rmt::surmise_prediction(law, beta, c.qbar2, std::abs(w), c.delta))});
        }
        CommandOutput out;
        out.primary = table.str();
        out.sidecar = sidecar_header(cfg);
        out.sidecar["bandwidth"] = est.bandwidth;
        out.sidecar["samples"] = est.samples;
        return out;
    }
    if (c.mode == "rate") {
        const double bw = c.bandwidth.value_or(0.05 * c.delta);
        const auto est = rmt_estimate(cfg, ens, seed, 10.0 * bw, 41);
        const auto rate = rmt::rate_estimate(est);
        CommandOutput out;
        Json j = sidecar_header(cfg);
        j["gamma"] = rate.gamma;
        j["stderr"] = rate.standard_error;
        j["window"] = Json::array({rate.window_low, rate.window_high});
        j["bandwidth"] = est.bandwidth;
        j["raw_gamma"] = rate.raw_gamma;
        j["negative_intercept"] = rate.negative_intercept;
        j["samples"] = est.samples;
        out.primary = j.dump(2) + "\n";
        out.sidecar = nullptr;
        return out;
    }
    throw std::invalid_argument("rmt mode must be spacings, spectral or rate");
}

CommandOutput run_meanfield(const RunConfig& cfg) {
    check_threads(cfg);
    const auto& c = cfg.meanfield;
    if (c.ensembles != "poisson,goe" && c.ensembles != "goe,poisson") {
        throw std::invalid_argument("--ensembles must be poisson,goe");
    }
    meanfield::CompareConfig mc;
    mc.n = c.n;
    mc.m = c.m;
    mc.delta = c.delta;
    mc.qbar_sq = c.qbar2;
    mc.zero_diagonal = c.zero_diagonal;
    mc.realizations = c.realizations;
    mc.seed = require_seed(cfg);
    mc.times = c.times.points();
    mc.threads = cfg.threads;
    const auto cmp = meanfield::compare_ensembles(mc);

    CsvTable table({"t", "abs_gamma_poisson", "stderr_p", "abs_gamma_goe", "stderr_g"});
    for (std::size_t i = 0; i < cmp.times.size(); ++i) {
        table.add_row({CsvTable::number(cmp.times[i]), CsvTable::number(cmp.poisson.abs_gamma[i]),
                       CsvTable::number(cmp.poisson.standard_error[i]), CsvTable::number(cmp.goe.abs_gamma[i]),
                       CsvTable::number(cmp.goe.standard_error[i])});
    }
    CommandOutput out;
    out.primary = table.str();
    Json& j = out.sidecar = sidecar_header(cfg);
    j["long_time"] = Json{
        {"poisson", Json{{"mean", cmp.poisson.long_time_mean}, {"stderr", cmp.poisson.long_time_stderr}}},
        {"goe", Json{{"mean", cmp.goe.long_time_mean}, {"stderr", cmp.goe.long_time_stderr}}}};
    j["window"] = Json::array({cmp.window_low, cmp.window_high});
    j["window_points"] = cmp.window_points;
    j["separation_sigma"] = number_or_null(cmp.separation);
    j["goe_exceeds_poisson_2sigma"] = cmp.goe_exceeds_poisson;
    return out;
}

CommandOutput run_command(const RunConfig& cfg) {
    if (cfg.command == "spinboson") return run_spinboson(cfg);
    if (cfg.command == "oracle-check") return run_oracle_check(cfg);
    if (cfg.command == "rmt") return run_rmt(cfg);
    if (cfg.command == "meanfield") return run_meanfield(cfg);
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

}  // namespace dephaselab::cli
