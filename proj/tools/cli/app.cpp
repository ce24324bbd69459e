#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "commands.hpp"
#include "csv.hpp"
#include "dephaselab/error.hpp"

namespace dephaselab::cli {
namespace {

struct GridText {
    std::string t_grid;
    std::string omega_grid;
    std::string alpha_plus;
    std::string alpha_minus;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

double to_double(const std::string& s, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::logic_error&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw std::invalid_argument(std::string(what) + ": bad number '" + s + "'");
    return v;
}

std::size_t to_count(const std::string& s, const char* what) {
    const double v = to_double(s, what);
    if (v < 0.0 || v != std::floor(v)) throw std::invalid_argument(std::string(what) + ": bad count '" + s + "'");
    return static_cast<std::size_t>(v);
}

void add_time_flags(CLI::App* sub, TimeGrid& g, GridText& text) {
    auto* grid = sub->add_option("--t-grid", text.t_grid, "Time grid MIN:MAX:COUNT[:log|lin]");
    sub->add_option("--t-min", g.t_min, "First time")->capture_default_str()->excludes(grid);
    sub->add_option("--t-max", g.t_max, "Last time")->capture_default_str()->excludes(grid);
    sub->add_option("--t-count", g.count, "Number of time points")->capture_default_str()->excludes(grid);
    sub->add_option("--t-points", g.spacing, "Time point spacing")
        ->check(CLI::IsMember({"log", "lin"}))
        ->capture_default_str()
        ->excludes(grid);
}

void apply_time_grid(const std::string& text, TimeGrid& g) {
    const auto parts = split(text, ':');
    if (parts.size() != 3 && parts.size() != 4) throw std::invalid_argument("--t-grid expects MIN:MAX:COUNT[:log|lin]");
    g.t_min = to_double(parts[0], "--t-grid");
    g.t_max = to_double(parts[1], "--t-grid");
    g.count = to_count(parts[2], "--t-grid");
    if (parts.size() == 4) g.spacing = parts[3];
}

std::optional<std::string> prescan_config(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return std::nullopt;
}

std::string sidecar_path(const RunConfig& cfg) {
    if (!cfg.sidecar.empty()) return cfg.sidecar;
    if (cfg.output.empty()) return {};
    std::filesystem::path p(cfg.output);
    p.replace_extension(".json");
    if (p.string() == cfg.output) return cfg.output + ".json";
    return p.string();
}

int run_parsed(RunConfig& cfg, const std::string& save_config, std::ostream& out, std::ostream& err) {
    if (!save_config.empty()) write_file(save_config, to_json(cfg).dump(2) + "\n");
    const CommandOutput result = run_command(cfg);
    if (cfg.output.empty()) {
        out << result.primary;
        out.flush();
    } else {
        write_file(cfg.output, result.primary);
    }
    if (!result.sidecar.is_null()) {
        const std::string path = sidecar_path(cfg);
        if (!path.empty()) write_file(path, result.sidecar.dump(2) + "\n");
    }
    if (!result.message.empty()) err << "dephaselab: " << result.message << "\n";
    return result.exit_code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    if (const char* env = std::getenv("DEPHASELAB_THREADS")) {
        try {
            cfg.threads = std::stoi(env);
        } catch (const std::logic_error&) {
            err << "dephaselab: ignoring invalid DEPHASELAB_THREADS='" << env << "'\n";
        }
    }
    try {
        if (const auto path = prescan_config(args)) {
            std::ifstream f(*path, std::ios::binary);
            if (!f) throw std::invalid_argument("cannot read config '" + *path + "'");
            const Json j = Json::parse(f);
            const int env_threads = cfg.threads;
            cfg = from_json(j);
            if (!j.contains("threads")) cfg.threads = env_threads;
        }
    } catch (const std::exception& e) {
        err << "dephaselab: " << e.what() << "\n";
        return kExitUsage;
    }
    const std::string config_command = cfg.command;

    CLI::App app{"Dephasing of a qubit by bosonic and random-matrix environments", "dephaselab"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    std::string config_path;
    std::string save_config;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "Load parameters from a JSON config (flags override it)");
    app.add_option("--save-config", save_config, "Write the effective config as JSON");
    auto* seed_opt = app.add_option("--seed", seed, "Master seed (required for rmt and meanfield)");
    app.add_option("-o,--output", cfg.output, "CSV output path (default: stdout)");
    app.add_option("--sidecar", cfg.sidecar, "JSON sidecar path (default: output with .json extension)");
    app.add_option("--threads", cfg.threads, "Worker threads (fallback: DEPHASELAB_THREADS)")->capture_default_str();

    GridText text;

    auto* sb = app.add_subcommand("spinboson", "Decoherence exponent of the continuum spin-boson model");
    {
        auto& c = cfg.spinboson;
        sb->add_option("--kappa", c.kappa, "Coupling exponent")->capture_default_str();
        sb->add_option("--lambda", c.lambda, "Coupling strength")->capture_default_str();
        sb->add_option("--omega-c", c.omega_c, "Cutoff frequency")->capture_default_str();
        sb->add_option("--cutoff", c.cutoff)->check(CLI::IsMember({"hard", "exp"}))->capture_default_str();
        sb->add_option("--temperature", c.temperature, "Bath temperature for the thermal rate")->capture_default_str();
        sb->add_option("--method", c.method)
            ->check(CLI::IsMember({"auto", "closed-form", "quadrature"}))
            ->capture_default_str();
        sb->add_option("--tolerance", c.tolerance, "Quadrature tolerance")->capture_default_str();
        add_time_flags(sb, c.times, text);
    }

    auto* oc = app.add_subcommand("oracle-check", "Truncated-Fock propagation against the discrete closed form");
    {
        auto& c = cfg.oracle;
        oc->add_option("--modes", c.modes, "Number of bath modes K")->capture_default_str();
        oc->add_option("--n-max", c.n_max, "Occupation cutoff per mode (0: automatic)")->capture_default_str();
        oc->add_option("--kappa", c.kappa)->capture_default_str();
        oc->add_option("--lambda", c.lambda)->capture_default_str();
        oc->add_option("--omega-c", c.omega_c)->capture_default_str();
        oc->add_option("--cutoff", c.cutoff)->check(CLI::IsMember({"hard", "exp"}))->capture_default_str();
        oc->add_option("--scheme", c.scheme)->check(CLI::IsMember({"midpoint", "gauss"}))->capture_default_str();
        oc->add_option("--alpha-plus", text.alpha_plus, "Amplitude of psi_+ (a, a+bi or re,im)");
        oc->add_option("--alpha-minus", text.alpha_minus, "Amplitude of psi_-");
        oc->add_option("--tolerance", c.tolerance, "Continuum quadrature tolerance")->capture_default_str();
        add_time_flags(oc, c.times, text);
    }

    auto* rm = app.add_subcommand("rmt", "Random level environments: spacings, spectral function, rate");
    std::optional<double> bandwidth;
    {
        auto& c = cfg.rmt;
        rm->add_option("mode", c.mode, "spacings, spectral or rate")
            ->check(CLI::IsMember({"spacings", "spectral", "rate"}))
            ->required();
        rm->add_option("--ensemble", c.ensemble)
            ->check(CLI::IsMember({"poisson", "goe", "gue", "surmise-b1", "surmise-b2", "surmise-b4"}))
            ->capture_default_str();
        rm->add_option("--M", c.levels, "Levels per realization")->capture_default_str();
        rm->add_option("--delta", c.delta, "Mean level spacing")->capture_default_str();
        rm->add_option("--realizations", c.realizations)->capture_default_str();
        rm->add_option("--bandwidth", bandwidth, "Kernel width (default 0.05 delta)");
        rm->add_option("--qbar2", c.qbar2, "Mean off-diagonal |Q|^2")->capture_default_str();
        rm->add_flag("--zero-diagonal,!--no-zero-diagonal", c.zero_diagonal, "Drop the diagonal of Q");
        rm->add_option("--pairs", c.pairs)->check(CLI::IsMember({"all", "nearest"}))->capture_default_str();
        rm->add_option("--bootstrap", c.bootstrap, "Bootstrap replicates")->capture_default_str();
        rm->add_option("--omega-grid", text.omega_grid, "Frequency grid MIN:MAX:COUNT");
        rm->add_option("--bins", c.bins, "Histogram bins (spacings)")->capture_default_str();
        rm->add_option("--s-max", c.s_max, "Histogram range (spacings)")->capture_default_str();
    }

    auto* mf = app.add_subcommand("meanfield", "Finite-N qubit dephasing by Poisson and GOE baths");
    {
        auto& c = cfg.meanfield;
        mf->add_option("--N", c.n, "Number of subsystems")->capture_default_str();
        mf->add_option("--M", c.m, "Levels per subsystem")->capture_default_str();
        mf->add_option("--delta", c.delta)->capture_default_str();
        mf->add_option("--qbar2", c.qbar2)->capture_default_str();
        mf->add_option("--ensembles", c.ensembles)->capture_default_str();
        mf->add_option("--realizations", c.realizations)->capture_default_str();
        mf->add_flag("--zero-diagonal,!--no-zero-diagonal", c.zero_diagonal, "Drop the diagonal of Q");
        add_time_flags(mf, c.times, text);
    }
    for (auto* sub : {sb, oc, rm, mf}) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const auto* sub = app.get_subcommands().front();
        cfg.command = sub->get_name();
        if (!config_command.empty() && config_command != cfg.command) {
            throw std::invalid_argument("config is for '" + config_command + "', not '" + cfg.command + "'");
        }
        if (seed_opt->count() > 0) cfg.seed = seed;
        if (bandwidth) cfg.rmt.bandwidth = bandwidth;
        if (!text.t_grid.empty()) {
            TimeGrid& g = cfg.command == "spinboson" ? cfg.spinboson.times
                          : cfg.command == "oracle-check" ? cfg.oracle.times
                                                          : cfg.meanfield.times;
            apply_time_grid(text.t_grid, g);
        }
        if (!text.omega_grid.empty()) {
            const auto parts = split(text.omega_grid, ':');
            if (parts.size() != 3) throw std::invalid_argument("--omega-grid expects MIN:MAX:COUNT");
            cfg.rmt.omega_min = to_double(parts[0], "--omega-grid");
            cfg.rmt.omega_max = to_double(parts[1], "--omega-grid");
            cfg.rmt.omega_count = to_count(parts[2], "--omega-grid");
        }
        if (!text.alpha_plus.empty()) cfg.oracle.alpha_plus = parse_complex(text.alpha_plus);
        if (!text.alpha_minus.empty()) cfg.oracle.alpha_minus = parse_complex(text.alpha_minus);
        if (cfg.threads < 1) throw std::invalid_argument("--threads must be >= 1");

        return run_parsed(cfg, save_config, out, err);
    } catch (const TruncationLeak& e) {
        err << "dephaselab: " << e.what() << "\n";
        return kExitTruncation;
    } catch (const ToleranceNotMet& e) {
        err << "dephaselab: " << e.what() << "\n";
        return kExitTolerance;
    } catch (const InsufficientSamples& e) {
        err << "dephaselab: " << e.what() << "\n";
        return kExitSamples;
    } catch (const DimensionCap& e) {
        err << "dephaselab: " << e.what() << "\n";
        return kExitDimension;
    } catch (const DomainError& e) {
        err << "dephaselab: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UnsupportedRegime& e) {
        err << "dephaselab: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NonIntegrable& e) {
        err << "dephaselab: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "dephaselab: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "dephaselab: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "dephaselab: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace dephaselab::cli
