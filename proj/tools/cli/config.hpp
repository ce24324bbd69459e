#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace dephaselab::cli {

using Json = nlohmann::ordered_json;

/// Time grid: `count` points on [t_min, t_max], evenly ("lin") or
/// geometrically ("log") spaced. A log grid with t_min = 0 is 0 followed by
/// count - 1 points from t_max / 1e4 to t_max.
struct TimeGrid {
    double t_min = 0.0;
    double t_max = 100.0;
    std::size_t count = 101;
    std::string spacing = "log";

    std::vector<double> points() const;
};

struct SpinBosonConfig {
    double kappa = 1.0;
    double lambda = 1.0;
    double omega_c = 1.0;
    std::string cutoff = "hard";
    double temperature = 0.0;
    TimeGrid times{0.0, 100.0, 101, "log"};
    std::string method = "auto";  ///< auto, closed-form or quadrature
    double tolerance = 1e-8;
};

struct OracleConfig {
    std::size_t modes = 2;
    int n_max = 0;  ///< 0 selects the occupation policy
    double kappa = 1.0;
    double lambda = 0.05;
    double omega_c = 1.0;
    std::string cutoff = "hard";
    std::string scheme = "midpoint";
    std::complex<double> alpha_plus{0.7071067811865476, 0.0};
    std::complex<double> alpha_minus{0.7071067811865476, 0.0};
    TimeGrid times{0.0, 50.0, 50, "lin"};
    double tolerance = 1e-8;
};

struct RmtConfig {
    std::string mode = "spacings";  ///< spacings, spectral or rate
    std::string ensemble = "poisson";
    std::size_t levels = 200;
    double delta = 1.0;
    std::size_t realizations = 200;
    std::optional<double> bandwidth;  ///< defaults to 0.05 delta
    double qbar2 = 1.0;
    bool zero_diagonal = false;
    std::string pairs = "all";
    std::size_t bootstrap = 200;
    std::optional<double> omega_min;
    std::optional<double> omega_max;
    std::size_t omega_count = 0;  ///< 0 selects a mode-specific default
    std::size_t bins = 50;
    double s_max = 5.0;
};

struct MeanFieldConfig {
    std::size_t n = 32;
    std::size_t m = 64;
    double delta = 1.0;
    double qbar2 = 0.01;
    std::string ensembles = "poisson,goe";
    std::size_t realizations = 20;
    bool zero_diagonal = true;
    TimeGrid times{1.0, 1000.0, 61, "log"};
};

struct RunConfig {
    std::string command;
    std::optional<std::uint64_t> seed;
    std::string output;   ///< empty: CSV to stdout
    std::string sidecar;  ///< empty: next to output with a .json extension
    int threads = 1;
    SpinBosonConfig spinboson;
    OracleConfig oracle;
    RmtConfig rmt;
    MeanFieldConfig meanfield;
};

/// Parameters of the selected command only; `with_runtime` adds seed,
/// output paths and thread count.
Json to_json(const RunConfig& cfg, bool with_runtime = true);
/// Inverse of to_json. Missing keys keep their defaults; unknown keys throw.
RunConfig from_json(const Json& j);

std::complex<double> parse_complex(const std::string& text);
std::string format_complex(std::complex<double> z);

}  // namespace dephaselab::cli
