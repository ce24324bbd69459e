#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace dephaselab::cli {
namespace {

Json grid_json(const TimeGrid& g) {
    return Json{{"t_min", g.t_min}, {"t_max", g.t_max}, {"count", g.count}, {"spacing", g.spacing}};
}

class Reader {
public:
    explicit Reader(const Json& j) : j_(j) {
        if (!j_.is_object()) throw std::invalid_argument("config: expected a JSON object");
    }

    template <typename T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (j_.contains(key)) out = j_.at(key).get<T>();
    }

    template <typename T>
    void get(const char* key, std::optional<T>& out) {
        seen_.insert(key);
        if (j_.contains(key) && !j_.at(key).is_null()) out = j_.at(key).get<T>();
    }

    void get(const char* key, std::complex<double>& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        const Json& v = j_.at(key);
        if (v.is_array() && v.size() == 2) {
            out = {v[0].get<double>(), v[1].get<double>()};
        } else if (v.is_number()) {
            out = {v.get<double>(), 0.0};
        } else {
            out = parse_complex(v.get<std::string>());
        }
    }

    void get(const char* key, TimeGrid& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        Reader r(j_.at(key));
        r.get("t_min", out.t_min);
        r.get("t_max", out.t_max);
        r.get("count", out.count);
        r.get("spacing", out.spacing);
        r.finish(key);
    }

    void finish(const std::string& where) const {
        for (const auto& item : j_.items()) {
            if (!seen_.contains(item.key())) {
                throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + where);
            }
        }
    }

private:
    const Json& j_;
    std::set<std::string> seen_;
};

}  // namespace

std::vector<double> TimeGrid::points() const {
    if (count < 1) throw std::invalid_argument("time grid: count must be >= 1");
    if (!(t_min >= 0.0) || !(t_max >= t_min) || !std::isfinite(t_max)) {
        throw std::invalid_argument("time grid: need 0 <= t_min <= t_max");
    }
    if (spacing != "log" && spacing != "lin") throw std::invalid_argument("time grid: spacing must be log or lin");
    if (count == 1) return {t_max};
    if (t_min == t_max) throw std::invalid_argument("time grid: t_min == t_max with more than one point");
    std::vector<double> g;
    g.reserve(count);
    if (spacing == "lin") {
        for (std::size_t i = 0; i < count; ++i) {
            g.push_back(i + 1 == count ? t_max : t_min + (t_max - t_min) * static_cast<double>(i) / static_cast<double>(count - 1));
        }
        return g;
    }
    double lo = t_min;
    std::size_t n = count;
    if (t_min == 0.0) {
        g.push_back(0.0);
        lo = t_max * 1e-4;
        --n;
    }
    if (n == 1) {
        g.push_back(t_max);
        return g;
    }
    const double ratio = std::log(t_max / lo);
    for (std::size_t i = 0; i < n; ++i) {
        g.push_back(i + 1 == n ? t_max : lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    return g;
}

Json to_json(const RunConfig& cfg, bool with_runtime) {
    Json j;
    j["command"] = cfg.command;
    if (cfg.command == "spinboson") {
        const auto& c = cfg.spinboson;
        j["kappa"] = c.kappa;
        j["lambda"] = c.lambda;
        j["omega_c"] = c.omega_c;
        j["cutoff"] = c.cutoff;
        j["temperature"] = c.temperature;
        j["times"] = grid_json(c.times);
        j["method"] = c.method;
        j["tolerance"] = c.tolerance;
    } else if (cfg.command == "oracle-check") {
        const auto& c = cfg.oracle;
        j["modes"] = c.modes;
        j["n_max"] = c.n_max;
        j["kappa"] = c.kappa;
        j["lambda"] = c.lambda;
        j["omega_c"] = c.omega_c;
        j["cutoff"] = c.cutoff;
        j["scheme"] = c.scheme;
        j["alpha_plus"] = Json::array({c.alpha_plus.real(), c.alpha_plus.imag()});
        j["alpha_minus"] = Json::array({c.alpha_minus.real(), c.alpha_minus.imag()});
        j["times"] = grid_json(c.times);
        j["tolerance"] = c.tolerance;
    } else if (cfg.command == "rmt") {
        const auto& c = cfg.rmt;
        j["mode"] = c.mode;
        j["ensemble"] = c.ensemble;
        j["M"] = c.levels;
        j["delta"] = c.delta;
        j["realizations"] = c.realizations;
        j["bandwidth"] = c.bandwidth ? Json(*c.bandwidth) : Json(nullptr);
        j["qbar2"] = c.qbar2;
        j["zero_diagonal"] = c.zero_diagonal;
        j["pairs"] = c.pairs;
        j["bootstrap"] = c.bootstrap;
        j["omega_min"] = c.omega_min ? Json(*c.omega_min) : Json(nullptr);
        j["omega_max"] = c.omega_max ? Json(*c.omega_max) : Json(nullptr);
        j["omega_count"] = c.omega_count;
        j["bins"] = c.bins;
        j["s_max"] = c.s_max;
    } else if (cfg.command == "meanfield") {
        const auto& c = cfg.meanfield;
        j["N"] = c.n;
        j["M"] = c.m;
        j["delta"] = c.delta;
        j["qbar2"] = c.qbar2;
        j["ensembles"] = c.ensembles;
        j["realizations"] = c.realizations;
        j["zero_diagonal"] = c.zero_diagonal;
        j["times"] = grid_json(c.times);
    }
    if (cfg.seed) {
        j["seed"] = *cfg.seed;
    } else {
        j["seed"] = nullptr;
    }
    if (with_runtime) {
        j["output"] = cfg.output;
        j["sidecar"] = cfg.sidecar;
        j["threads"] = cfg.threads;
    }
    return j;
}

RunConfig from_json(const Json& j) {
    RunConfig cfg;
    Reader r(j);
    r.get("command", cfg.command);
    r.get("seed", cfg.seed);
    r.get("output", cfg.output);
    r.get("sidecar", cfg.sidecar);
    r.get("threads", cfg.threads);
    if (cfg.command == "spinboson") {
        auto& c = cfg.spinboson;
        r.get("kappa", c.kappa);
        r.get("lambda", c.lambda);
        r.get("omega_c", c.omega_c);
        r.get("cutoff", c.cutoff);
        r.get("temperature", c.temperature);
        r.get("times", c.times);
        r.get("method", c.method);
        r.get("tolerance", c.tolerance);
    } else if (cfg.command == "oracle-check") {
        auto& c = cfg.oracle;
        r.get("modes", c.modes);
        r.get("n_max", c.n_max);
        r.get("kappa", c.kappa);
        r.get("lambda", c.lambda);
        r.get("omega_c", c.omega_c);
        r.get("cutoff", c.cutoff);
        r.get("scheme", c.scheme);
        r.get("alpha_plus", c.alpha_plus);
        r.get("alpha_minus", c.alpha_minus);
        r.get("times", c.times);
        r.get("tolerance", c.tolerance);
    } else if (cfg.command == "rmt") {
        auto& c = cfg.rmt;
        r.get("mode", c.mode);
        r.get("ensemble", c.ensemble);
        r.get("M", c.levels);
        r.get("delta", c.delta);
        r.get("realizations", c.realizations);
        r.get("bandwidth", c.bandwidth);
        r.get("qbar2", c.qbar2);
        r.get("zero_diagonal", c.zero_diagonal);
        r.get("pairs", c.pairs);
        r.get("bootstrap", c.bootstrap);
        r.get("omega_min", c.omega_min);
        r.get("omega_max", c.omega_max);
        r.get("omega_count", c.omega_count);
        r.get("bins", c.bins);
        r.get("s_max", c.s_max);
    } else if (cfg.command == "meanfield") {
        auto& c = cfg.meanfield;
        r.get("N", c.n);
        r.get("M", c.m);
        r.get("delta", c.delta);
        r.get("qbar2", c.qbar2);
        r.get("ensembles", c.ensembles);
        r.get("realizations", c.realizations);
        r.get("zero_diagonal", c.zero_diagonal);
        r.get("times", c.times);
    } else {
        throw std::invalid_argument("config: unknown command '" + cfg.command + "'");
    }
    r.finish("config");
    return cfg;
}

std::complex<double> parse_complex(const std::string& text) {
    auto to_double = [&](const std::string& s) {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    };
    try {
        if (const auto comma = text.find(','); comma != std::string::npos) {
            return {to_double(text.substr(0, comma)), to_double(text.substr(comma + 1))};
        }
        if (text.empty() || (text.back() != 'i' && text.back() != 'j')) return {to_double(text), 0.0};
        const std::string body = text.substr(0, text.size() - 1);
        std::size_t split = std::string::npos;
        for (std::size_t k = body.size(); k-- > 1;) {
            if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
                split = k;
                break;
            }
        }
        const std::string re = split == std::string::npos ? "" : body.substr(0, split);
        const std::string im = split == std::string::npos ? body : body.substr(split);
        double imag = 0.0;
        if (im.empty() || im == "+") {
            imag = 1.0;
        } else if (im == "-") {
            imag = -1.0;
        } else {
            imag = to_double(im);
        }
        return {re.empty() ? 0.0 : to_double(re), imag};
    } catch (const std::logic_error&) {
    }
    throw std::invalid_argument("cannot parse complex number '" + text + "'");
}

std::string format_complex(std::complex<double> z) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

}  // namespace dephaselab::cli
