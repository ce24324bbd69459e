#include "dephaselab/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dephaselab/error.hpp"
#include "dephaselab/special_functions.hpp"

namespace dephaselab::specfun {
namespace {

constexpr double kPi = std::numbers::pi;

double sin_half_sq(double x) {
    const double s = std::sin(0.5 * x);
    return s * s;
}

quad::QuadResult integrate_checked(const quad::IntegrandSpec& spec, double tol, const char* what) {
    const auto result = quad::integrate(spec, tol);
    if (!result.converged) {
        throw ToleranceNotMet(std::string(what) + ": quadrature could not certify the requested tolerance",
                              result.value, result.error_estimate);
    }
    return result;
}

// 1 - Re (1 + i x)^(-kappa), free of cancellation for small x.
double one_minus_re_power(double kappa, double x) {
    const double re_z = -kappa * 0.5 * std::log1p(x * x);
    const double im_z = -kappa * std::atan(x);
    const double re_expm1 = std::expm1(re_z) * std::cos(im_z) - 2.0 * sin_half_sq(im_z);
    return -re_expm1;
}

// int_0^inf w^(kappa-1) e^(-w/wc) (1 - cos wt) dw for kappa > -2.
double exponential_cutoff_integral(double kappa, double wc, double t) {
    const double x = wc * t;
    if (kappa == 0.0) return 0.5 * std::log1p(x * x);
    if (kappa == -1.0) return t * std::atan(x) - std::log1p(x * x) / (2.0 * wc);
    return std::tgamma(kappa) * std::pow(wc, kappa) * one_minus_re_power(kappa, x);
}

}  // namespace

FormFactor::FormFactor(double kappa, double lambda, double omega_c, Cutoff cutoff)
    : kappa_(kappa), lambda_(lambda), omega_c_(omega_c), cutoff_(cutoff) {
    if (!std::isfinite(kappa)) throw std::invalid_argument("FormFactor: kappa must be finite");
    if (!std::isfinite(lambda) || lambda < 0.0) throw std::invalid_argument("FormFactor: lambda must be >= 0");
    if (!std::isfinite(omega_c) || omega_c <= 0.0) throw std::invalid_argument("FormFactor: omega_c must be > 0");
}

double FormFactor::coupling_sq(double omega) const {
    if (!(omega > 0.0)) throw DomainError("coupling_sq requires omega > 0");
    if (lambda_ == 0.0) return 0.0;
    switch (cutoff_) {
        case Cutoff::Hard:
            return omega > omega_c_ ? 0.0 : lambda_ * std::pow(omega, kappa_ - 1.0);
        case Cutoff::Exponential:
            return lambda_ * std::pow(omega, kappa_ - 1.0) * std::exp(-omega / omega_c_);
    }
    return 0.0;
}

FormFactor FormFactor::scaled(double factor) const {
    return FormFactor(kappa_, lambda_ * factor, omega_c_, cutoff_);
}

double FormFactor::support_end() const {
    if (cutoff_ == Cutoff::Hard) return omega_c_;
    return omega_c_ * (60.0 + 2.0 * std::max(kappa_, 0.0));
}

std::string_view to_string(Cutoff c) {
    return c == Cutoff::Hard ? "hard" : "exp";
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Regular: return "regular";
        case Regime::InfraredSingular: return "infrared-singular";
        case Regime::Unphysical: return "unphysical";
    }
    return "unknown";
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::ClosedForm: return "closed-form";
        case Method::Quadrature: return "quadrature";
        case Method::FockOracle: return "fock-oracle";
    }
    return "unknown";
}

DecoherenceCurve DecoherenceCurve::from_gamma(std::vector<double> times, std::vector<double> gamma,
                                              Method method, double tolerance) {
    if (times.size() != gamma.size()) throw std::invalid_argument("DecoherenceCurve: size mismatch");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
            throw std::invalid_argument("DecoherenceCurve: times must be ascending and >= 0");
        }
        if (std::isnan(gamma[i]) || gamma[i] < -1e-12) {
            throw std::invalid_argument("DecoherenceCurve: gamma must be >= 0");
        }
        gamma[i] = std::max(gamma[i], 0.0);
    }
    if (!times.empty() && times[0] == 0.0 && gamma[0] != 0.0) {
        throw std::invalid_argument("DecoherenceCurve: gamma at t = 0 must vanish");
    }
    DecoherenceCurve curve;
    curve.coherence.reserve(gamma.size());
    for (double g : gamma) curve.coherence.push_back(std::exp(-g));
    curve.times = std::move(times);
    curve.gamma = std::move(gamma);
    curve.method = method;
    curve.tolerance = tolerance;
    return curve;
}

Regime classify(double kappa) noexcept {
    if (kappa > 0.0) return Regime::Regular;
    if (kappa > -1.0) return Regime::InfraredSingular;
    return Regime::Unphysical;
}

ExtReal norm_sq(const FormFactor& ff) {
    if (ff.lambda() == 0.0) return ExtReal::finite(0.0);
    if (ff.kappa() <= 0.0) return ExtReal::divergent();
    const double k = ff.kappa();
    if (ff.cutoff() == Cutoff::Hard) return ExtReal::finite(ff.lambda() * std::pow(ff.omega_c(), k) / k);
    return ExtReal::finite(ff.lambda() * std::tgamma(k) * std::pow(ff.omega_c(), k));
}

ExtReal norm_sq_quadrature(const FormFactor& ff, double tol) {
    if (ff.lambda() == 0.0) return ExtReal::finite(0.0);
    quad::IntegrandSpec spec{[&ff](double w) { return ff.coupling_sq(w); }, 0.0, ff.support_end(),
                             ff.kappa() - 1.0, std::nullopt};
    try {
        return ExtReal::finite(integrate_checked(spec, tol, "norm_sq_quadrature").value);
    } catch (const NonIntegrable&) {
        return ExtReal::divergent();
    }
}

ExtReal cloud_energy(const FormFactor& ff) {
    if (ff.lambda() == 0.0) return ExtReal::finite(0.0);
    if (ff.kappa() <= -1.0) return ExtReal::divergent();
    const double k1 = ff.kappa() + 1.0;
    if (ff.cutoff() == Cutoff::Hard) return ExtReal::finite(ff.lambda() * std::pow(ff.omega_c(), k1) / k1);
    return ExtReal::finite(ff.lambda() * std::tgamma(k1) * std::pow(ff.omega_c(), k1));
}

ExtReal cloud_energy_quadrature(const FormFactor& ff, double tol) {
    if (ff.lambda() == 0.0) return ExtReal::finite(0.0);
    quad::IntegrandSpec spec{[&ff](double w) { return w * ff.coupling_sq(w); }, 0.0, ff.support_end(),
                             ff.kappa(), std::nullopt};
    try {
        return ExtReal::finite(integrate_checked(spec, tol, "cloud_energy_quadrature").value);
    } catch (const NonIntegrable&) {
        return ExtReal::divergent();
    }
}

double decoherence_exponent(const FormFactor& ff, double t, double tol) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("decoherence_exponent: t must be >= 0");
    if (ff.kappa() <= -2.0) {
        throw NonIntegrable("decoherence_exponent: kappa <= -2 makes gamma_t infinite");
    }
    if (t == 0.0 || ff.lambda() == 0.0) return 0.0;
    quad::IntegrandSpec spec{
        [&ff, t](double w) { return 8.0 * ff.coupling_sq(w) * sin_half_sq(w * t); },
        0.0, ff.support_end(), ff.kappa() + 1.0, t};
    return integrate_checked(spec, tol, "decoherence_exponent").value;
}

bool has_closed_form(const FormFactor& ff) noexcept {
    const double k = ff.kappa();
    if (ff.cutoff() == Cutoff::Exponential) return k > -2.0;
    return k == -1.0 || k == 0.0 || k == 1.0;
}

std::optional<double> decoherence_exponent_closed_form(const FormFactor& ff, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("closed form: t must be >= 0");
    if (!has_closed_form(ff)) return std::nullopt;
    if (t == 0.0 || ff.lambda() == 0.0) return 0.0;
    const double lam = ff.lambda();
    const double wc = ff.omega_c();
    const double x = wc * t;
    if (ff.cutoff() == Cutoff::Exponential) {
        return 4.0 * lam * exponential_cutoff_integral(ff.kappa(), wc, t);
    }
    if (ff.kappa() == 1.0) {
        // 4 lam (wc - sin(x)/t) = (4 lam / t)(x - sin x)
        const double x_minus_sin =
            x < 1e-3 ? x * x * x / 6.0 * (1.0 - x * x / 20.0) : x - std::sin(x);
        return 4.0 * lam * x_minus_sin / t;
    }
    if (ff.kappa() == 0.0) {
        return 4.0 * lam * special::entire_cosine_integral(x);
    }
    // kappa = -1: 4 lam (t Si(x) - (1 - cos x)/wc)
    return 4.0 * lam / wc * (x * special::sine_integral(x) - 2.0 * sin_half_sq(x));
}

DecoherenceCurve decoherence_curve(const FormFactor& ff, std::span<const double> times, Method method,
                                   double tol) {
    std::vector<double> gamma;
    gamma.reserve(times.size());
    switch (method) {
        case Method::Quadrature:
            for (double t : times) gamma.push_back(decoherence_exponent(ff, t, tol));
            break;
        case Method::ClosedForm:
            if (!has_closed_form(ff)) {
                throw std::invalid_argument("decoherence_curve: no closed form for this form factor");
            }
            for (double t : times) gamma.push_back(*decoherence_exponent_closed_form(ff, t));
            break;
        case Method::FockOracle:
            throw std::invalid_argument("decoherence_curve: the Fock oracle lives in dephaselab::fock");
    }
    return DecoherenceCurve::from_gamma({times.begin(), times.end()}, std::move(gamma), method, tol);
}

ExtReal low_frequency_strength(const FormFactor& ff) {
    if (ff.lambda() == 0.0 || ff.kappa() > -1.0) return ExtReal::finite(0.0);
    if (ff.kappa() == -1.0) return ExtReal::finite(ff.lambda());
    return ExtReal::divergent();
}

ExtReal asymptotic_rate(const FormFactor& ff) { return low_frequency_strength(ff).scaled(2.0 * kPi); }

ExtReal half_spectral_rate(const FormFactor& ff) { return low_frequency_strength(ff).scaled(kPi); }

quad::LimitEstimate extrapolated_rate(const FormFactor& ff, std::span<const double> t_grid, double tol) {
    return quad::limit_at_infinity([&](double t) { return decoherence_exponent(ff, t, tol) / t; }, t_grid);
}

double spectral_density_vacuum(const FormFactor& ff, double omega) {
    if (!(omega >= 0.0)) throw std::invalid_argument("spectral_density_vacuum: omega must be >= 0");
    if (omega == 0.0) {
        return low_frequency_strength(ff).scaled(2.0 * kPi).value_or_infinity();
    }
    return 2.0 * kPi * omega * omega * ff.coupling_sq(omega);
}

double spectral_density_thermal(const SpectralFunction& sf, double omega) {
    if (!(sf.temperature >= 0.0)) throw std::invalid_argument("spectral_density_thermal: T must be >= 0");
    if (!(omega > 0.0)) {
        throw DomainError("spectral_density_thermal: omega must be > 0; use rate_from_spectral for the limit");
    }
    const double vacuum = spectral_density_vacuum(sf.form_factor, omega);
    if (sf.temperature == 0.0) return vacuum;
    return vacuum / -std::expm1(-omega / sf.temperature);
}

ExtReal rate_from_spectral(const SpectralFunction& sf) {
    const FormFactor& ff = sf.form_factor;
    if (!(sf.temperature >= 0.0)) throw std::invalid_argument("rate_from_spectral: T must be >= 0");
    if (sf.temperature == 0.0) return half_spectral_rate(ff);
    // R_T ~ 2 pi lambda T w^kappa as w -> 0
    if (ff.lambda() == 0.0 || ff.kappa() > 0.0) return ExtReal::finite(0.0);
    if (ff.kappa() == 0.0) return ExtReal::finite(kPi * ff.lambda() * sf.temperature);
    return ExtReal::divergent();
}

double ground_state_overlap(const FormFactor& ff) {
    const ExtReal n = norm_sq(ff);
    return n.is_divergent() ? 0.0 : std::exp(-2.0 * n.value());
}

double initial_state_overlap(const FormFactor& ff) {
    const ExtReal n = norm_sq(ff);
    return n.is_divergent() ? 0.0 : std::exp(-n.value());
}

}  // namespace dephaselab::specfun
