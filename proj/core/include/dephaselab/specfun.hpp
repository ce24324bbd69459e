#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dephaselab/ext_real.hpp"
#include "dephaselab/quad.hpp"

/// Analytic quantities of the pure-dephasing spin-boson model
///   H_{+-} = int w a^+(w) a(w) dw  +-  int w (conj(g) a + g a^+) dw
/// with power-law coupling |g(w)|^2 = lambda w^(kappa-1) below a cutoff.
namespace dephaselab::specfun {

inline constexpr double kDefaultTolerance = 1e-8;

enum class Cutoff {
    Hard,         ///< |g(w)|^2 = 0 for w > omega_c
    Exponential,  ///< extra factor exp(-w/omega_c); not part of the original model
};

class FormFactor {
public:
    FormFactor(double kappa, double lambda, double omega_c = 1.0, Cutoff cutoff = Cutoff::Hard);

    double kappa() const noexcept { return kappa_; }
    double lambda() const noexcept { return lambda_; }
    double omega_c() const noexcept { return omega_c_; }
    Cutoff cutoff() const noexcept { return cutoff_; }

    /// |g(w)|^2 for w > 0.
    double coupling_sq(double omega) const;

    /// Copy with lambda multiplied by factor >= 0.
    FormFactor scaled(double factor) const;

    /// Upper integration limit: omega_c for Hard, a point beyond which the
    /// exponential tail is below double precision for Exponential.
    double support_end() const;

private:
    double kappa_;
    double lambda_;
    double omega_c_;
    Cutoff cutoff_;
};

enum class Regime {
    Regular,           ///< kappa > 0: ground states exist
    InfraredSingular,  ///< -1 < kappa <= 0: bounded below, no Fock-space ground state
    Unphysical,        ///< kappa <= -1
};

enum class Method { ClosedForm, Quadrature, FockOracle };

std::string_view to_string(Cutoff c);
std::string_view to_string(Regime r);
std::string_view to_string(Method m);

/// Sampled decoherence exponent gamma_t and coherence exp(-gamma_t).
struct DecoherenceCurve {
    std::vector<double> times;
    std::vector<double> gamma;
    std::vector<double> coherence;
    Method method = Method::Quadrature;
    double tolerance = kDefaultTolerance;

    /// Validates the grid and gamma values and fills coherence.
    static DecoherenceCurve from_gamma(std::vector<double> times, std::vector<double> gamma,
                                       Method method, double tolerance);
};

struct SpectralFunction {
    FormFactor form_factor;
    double temperature = 0.0;  ///< same units as omega; 0 is the vacuum
};

Regime classify(double kappa) noexcept;
inline Regime classify(const FormFactor& ff) noexcept { return classify(ff.kappa()); }

/// ||g||^2 = int |g|^2 dw from its closed form; Divergent for kappa <= 0.
ExtReal norm_sq(const FormFactor& ff);
/// Same quantity by quadrature; Divergent when the integrand is not integrable.
ExtReal norm_sq_quadrature(const FormFactor& ff, double tol = kDefaultTolerance);

/// Cloud energy E_g = int w |g|^2 dw; Divergent for kappa <= -1.
ExtReal cloud_energy(const FormFactor& ff);
ExtReal cloud_energy_quadrature(const FormFactor& ff, double tol = kDefaultTolerance);

/// gamma_t = 2 ||g - g_t||^2 = 4 int |g|^2 (1 - cos wt) dw by quadrature.
/// Throws NonIntegrable for kappa <= -2 and ToleranceNotMet when the error
/// cannot be certified.
double decoherence_exponent(const FormFactor& ff, double t, double tol = kDefaultTolerance);

/// Closed form of gamma_t where one is implemented: Hard cutoff with
/// kappa in {-1, 0, 1}, Exponential cutoff for every kappa > -2.
std::optional<double> decoherence_exponent_closed_form(const FormFactor& ff, double t);
bool has_closed_form(const FormFactor& ff) noexcept;

/// gamma_t on a grid with the requested method (ClosedForm or Quadrature).
DecoherenceCurve decoherence_curve(const FormFactor& ff, std::span<const double> times,
                                   Method method = Method::Quadrature, double tol = kDefaultTolerance);

/// lim_{w->0} w^2 |g(w)|^2: 0 for kappa > -1, lambda at kappa = -1, Divergent below.
ExtReal low_frequency_strength(const FormFactor& ff);

/// lim gamma_t / t = 2 pi lim w^2 |g|^2, consistent with gamma_t = 2||g - g_t||^2.
ExtReal asymptotic_rate(const FormFactor& ff);

/// pi lim w^2 |g|^2: the half-size constant obtained when the rate is read as
/// one half of the vacuum spectral density at zero frequency. Reported next
/// to asymptotic_rate, never substituted for it.
ExtReal half_spectral_rate(const FormFactor& ff);

/// Large-t extrapolation of gamma_t / t over t_grid.
quad::LimitEstimate extrapolated_rate(const FormFactor& ff, std::span<const double> t_grid,
                                      double tol = kDefaultTolerance);

/// R_0(w) = 2 pi w^2 |g(w)|^2 (zero beyond a hard cutoff).
double spectral_density_vacuum(const FormFactor& ff, double omega);

/// R_T(w) = R_0(w) / (1 - exp(-w/T)); equals R_0 at T = 0 and approaches
/// (T/w) R_0 for w << T. Throws DomainError at w <= 0.
double spectral_density_thermal(const SpectralFunction& sf, double omega);

/// (1/2) lim_{w->0+} R_T(w): pi lambda T for the ohmic case at T > 0,
/// pi lambda at kappa = -1 in the vacuum.
ExtReal rate_from_spectral(const SpectralFunction& sf);

/// |<Phi_+(g), Phi_-(g)>| = exp(-2 ||g||^2); 0 when ||g|| is infinite.
double ground_state_overlap(const FormFactor& ff);

/// |<Psi_in, Phi_+-(g)>|^2 = exp(-||g||^2); 0 when ||g|| is infinite.
double initial_state_overlap(const FormFactor& ff);

}  // namespace dephaselab::specfun
