#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "dephaselab/error.hpp"
#include "dephaselab/fock.hpp"

using namespace dephaselab;
using namespace dephaselab::fock;
using specfun::Cutoff;
using specfun::FormFactor;

namespace {

DiscretizedBath small_bath(std::vector<std::pair<double, Complex>> modes) {
    std::vector<Mode> m;
    for (auto [w, g] : modes) m.push_back({w, g});
    return DiscretizedBath(std::move(m));
}

std::vector<Complex> random_amplitudes(std::mt19937_64& rng, std::size_t k, double max_abs) {
    std::uniform_real_distribution<double> r(0.0, max_abs);
    std::uniform_real_distribution<double> phi(0.0, 2 * std::numbers::pi);
    std::vector<Complex> a(k);
    for (auto& x : a) x = std::polar(r(rng), phi(rng));
    return a;
}

}  // namespace

TEST(DiscretizedBath, Validation) {
    EXPECT_THROW(small_bath({}), std::invalid_argument);
    EXPECT_THROW(small_bath({{1.0, 0.1}, {1.0, 0.1}}), std::invalid_argument);
    EXPECT_THROW(small_bath({{0.0, 0.1}}), std::invalid_argument);
    const auto b = small_bath({{0.5, 0.2}, {1.0, Complex(0.0, 0.1)}});
    EXPECT_NEAR(b.norm_sq(), 0.05, 1e-16);
    EXPECT_NEAR(b.cloud_energy(), 0.5 * 0.04 + 0.01, 1e-16);
}

TEST(Discretize, SingleModeCarriesWholeNorm) {
    for (Scheme s : {Scheme::MidpointUniform, Scheme::GaussNodes}) {
        const auto b = discretize(FormFactor(1.5, 0.8, 2.0), 1, s);
        ASSERT_EQ(b.size(), 1u);
        EXPECT_NEAR(std::norm(b[0].g), 0.8 * std::pow(2.0, 1.5) / 1.5, 1e-13);
    }
}

TEST(Discretize, MidpointConvergesToNormAndEnergy) {
    const auto b1 = discretize(FormFactor(1.0, 1.0, 1.0), 64, Scheme::MidpointUniform);
    EXPECT_NEAR(b1.norm_sq(), 1.0, 1e-3);
    const auto b0 = discretize(FormFactor(0.0, 1.0, 1.0), 64, Scheme::MidpointUniform);
    EXPECT_NEAR(b0.cloud_energy(), 1.0, 1e-2);
    const auto b0big = discretize(FormFactor(0.0, 1.0, 1.0), 256, Scheme::MidpointUniform);
    EXPECT_GT(b0big.norm_sq(), b0.norm_sq() + 1.0);
    for (const auto& m : b1.modes()) {
        EXPECT_GT(m.omega, 0.0);
        EXPECT_LE(m.omega, 1.0);
    }
}

TEST(Discretize, GaussRuleIsExactForItsWeight) {
    for (double kappa : {0.3, 1.0, 2.0}) {
        const FormFactor ff(kappa, 1.2, 1.5);
        const auto b = discretize(ff, 5, Scheme::GaussNodes);
        EXPECT_NEAR(b.norm_sq(), specfun::norm_sq(ff).value(), 1e-12) << kappa;
        EXPECT_NEAR(b.cloud_energy(), specfun::cloud_energy(ff).value(), 1e-12) << kappa;
    }
    for (double kappa : {-0.6, 0.0}) {
        const FormFactor ff(kappa, 1.2, 1.5);
        const auto b = discretize(ff, 5, Scheme::GaussNodes);
        EXPECT_NEAR(b.cloud_energy(), specfun::cloud_energy(ff).value(), 1e-12) << kappa;
    }
    const FormFactor fe(0.5, 1.0, 1.0, Cutoff::Exponential);
    const auto be = discretize(fe, 6, Scheme::GaussNodes);
    EXPECT_NEAR(be.norm_sq(), specfun::norm_sq(fe).value(), 1e-12);
}

TEST(Discretize, DiscreteGammaConvergesToContinuum) {
    const FormFactor ff(1.0, 1.0, 1.0);
    const double t = 3.0;
    const double exact = specfun::decoherence_exponent(ff, t);
    double previous = 1e300;
    for (std::size_t k : {8u, 16u, 32u, 64u}) {
        const double err = std::abs(discretize(ff, k, Scheme::MidpointUniform).decoherence_exponent(t) - exact);
        EXPECT_LT(err, previous);
        previous = err;
    }
    EXPECT_LT(previous, 1e-3);
    EXPECT_NEAR(discretize(ff, 12, Scheme::GaussNodes).decoherence_exponent(t), exact, 1e-10);
}

TEST(Discretize, UnsupportedRegime) {
    EXPECT_THROW(discretize(FormFactor(-1.0, 1.0), 4, Scheme::MidpointUniform), UnsupportedRegime);
    EXPECT_THROW(discretize(FormFactor(-1.5, 1.0), 4, Scheme::GaussNodes), UnsupportedRegime);
}

TEST(TruncatedFockSpace, DimensionsIndexingAndCap) {
    const TruncatedFockSpace s(small_bath({{0.5, 0.1}, {1.0, 0.1}, {1.5, 0.1}}), 3);
    EXPECT_EQ(s.bath_dimension(), 64u);
    EXPECT_EQ(s.dimension(), 128u);
    const std::vector<int> occ{1, 2, 3};
    EXPECT_EQ(s.index(occ), 1u + 2u * 4u + 3u * 16u);
    EXPECT_EQ(s.occupations(s.index(occ)), occ);
    EXPECT_FALSE(s.edge_mask()[s.index(std::vector<int>{0, 2, 1})]);
    EXPECT_TRUE(s.edge_mask()[s.index(std::vector<int>{0, 3, 1})]);
    std::vector<Mode> many;
    for (int j = 1; j <= 8; ++j) many.push_back({0.1 * j, 0.01});
    EXPECT_THROW(TruncatedFockSpace(DiscretizedBath(many), 4), DimensionCap);
    EXPECT_THROW(TruncatedFockSpace(small_bath({{1.0, 0.1}}), 0), std::invalid_argument);
}

TEST(BuildHamiltonian, SingleModeByHand) {
    const double g = 0.3;
    const TruncatedFockSpace s(small_bath({{1.0, g}}), 1);
    const auto hp = build_block(s, +1);
    Eigen::MatrixXcd expected(2, 2);
    expected << 0.0, g, g, 1.0;
    EXPECT_EQ(hp.entries(), expected);
    const auto hm = build_block(s, -1);
    EXPECT_EQ(hm.entries()(0, 1), Complex(-g, 0.0));
}

TEST(BuildHamiltonian, HermitianBlockDiagonal) {
    const TruncatedFockSpace s(small_bath({{0.4, Complex(0.1, 0.05)}, {1.1, Complex(-0.2, 0.1)}}), 4);
    const auto h = build_hamiltonian(s);
    const auto b = static_cast<Eigen::Index>(s.bath_dimension());
    EXPECT_EQ(h.dimension(), 2 * b);
    EXPECT_EQ(h.entries(), h.entries().adjoint());
    EXPECT_TRUE(h.entries().topRightCorner(b, b).isZero(0.0));
    EXPECT_TRUE(h.entries().bottomLeftCorner(b, b).isZero(0.0));
    EXPECT_FALSE(h.is_real());
}

TEST(BuildHamiltonian, GroundEnergyApproachesMinusCloudEnergy) {
    const auto bath = small_bath({{0.5, 0.1}, {1.0, 0.08}});
    const double target = -bath.cloud_energy();
    double previous = 1.0;
    for (int n : {2, 4, 8}) {
        const TruncatedFockSpace s(bath, n);
        const double e0 = linalg::lowest_eigenvalues(build_block(s, +1), 1)(0);
        EXPECT_LT(std::abs(e0 - target), previous);
        previous = std::abs(e0 - target);
    }
    EXPECT_LT(previous, 1e-9);
}

TEST(CoherentVector, VacuumAmplitudeAndNorm) {
    const TruncatedFockSpace one(small_bath({{1.0, 0.1}}), 20);
    const auto vac = coherent_vector(one, std::vector<Complex>{0.0});
    EXPECT_EQ(vac.vector(0), Complex(1.0, 0.0));
    EXPECT_EQ(vac.vector.tail(20).norm(), 0.0);
    const auto c = coherent_vector(one, std::vector<Complex>{0.5});
    EXPECT_NEAR(std::abs(c.vector(1) - std::exp(-0.125) * 0.5), 0.0, 1e-9);
    EXPECT_NEAR(c.vector.norm(), 1.0, 1e-15);
    EXPECT_LT(c.leakage, 1e-15);
}

TEST(CoherentVector, LeakageIsReported) {
    const TruncatedFockSpace s(small_bath({{1.0, 0.1}}), 4);
    EXPECT_THROW(coherent_vector(s, std::vector<Complex>{1.5}), TruncationLeak);
    const auto c = coherent_vector(s, std::vector<Complex>{1.5}, 1.0);
    EXPECT_GT(c.leakage, 1e-2);
    EXPECT_NEAR(c.vector.norm(), 1.0, 1e-15);
    try {
        static_cast<void>(coherent_vector(s, std::vector<Complex>{1.5}));
    } catch (const TruncationLeak& e) {
        EXPECT_NEAR(e.leakage(), c.leakage, 1e-15);
    }
}

TEST(OverlapCheck, ClosedFormAndBound) {
    const TruncatedFockSpace one(small_bath({{1.0, 0.1}}), 40);
    const auto same = overlap_check(one, std::vector<Complex>{0.4}, std::vector<Complex>{0.4});
    EXPECT_NEAR(same.numeric, 1.0, 1e-15);
    EXPECT_EQ(same.closed_form, 1.0);
    const auto opp = overlap_check(one, std::vector<Complex>{0.3}, std::vector<Complex>{-0.3});
    EXPECT_NEAR(opp.closed_form, 0.697676326071031, 1e-12);
    EXPECT_NEAR(opp.numeric, opp.closed_form, 1e-6);

    const TruncatedFockSpace three(small_bath({{0.5, 0.1}, {1.0, 0.1}, {1.5, 0.1}}), 12);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto f = random_amplitudes(rng, 3, 0.5);
        const auto h = random_amplitudes(rng, 3, 0.5);
        const auto r = overlap_check(three, f, h);
        EXPECT_LE(r.numeric, r.bound + 1e-9);
        EXPECT_NEAR(r.numeric, r.closed_form, 1e-6);
    }
}

TEST(WeylOperator, ActsOnVacuumAsCoherentState) {
    const TruncatedFockSpace s(small_bath({{0.5, 0.1}, {1.0, 0.1}}), 14);
    const std::vector<Complex> f{Complex(0.3, -0.2), Complex(-0.1, 0.25)};
    const Eigen::MatrixXcd w = weyl_operator(s, f);
    const std::vector<Complex> minus_f{-f[0], -f[1]};
    const auto c = coherent_vector(s, minus_f);
    EXPECT_LE((w.col(0) - c.vector).norm(), 1e-9);
    EXPECT_LE((w.adjoint() * w - Eigen::MatrixXcd::Identity(w.rows(), w.cols())).norm(), 1e-10);
}

TEST(WeylOperator, WeylRelationOnLowOccupations) {
    const TruncatedFockSpace s(small_bath({{0.5, 0.1}, {1.0, 0.1}}), 24);
    const std::vector<Complex> f{Complex(0.3, -0.2), Complex(-0.1, 0.25)};
    const std::vector<Complex> h{Complex(-0.2, 0.1), Complex(0.15, 0.05)};
    const std::vector<Complex> sum{f[0] + h[0], f[1] + h[1]};
    Complex inner = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) inner += std::conj(f[j]) * h[j];
    const Complex phase = std::exp(Complex(0.0, -inner.imag()));
    const Eigen::MatrixXcd lhs = weyl_operator(s, f) * weyl_operator(s, h);
    const Eigen::MatrixXcd rhs = phase * weyl_operator(s, sum);
    // compare on states with at most 2 quanta per mode, far from the cutoff
    double worst = 0.0;
    for (std::size_t c = 0; c < s.bath_dimension(); ++c) {
        const auto occ = s.occupations(c);
        if (occ[0] > 2 || occ[1] > 2) continue;
        worst = std::max(worst, (lhs.col(c) - rhs.col(c)).norm());
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(QubitState, Validation) {
    Eigen::Matrix2cd rho;
    rho << 0.5, 0.5, 0.5, 0.5;
    EXPECT_NEAR(QubitState(rho).purity(), 1.0, 1e-15);
    rho << 0.6, 0.0, 0.0, 0.5;
    EXPECT_THROW(QubitState{rho}, std::invalid_argument);
    rho << 0.5, 0.9, 0.9, 0.5;
    EXPECT_THROW(QubitState{rho}, std::invalid_argument);
    rho << 0.5, Complex(0.0, 0.1), Complex(0.0, 0.1), 0.5;
    EXPECT_THROW(QubitState{rho}, std::invalid_argument);
}

TEST(PropagateAndReduce, MatchesDiscreteClosedForm) {
    const auto bath = small_bath({{0.6, 0.08}, {1.3, 0.12}});
    const TruncatedFockSpace s(bath, recommended_n_max(bath));
    std::vector<double> times;
    for (int i = 0; i < 30; ++i) times.push_back(0.5 * i);
    const Complex ap = std::sqrt(0.3);
    const Complex am = Complex(0.0, std::sqrt(0.7));
    const auto run = propagate_and_reduce(s, ap, am, times);
    ASSERT_TRUE(run.curve.has_value());
    EXPECT_EQ(run.curve->gamma[0], 0.0);
    EXPECT_EQ(run.curve->method, specfun::Method::FockOracle);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double expected = std::abs(ap * am) * std::exp(-run.gamma_discrete[i]);
        EXPECT_NEAR(run.abs_coherence[i], expected, 1e-6 * expected) << times[i];
        const double g = run.gamma_discrete[i];
        const double purity = 1.0 - 2.0 * std::norm(ap * am) * (1.0 - std::exp(-2.0 * g));
        EXPECT_NEAR(run.states[i].purity(), purity, 1e-8);
    }
    EXPECT_LE(run.max_diagonal_deviation, 1e-10);
    EXPECT_LE(run.max_energy_drift, 1e-9);
    EXPECT_LT(run.max_leakage, 1e-6);
    EXPECT_NEAR(run.energy[0], 0.0, 1e-10);
}

TEST(PropagateAndReduce, TimeZeroIsThePureInitialState) {
    const TruncatedFockSpace s(small_bath({{1.0, 0.1}}), 6);
    const Complex ap = 0.6;
    const Complex am = Complex(0.0, 0.8);
    const auto run = propagate_and_reduce(s, ap, am, std::vector<double>{0.0});
    Eigen::Vector2cd psi(ap, am);
    EXPECT_LE((run.states[0].matrix() - psi * psi.adjoint()).norm(), 1e-15);
}

TEST(PropagateAndReduce, NoSuperpositionHasNoCurve) {
    const TruncatedFockSpace s(small_bath({{1.0, 0.1}}), 6);
    const auto run = propagate_and_reduce(s, 1.0, 0.0, std::vector<double>{0.0, 1.0, 2.0});
    EXPECT_FALSE(run.curve.has_value());
    EXPECT_LE(run.max_diagonal_deviation, 1e-12);
    for (double c : run.abs_coherence) EXPECT_EQ(c, 0.0);
}

TEST(PropagateAndReduce, Preconditions) {
    const TruncatedFockSpace s(small_bath({{1.0, 0.1}}), 6);
    EXPECT_THROW(propagate_and_reduce(s, 1.0, 1.0, std::vector<double>{0.0}), std::invalid_argument);
    EXPECT_THROW(propagate_and_reduce(s, 1.0, 0.0, std::vector<double>{1.0, 0.5}), std::invalid_argument);
    const TruncatedFockSpace tight(small_bath({{1.0, 0.8}}), 3);
    EXPECT_THROW(propagate_and_reduce(tight, std::sqrt(0.5), std::sqrt(0.5), std::vector<double>{0.0, 3.0}),
                 TruncationLeak);
}

TEST(EnergyExpectation, InitialStateAndEigenvector) {
    const TruncatedFockSpace s(small_bath({{0.7, 0.2}, {1.2, 0.1}}), 6);
    EXPECT_NEAR(energy_expectation(s, initial_state(s, 0.6, 0.8)), 0.0, 1e-10);
    const auto h = build_hamiltonian(s);
    const auto p = linalg::eig(h);
    for (Eigen::Index k : {Eigen::Index{0}, Eigen::Index{5}, h.dimension() - 1}) {
        const Eigen::VectorXcd v = p.eigenvectors.col(k);
        EXPECT_NEAR(energy_expectation(s, v), p.eigenvalues(k), 1e-10 * h.entries().norm());
    }
}

TEST(RecommendedNMax, FollowsOccupationPolicy) {
    const auto weak = small_bath({{1.0, 0.01}});
    EXPECT_GE(recommended_n_max(weak), 1);
    const auto strong = small_bath({{1.0, 1.0}});
    const int n = recommended_n_max(strong);
    EXPECT_GE(n, 25);
    const TruncatedFockSpace s(strong, n);
    const auto run = propagate_and_reduce(s, std::sqrt(0.5), std::sqrt(0.5), std::vector<double>{0.0, 1.0, 3.14159});
    EXPECT_LT(run.max_leakage, 1e-6);
}
