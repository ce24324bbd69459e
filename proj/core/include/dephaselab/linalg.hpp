#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dephaselab::linalg {

using Complex = std::complex<double>;

/// Dense complex matrix checked to equal its adjoint on construction.
class HermitianMatrix {
public:
    /// Throws std::invalid_argument unless |A - A^+| <= tolerance entrywise.
    explicit HermitianMatrix(Eigen::MatrixXcd entries, double tolerance = 1e-12);
    explicit HermitianMatrix(const Eigen::MatrixXd& symmetric, double tolerance = 1e-12);

    Eigen::Index dimension() const noexcept { return entries_.rows(); }
    const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
    /// True when every imaginary part is exactly zero (real symmetric path).
    bool is_real() const noexcept { return real_; }

private:
    Eigen::MatrixXcd entries_;
    bool real_ = false;
};

/// Ascending eigenvalues with orthonormal eigenvectors as columns. Each
/// eigenvector's largest component is real and positive; inside a degenerate
/// cluster vectors are ordered by the index of their first significant entry.
struct EigenPair {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
};

/// Throws ConvergenceFailure when the backend reports non-convergence.
EigenPair eig(const HermitianMatrix& a);

/// Ascending eigenvalues only.
Eigen::VectorXd eigenvalues(const HermitianMatrix& a);

/// Ascending eigenvalues of a real symmetric matrix (lower triangle is read).
Eigen::VectorXd eigenvalues_symmetric(const Eigen::MatrixXd& a);

/// The `count` smallest eigenvalues of a Hermitian matrix.
Eigen::VectorXd lowest_eigenvalues(const HermitianMatrix& a, Eigen::Index count);

/// exp(-i A t) v, through a fresh eigendecomposition.
Eigen::VectorXcd evolve(const HermitianMatrix& a, double t, const Eigen::VectorXcd& v);

/// Reuses one eigendecomposition across many evolution times.
class Propagator {
public:
    explicit Propagator(const HermitianMatrix& a);
    explicit Propagator(EigenPair spectrum);

    Eigen::VectorXcd apply(double t, const Eigen::VectorXcd& v) const;
    std::vector<Eigen::VectorXcd> apply(std::span<const double> times, const Eigen::VectorXcd& v) const;
    /// The unitary exp(-i A t).
    Eigen::MatrixXcd unitary(double t) const;

    const EigenPair& spectrum() const noexcept { return spectrum_; }
    Eigen::Index dimension() const noexcept { return spectrum_.eigenvalues.size(); }

private:
    EigenPair spectrum_;
};

}  // namespace dephaselab::linalg
