#include "dephaselab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "dephaselab/error.hpp"

namespace dephaselab::linalg {
namespace {

void check_info(lapack_int info, const char* routine) {
    if (info < 0) {
        throw std::logic_error(std::string(routine) + ": illegal argument " + std::to_string(-info));
    }
    if (info > 0) {
        throw ConvergenceFailure(std::string(routine) + ": eigensolver failed to converge");
    }
}

void require_nonempty(Eigen::Index n) {
    if (n < 1) throw std::invalid_argument("eigendecomposition requires dimension >= 1");
}

lapack_int as_lapack(Eigen::Index n) { return static_cast<lapack_int>(n); }

EigenPair complex_eig(const Eigen::MatrixXcd& input) {
    const lapack_int n = as_lapack(input.rows());
    Eigen::MatrixXcd a = input;
    Eigen::VectorXd w(n);
    Eigen::MatrixXcd z(n, n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    check_info(LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'A', 'L', n, a.data(), n, 0.0, 0.0, 0, 0, 0.0, &found,
                              w.data(), z.data(), n, support.data()),
               "zheevr");
    return EigenPair{w, z};
}

Eigen::VectorXd real_values(Eigen::MatrixXd a, lapack_int il, lapack_int iu, char range) {
    const lapack_int n = as_lapack(a.rows());
    Eigen::VectorXd w(n);
    Eigen::MatrixXd z(1, 1);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    check_info(LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', range, 'L', n, a.data(), n, 0.0, 0.0, il, iu, 0.0, &found,
                              w.data(), z.data(), 1, support.data()),
               "dsyevr");
    return w.head(found);
}

Eigen::VectorXd complex_values(Eigen::MatrixXcd a, lapack_int il, lapack_int iu, char range) {
    const lapack_int n = as_lapack(a.rows());
    Eigen::VectorXd w(n);
    Eigen::MatrixXcd z(1, 1);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    check_info(LAPACKE_zheevr(LAPACK_COL_MAJOR, 'N', range, 'L', n, a.data(), n, 0.0, 0.0, il, iu, 0.0, &found,
                              w.data(), z.data(), 1, support.data()),
               "zheevr");
    return w.head(found);
}

// Fixes the phase and the order inside degenerate clusters.
void canonicalize(EigenPair& pair) {
    const Eigen::Index n = pair.eigenvalues.size();
    auto& v = pair.eigenvectors;
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Index arg = 0;
        v.col(j).cwiseAbs().maxCoeff(&arg);
        const Complex pivot = v(arg, j);
        if (std::abs(pivot) > 0.0) {
            v.col(j) *= std::conj(pivot) / std::abs(pivot);
            v(arg, j) = std::abs(pivot);
        }
    }
    const double scale = std::max(1.0, pair.eigenvalues.cwiseAbs().maxCoeff());
    auto leading = [&v](Eigen::Index j) {
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            if (std::abs(v(i, j)) > 1e-8) return i;
        }
        return v.rows();
    };
    Eigen::Index begin = 0;
    while (begin < n) {
        Eigen::Index end = begin + 1;
        while (end < n && pair.eigenvalues(end) - pair.eigenvalues(end - 1) <= 1e-12 * scale) ++end;
        if (end - begin > 1) {
            std::vector<Eigen::Index> order(static_cast<std::size_t>(end - begin));
            std::iota(order.begin(), order.end(), begin);
            std::stable_sort(order.begin(), order.end(),
                             [&](Eigen::Index a, Eigen::Index b) { return leading(a) < leading(b); });
            Eigen::MatrixXcd block(v.rows(), end - begin);
            for (std::size_t k = 0; k < order.size(); ++k) block.col(static_cast<Eigen::Index>(k)) = v.col(order[k]);
            v.middleCols(begin, end - begin) = block;
        }
        begin = end;
    }
}

}  // namespace

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd entries, double tolerance) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw std::invalid_argument("HermitianMatrix: matrix must be square");
    const Eigen::Index n = entries_.rows();
    real_ = true;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(entries_(i, j) - std::conj(entries_(j, i))) > tolerance) {
                throw std::invalid_argument("HermitianMatrix: matrix is not Hermitian");
            }
            if (entries_(i, j).imag() != 0.0) real_ = false;
        }
    }
}

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXd& symmetric, double tolerance)
    : HermitianMatrix(Eigen::MatrixXcd(symmetric.cast<Complex>()), tolerance) {}

EigenPair eig(const HermitianMatrix& a) {
    require_nonempty(a.dimension());
    EigenPair pair = complex_eig(a.entries());
    canonicalize(pair);
    return pair;
}

Eigen::VectorXd eigenvalues(const HermitianMatrix& a) {
    require_nonempty(a.dimension());
    if (a.is_real()) return real_values(a.entries().real(), 0, 0, 'A');
    return complex_values(a.entries(), 0, 0, 'A');
}

Eigen::VectorXd eigenvalues_symmetric(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues_symmetric: matrix must be square");
    require_nonempty(a.rows());
    return real_values(a, 0, 0, 'A');
}

Eigen::VectorXd lowest_eigenvalues(const HermitianMatrix& a, Eigen::Index count) {
    require_nonempty(a.dimension());
    if (count < 1 || count > a.dimension()) throw std::invalid_argument("lowest_eigenvalues: bad count");
    const auto iu = as_lapack(count);
    if (a.is_real()) return real_values(a.entries().real(), 1, iu, 'I');
    return complex_values(a.entries(), 1, iu, 'I');
}

Eigen::VectorXcd evolve(const HermitianMatrix& a, double t, const Eigen::VectorXcd& v) {
    if (v.size() != a.dimension()) throw std::invalid_argument("evolve: dimension mismatch");
    return Propagator(a).apply(t, v);
}

Propagator::Propagator(const HermitianMatrix& a) : spectrum_(eig(a)) {}

Propagator::Propagator(EigenPair spectrum) : spectrum_(std::move(spectrum)) {}

Eigen::VectorXcd Propagator::apply(double t, const Eigen::VectorXcd& v) const {
    if (v.size() != dimension()) throw std::invalid_argument("Propagator::apply: dimension mismatch");
    const auto& vecs = spectrum_.eigenvectors;
    Eigen::VectorXcd coeff = vecs.adjoint() * v;
    for (Eigen::Index k = 0; k < coeff.size(); ++k) {
        coeff(k) *= std::polar(1.0, -spectrum_.eigenvalues(k) * t);
    }
    return vecs * coeff;
}

std::vector<Eigen::VectorXcd> Propagator::apply(std::span<const double> times, const Eigen::VectorXcd& v) const {
    if (v.size() != dimension()) throw std::invalid_argument("Propagator::apply: dimension mismatch");
    const auto& vecs = spectrum_.eigenvectors;
    const Eigen::VectorXcd base = vecs.adjoint() * v;
    std::vector<Eigen::VectorXcd> out;
    out.reserve(times.size());
    Eigen::VectorXcd coeff(base.size());
    for (double t : times) {
        for (Eigen::Index k = 0; k < base.size(); ++k) {
            coeff(k) = base(k) * std::polar(1.0, -spectrum_.eigenvalues(k) * t);
        }
        out.emplace_back(vecs * coeff);
    }
    return out;
}

Eigen::MatrixXcd Propagator::unitary(double t) const {
    const auto& vecs = spectrum_.eigenvectors;
    Eigen::VectorXcd phases(dimension());
    for (Eigen::Index k = 0; k < dimension(); ++k) phases(k) = std::polar(1.0, -spectrum_.eigenvalues(k) * t);
    return vecs * phases.asDiagonal() * vecs.adjoint();
}

}  // namespace dephaselab::linalg
