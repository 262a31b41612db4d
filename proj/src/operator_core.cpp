#include "trotter/operator_core.hpp"

#include "trotter/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace trotter {

namespace {

void require_square_finite(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw Error(Errc::DimensionMismatch, std::string(what) + ": matrix must be square and non-empty");
    }
    if (!m.allFinite()) {
        throw Error(Errc::NonFinite, std::string(what) + ": non-finite entry");
    }
}

} // namespace

SymmetricMatrix::SymmetricMatrix(const Matrix& m) {
    require_square_finite(m, "SymmetricMatrix");
    const double scale = m.cwiseAbs().maxCoeff();
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTolerance * (1.0 + scale)) {
        std::ostringstream os;
        os << "max|M - M^T| = " << asym << " exceeds tolerance";
        throw Error(Errc::NotSymmetric, os.str());
    }
    m_ = 0.5 * (m + m.transpose());
}

SymmetricMatrix SymmetricMatrix::zero(Index dim) {
    return SymmetricMatrix(Matrix::Zero(dim, dim), Trusted{});
}

SymmetricMatrix SymmetricMatrix::identity(Index dim) {
    return SymmetricMatrix(Matrix::Identity(dim, dim), Trusted{});
}

SymmetricMatrix SymmetricMatrix::assume_symmetric(const Matrix& m) {
    return SymmetricMatrix(0.5 * (m + m.transpose()), Trusted{});
}

SpectralOperator::SpectralOperator(Vector eigenvalues, Matrix eigenvectors, Role role)
    : eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)), role_(role) {
    // Rounding in the eigensolver can land an exact 1 a few ulps below.
    const double slack = kSymmetryTolerance * std::max(1.0, std::abs(eigenvalues_(eigenvalues_.size() - 1)));
    if (role_ == Role::a_role && eigenvalues_(0) < 1.0 - slack) {
        std::ostringstream os;
        os << "A-role operator needs lambda_min >= 1, got " << eigenvalues_(0);
        throw Error(Errc::SpectrumViolatesS1, os.str());
    }
}

SpectralOperator SpectralOperator::from_diagonal(const Vector& eigenvalues, Role role) {
    if (eigenvalues.size() == 0 || !eigenvalues.allFinite()) {
        throw Error(Errc::NonFinite, "from_diagonal: empty or non-finite spectrum");
    }
    for (Index i = 1; i < eigenvalues.size(); ++i) {
        if (eigenvalues(i) < eigenvalues(i - 1)) {
            throw Error(Errc::DomainError, "from_diagonal: eigenvalues must be ascending");
        }
    }
    return SpectralOperator(eigenvalues, Matrix::Identity(eigenvalues.size(), eigenvalues.size()), role);
}

Matrix SpectralOperator::apply(const std::function<double(double)>& f) const {
    const Vector mapped = eigenvalues_.unaryExpr(f);
    return eigenvectors_ * mapped.asDiagonal() * eigenvectors_.transpose();
}

Matrix SpectralOperator::reconstruct() const {
    return eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.transpose();
}

SpectralOperator diagonalize(const SymmetricMatrix& m, Role role) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
    if (solver.info() != Eigen::Success) {
        throw Error(Errc::NonFinite, "diagonalize: eigensolver did not converge");
    }
    return SpectralOperator(solver.eigenvalues(), solver.eigenvectors(), role);
}

SymmetricMatrix frac_power(const SpectralOperator& a, double gamma) {
    if (gamma == 0.0) {
        return SymmetricMatrix::identity(a.dim());
    }
    if (!(a.min_eigenvalue() > 0.0)) {
        throw Error(Errc::NonPositiveSpectrum, "frac_power: spectrum must be strictly positive");
    }
    return SymmetricMatrix::assume_symmetric(a.apply([gamma](double l) { return std::pow(l, gamma); }));
}

SymmetricMatrix semigroup(const SpectralOperator& a, double tau) {
    if (tau < 0.0) {
        throw Error(Errc::NegativeTime, "semigroup: tau must be >= 0");
    }
    if (tau == 0.0) {
        return SymmetricMatrix::identity(a.dim());
    }
    return SymmetricMatrix::assume_symmetric(a.apply([tau](double l) { return std::exp(-tau * l); }));
}

Matrix exp_neg(const SymmetricMatrix& m, double tau) {
    if (tau < 0.0) {
        throw Error(Errc::NegativeTime, "exp_neg: tau must be >= 0");
    }
    const Index d = m.dim();
    if (tau == 0.0 || m.matrix().isZero(0.0)) {
        return Matrix::Identity(d, d);
    }
    if (d == 1) {
        return Matrix::Constant(1, 1, std::exp(-tau * m(0, 0)));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
    if (solver.info() != Eigen::Success) {
        throw Error(Errc::NonFinite, "exp_neg: eigensolver did not converge");
    }
    const Vector e = (-tau * solver.eigenvalues().array()).exp().matrix();
    const Matrix& q = solver.eigenvectors();
    return q * e.asDiagonal() * q.transpose();
}

double op_norm(const Matrix& m) {
    if (!m.allFinite()) {
        throw Error(Errc::NonFinite, "op_norm: non-finite entry");
    }
    if (m.size() == 0) {
        return 0.0;
    }
    if (m.rows() == 1 && m.cols() == 1) {
        return std::abs(m(0, 0));
    }
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

} // namespace trotter
