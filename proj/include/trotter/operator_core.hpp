// operator_core.hpp: dense self-adjoint operator calculus on R^d.
//
// Operators are kept in full eigendecomposition so that fractional powers and
// semigroups are exact up to rounding. Desk scale only (d <= 256).

#pragma once

#include <Eigen/Dense>

#include <functional>

namespace trotter {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kReconstructionTolerance = 1e-10;

// Real symmetric matrix. Construction checks
//   max|M - M^T| <= 1e-12 * (1 + max|M|)
// and stores the exactly symmetrized (M + M^T)/2.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(const Matrix& m);

    static SymmetricMatrix zero(Index dim);
    static SymmetricMatrix identity(Index dim);
    // Skips the tolerance check; for values that are symmetric by construction.
    static SymmetricMatrix assume_symmetric(const Matrix& m);

    [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
    [[nodiscard]] Index dim() const noexcept { return m_.rows(); }
    [[nodiscard]] double operator()(Index i, Index j) const { return m_(i, j); }

private:
    struct Trusted {};
    SymmetricMatrix(Matrix m, Trusted) : m_(std::move(m)) {}

    Matrix m_;
};

enum class Role { generic, a_role };

// Q diag(lambda) Q^T with ascending lambda and orthonormal Q.
class SpectralOperator {
public:
    // Diagonal operator with Q = I. Eigenvalues must already be ascending.
    static SpectralOperator from_diagonal(const Vector& eigenvalues, Role role = Role::generic);

    [[nodiscard]] Index dim() const noexcept { return eigenvalues_.size(); }
    [[nodiscard]] const Vector& eigenvalues() const noexcept { return eigenvalues_; }
    [[nodiscard]] const Matrix& eigenvectors() const noexcept { return eigenvectors_; }
    [[nodiscard]] Role role() const noexcept { return role_; }
    [[nodiscard]] double min_eigenvalue() const { return eigenvalues_(0); }
    [[nodiscard]] double max_eigenvalue() const { return eigenvalues_(eigenvalues_.size() - 1); }

    // Q diag(f(lambda_i)) Q^T
    [[nodiscard]] Matrix apply(const std::function<double(double)>& f) const;
    [[nodiscard]] Matrix reconstruct() const;

private:
    friend SpectralOperator diagonalize(const SymmetricMatrix& m, Role role);
    SpectralOperator(Vector eigenvalues, Matrix eigenvectors, Role role);

    Vector eigenvalues_;
    Matrix eigenvectors_;
    Role role_;
};

// Throws SpectrumViolatesS1 when role == a_role and lambda_min < 1.
SpectralOperator diagonalize(const SymmetricMatrix& m, Role role = Role::generic);

// A^gamma; gamma may be negative. Throws NonPositiveSpectrum unless lambda_min > 0.
SymmetricMatrix frac_power(const SpectralOperator& a, double gamma);

// e^{-tau A}; tau == 0 returns the identity exactly. Throws NegativeTime.
SymmetricMatrix semigroup(const SpectralOperator& a, double tau);

// e^{-tau M} through a fresh eigendecomposition of M.
Matrix exp_neg(const SymmetricMatrix& m, double tau);

// Largest singular value. Throws NonFinite on NaN/Inf entries.
double op_norm(const Matrix& m);

} // namespace trotter
