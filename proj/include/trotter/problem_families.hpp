// problem_families.hpp: time-dependent perturbations t -> B(t) with known
// regularity, the 1D heat-equation Galerkin example, and grid estimators for
// the assumption constants C_alpha and (L, beta).

#pragma once

#include "trotter/operator_core.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace trotter {

enum class ProfileKind { power, linear, weierstrass };

struct ProfileSpec {
    ProfileKind kind = ProfileKind::linear;
    double coefficient = 1.0; // c >= 0
    double beta = 1.0;        // ignored for linear
    int terms = 12;           // K, weierstrass only
};

// Nonnegative scalar profile on [0, T]:
//   power:       c * t^beta
//   linear:      c * t
//   weierstrass: c * sum_{k=0}^{K} 2^{-beta k} (1 + cos(2^k pi t / T))
class ScalarProfile {
public:
    ScalarProfile(ProfileSpec spec, double horizon);

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] const ProfileSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    // Hölder exponent of the profile (1 for linear).
    [[nodiscard]] double holder_exponent() const noexcept;
    // Smallest time scale on which the profile has structure. Samplers that
    // use a coarser step alias the top Weierstrass frequency.
    [[nodiscard]] double resolution() const noexcept;
    [[nodiscard]] bool is_zero() const noexcept { return spec_.coefficient == 0.0; }

private:
    ProfileSpec spec_;
    double horizon_;
};

// Immutable family {B(t)}_{t in [0,T]} of PSD matrices with declared regularity.
class TimeDependentFamily {
public:
    using Sampler = std::function<Matrix(double)>;

    // resolution <= 0 means "no structure below the horizon".
    TimeDependentFamily(double horizon, Index dim, Sampler sampler, double declared_alpha,
                        double declared_beta, std::string label, double resolution = 0.0);

    // Throws TimeOutOfRange unless 0 <= t <= T (a relative slack of 1e-12 is
    // clamped onto the interval).
    [[nodiscard]] SymmetricMatrix sample(double t) const;

    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] Index dim() const noexcept { return dim_; }
    [[nodiscard]] double declared_alpha() const noexcept { return declared_alpha_; }
    [[nodiscard]] double declared_beta() const noexcept { return declared_beta_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] double resolution() const noexcept { return resolution_; }

    // Present iff B(t) = b(t) * I, i.e. every C(t) = A + B(t) commutes.
    [[nodiscard]] const std::optional<ScalarProfile>& scalar_profile() const noexcept { return scalar_; }

    [[nodiscard]] TimeDependentFamily with_declared_alpha(double alpha) const;

private:
    friend TimeDependentFamily make_scalar_family(const ProfileSpec&, double, Index);

    double horizon_;
    Index dim_;
    Sampler sampler_;
    double declared_alpha_;
    double declared_beta_;
    std::string label_;
    double resolution_;
    std::optional<ScalarProfile> scalar_;
};

// b(t) * I_dim. Throws NegativeCoefficient for c < 0.
TimeDependentFamily make_scalar_family(const ProfileSpec& spec, double horizon, Index dim = 1);

// t -> B0 + w(t) B1. Throws NotPSD unless both are PSD.
TimeDependentFamily make_synthetic_matrix_family(const SymmetricMatrix& b0, const SymmetricMatrix& b1,
                                                 const ProfileSpec& weight, double horizon);

// Potential v(x) >= 0 on [0, pi].
struct Potential {
    std::string name;
    std::function<double(double)> v;

    static Potential zero();
    static Potential constant(double value);
    static Potential sin_squared();
    // min(x, pi - x): continuous, not differentiable at pi/2.
    static Potential tent();
};

struct Heat1d {
    SpectralOperator a;
    TimeDependentFamily family;
};

inline constexpr int kHeatQuadratureNodes = 4097;

// Dirichlet Laplacian on [0, pi] in the sine basis phi_k = sqrt(2/pi) sin(kx),
// so A = diag(1, 4, ..., d^2). B(t)_{kl} = w(t) * int v phi_k phi_l, assembled
// by composite Simpson on 4097 nodes. Throws NegativePotential.
Heat1d make_heat1d_family(Index modes, const Potential& potential, const ProfileSpec& weight, double horizon);

// Matrix of int_0^pi v phi_k phi_l dx (symmetrized, PSD-clipped).
Matrix heat1d_potential_matrix(Index modes, const Potential& potential);

struct AssumptionReport {
    double c_alpha_hat = 0.0;
    double holder_L_hat = 0.0;
    double holder_beta_hat = 1.0;
    double holder_beta_raw = 1.0; // unclipped fitted slope
    double fit_r2 = 1.0;
    int grid_size = 0;
    double alpha_used = 0.0;
    bool beta_clipped = false;   // fitted slope reached 1 (Lipschitz or smoother)
    bool beta_defined = true;    // false when the slope is <= 0 or not fittable
    std::vector<double> gap_envelope; // max D over pairs at gap g = 1..grid_n
};

// max_i ||B(t_i) A^{-alpha}|| over t_i = i T / grid_n, i = 0..grid_n.
double estimate_c_alpha(const TimeDependentFamily& family, const SpectralOperator& a, double alpha, int grid_n);

// D(t,s) = ||A^{-alpha}(B(t) - B(s)) A^{-alpha}|| on all grid pairs; the per-gap
// maximum is fitted as log D = log L + beta log|t - s|. A constant family
// returns L = 0, beta = 1, r^2 = 1. Throws DegenerateGrid for grid_n < 8.
AssumptionReport estimate_holder(const TimeDependentFamily& family, const SpectralOperator& a, double alpha,
                                 int grid_n);

// max over grid pairs of D(t,s) / |t - s|^beta: grid estimate of L_{alpha,beta}.
double holder_seminorm(const TimeDependentFamily& family, const SpectralOperator& a, double alpha, double beta,
                       int grid_n);

} // namespace trotter
