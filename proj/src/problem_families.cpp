#include "trotter/problem_families.hpp"

#include "trotter/error.hpp"
#include "trotter/numeric.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace trotter {

namespace {

constexpr double kPsdTolerance = 1e-10;
constexpr double kDifferenceFloor = 1e-14;

void require_psd(const SymmetricMatrix& m, const char* what) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
    const double scale = 1.0 + m.matrix().cwiseAbs().maxCoeff();
    if (solver.eigenvalues()(0) < -kPsdTolerance * scale) {
        std::ostringstream os;
        os << what << ": min eigenvalue " << solver.eigenvalues()(0) << " < 0";
        throw Error(Errc::NotPSD, os.str());
    }
}

std::string profile_label(const ProfileSpec& spec) {
    std::ostringstream os;
    switch (spec.kind) {
        case ProfileKind::power: os << "power(c=" << spec.coefficient << ",beta=" << spec.beta << ")"; break;
        case ProfileKind::linear: os << "linear(c=" << spec.coefficient << ")"; break;
        case ProfileKind::weierstrass:
            os << "weierstrass(c=" << spec.coefficient << ",beta=" << spec.beta << ",K=" << spec.terms << ")";
            break;
    }
    return os.str();
}

} // namespace

// --------------------------------------------------------------------------
// ScalarProfile

ScalarProfile::ScalarProfile(ProfileSpec spec, double horizon) : spec_(spec), horizon_(horizon) {
    if (!(horizon > 0.0)) {
        throw Error(Errc::DomainError, "profile horizon must be > 0");
    }
    if (spec_.coefficient < 0.0) {
        throw Error(Errc::NegativeCoefficient, "profile coefficient must be >= 0");
    }
    if (spec_.kind != ProfileKind::linear && !(spec_.beta > 0.0 && spec_.beta <= 1.0)) {
        throw Error(Errc::DomainError, "profile beta must lie in (0, 1]");
    }
    if (spec_.kind == ProfileKind::weierstrass && (spec_.terms < 0 || spec_.terms > 40)) {
        throw Error(Errc::DomainError, "weierstrass term count must lie in [0, 40]");
    }
}

double ScalarProfile::operator()(double t) const {
    const double c = spec_.coefficient;
    switch (spec_.kind) {
        case ProfileKind::power: return t <= 0.0 ? 0.0 : c * std::pow(t, spec_.beta);
        case ProfileKind::linear: return c * t;
        case ProfileKind::weierstrass: {
            double sum = 0.0;
            for (int k = 0; k <= spec_.terms; ++k) {
                const double freq = std::ldexp(std::numbers::pi, k) / horizon_;
                sum += std::exp2(-spec_.beta * k) * (1.0 + std::cos(freq * t));
            }
            return c * sum;
        }
    }
    return 0.0;
}

double ScalarProfile::holder_exponent() const noexcept {
    return spec_.kind == ProfileKind::linear ? 1.0 : spec_.beta;
}

double ScalarProfile::resolution() const noexcept {
    if (spec_.kind == ProfileKind::weierstrass) {
        // quarter period of the highest term cos(2^K pi t / T)
        return std::ldexp(horizon_, -(spec_.terms + 1));
    }
    return horizon_;
}

// --------------------------------------------------------------------------
// TimeDependentFamily

TimeDependentFamily::TimeDependentFamily(double horizon, Index dim, Sampler sampler, double declared_alpha,
                                         double declared_beta, std::string label, double resolution)
    : horizon_(horizon),
      dim_(dim),
      sampler_(std::move(sampler)),
      declared_alpha_(declared_alpha),
      declared_beta_(declared_beta),
      label_(std::move(label)),
      resolution_(resolution > 0.0 ? std::min(resolution, horizon) : horizon) {
    if (!(horizon > 0.0) || dim < 1) {
        throw Error(Errc::DomainError, "family needs T > 0 and dim >= 1");
    }
    if (!(declared_alpha >= 0.0 && declared_alpha < 1.0)) {
        throw Error(Errc::DomainError, "declared alpha must lie in [0, 1)");
    }
    if (!(declared_beta > 0.0 && declared_beta <= 1.0)) {
        throw Error(Errc::DomainError, "declared beta must lie in (0, 1]");
    }
}

SymmetricMatrix TimeDependentFamily::sample(double t) const {
    const double slack = 1e-12 * horizon_;
    if (!(t >= -slack && t <= horizon_ + slack)) {
        std::ostringstream os;
        os << "t = " << t << " outside [0, " << horizon_ << "]";
        throw Error(Errc::TimeOutOfRange, os.str());
    }
    t = std::clamp(t, 0.0, horizon_);
    Matrix m = sampler_(t);
    if (m.rows() != dim_ || m.cols() != dim_) {
        throw Error(Errc::DimensionMismatch, "sampler returned a matrix of the wrong size");
    }
    return SymmetricMatrix(m);
}

TimeDependentFamily TimeDependentFamily::with_declared_alpha(double alpha) const {
    TimeDependentFamily copy = *this;
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw Error(Errc::DomainError, "declared alpha must lie in [0, 1)");
    }
    copy.declared_alpha_ = alpha;
    return copy;
}

TimeDependentFamily make_scalar_family(const ProfileSpec& spec, double horizon, Index dim) {
    ScalarProfile profile(spec, horizon);
    TimeDependentFamily family(
        horizon, dim,
        [profile, dim](double t) { return Matrix(profile(t) * Matrix::Identity(dim, dim)); }, 0.0,
        profile.holder_exponent(), "scalar:" + profile_label(spec), profile.resolution());
    family.scalar_ = profile;
    return family;
}

TimeDependentFamily make_synthetic_matrix_family(const SymmetricMatrix& b0, const SymmetricMatrix& b1,
                                                 const ProfileSpec& weight, double horizon) {
    if (b0.dim() != b1.dim()) {
        throw Error(Errc::DimensionMismatch, "synthetic family: B0 and B1 differ in size");
    }
    require_psd(b0, "synthetic family B0");
    require_psd(b1, "synthetic family B1");
    ScalarProfile w(weight, horizon);
    Matrix m0 = b0.matrix();
    Matrix m1 = b1.matrix();
    return TimeDependentFamily(
        horizon, b0.dim(), [w, m0, m1](double t) { return Matrix(m0 + w(t) * m1); }, 0.0, w.holder_exponent(),
        "synthetic:" + profile_label(weight), w.resolution());
}

// --------------------------------------------------------------------------
// Heat equation example

Potential Potential::zero() {
    return {"zero", [](double) { return 0.0; }};
}

Potential Potential::constant(double value) {
    return {"constant", [value](double) { return value; }};
}

Potential Potential::sin_squared() {
    return {"sin2", [](double x) {
                const double s = std::sin(x);
                return s * s;
            }};
}

Potential Potential::tent() {
    return {"tent", [](double x) { return std::min(x, std::numbers::pi - x); }};
}

Matrix heat1d_potential_matrix(Index modes, const Potential& potential) {
    if (modes < 1) {
        throw Error(Errc::DomainError, "heat1d needs at least one mode");
    }
    constexpr int n = kHeatQuadratureNodes;
    constexpr double pi = std::numbers::pi;
    const double h = pi / (n - 1);

    // weight_i = Simpson weight * v(x_i)
    Vector weights(n);
    for (int i = 0; i < n; ++i) {
        const double x = i * h;
        const double v = potential.v(x);
        if (v < -1e-12 || !std::isfinite(v)) {
            std::ostringstream os;
            os << "potential " << potential.name << " is " << v << " at x = " << x;
            throw Error(Errc::NegativePotential, os.str());
        }
        const double simpson = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        weights(i) = simpson * h / 3.0 * v;
    }

    Matrix basis(modes, n); // phi_k(x_i)
    const double norm = std::sqrt(2.0 / pi);
    for (Index k = 0; k < modes; ++k) {
        for (int i = 0; i < n; ++i) {
            basis(k, i) = norm * std::sin(static_cast<double>(k + 1) * i * h);
        }
    }
    Matrix m = basis * weights.asDiagonal() * basis.transpose();
    m = 0.5 * (m + m.transpose());

    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.eigenvalues()(0) < 0.0) {
        if (solver.eigenvalues()(0) < -kPsdTolerance) {
            throw Error(Errc::NotPSD, "assembled potential matrix has a negative eigenvalue");
        }
        const Vector clipped = solver.eigenvalues().cwiseMax(0.0);
        m = solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().transpose();
        m = 0.5 * (m + m.transpose());
    }
    return m;
}

Heat1d make_heat1d_family(Index modes, const Potential& potential, const ProfileSpec& weight, double horizon) {
    Vector eigenvalues(modes);
    for (Index k = 0; k < modes; ++k) {
        eigenvalues(k) = static_cast<double>((k + 1) * (k + 1));
    }
    SpectralOperator a = SpectralOperator::from_diagonal(eigenvalues, Role::a_role);
    Matrix m = heat1d_potential_matrix(modes, potential);
    ScalarProfile w(weight, horizon);
    TimeDependentFamily family(
        horizon, modes, [w, m](double t) { return Matrix(w(t) * m); }, 0.0, w.holder_exponent(),
        "heat1d:" + potential.name + ":" + profile_label(weight), w.resolution());
    return Heat1d{std::move(a), std::move(family)};
}

// --------------------------------------------------------------------------
// Assumption estimators

double estimate_c_alpha(const TimeDependentFamily& family, const SpectralOperator& a, double alpha, int grid_n) {
    if (grid_n < 2) {
        throw Error(Errc::DegenerateGrid, "estimate_c_alpha needs grid_n >= 2");
    }
    const Matrix inv = frac_power(a, -alpha).matrix();
    double best = 0.0;
    for (int i = 0; i <= grid_n; ++i) {
        const double t = family.horizon() * i / grid_n;
        best = std::max(best, op_norm(family.sample(t).matrix() * inv));
    }
    return best;
}

namespace {

// D(t_j, t_i) for all 0 <= i < j <= grid_n, indexed [j][i].
std::vector<std::vector<double>> sandwiched_differences(const TimeDependentFamily& family,
                                                        const SpectralOperator& a, double alpha, int grid_n) {
    const Matrix inv = frac_power(a, -alpha).matrix();
    std::vector<Matrix> sandwiched;
    sandwiched.reserve(grid_n + 1);
    for (int i = 0; i <= grid_n; ++i) {
        const double t = family.horizon() * i / grid_n;
        sandwiched.push_back(inv * family.sample(t).matrix() * inv);
    }
    std::vector<std::vector<double>> d(grid_n + 1);
    for (int j = 0; j <= grid_n; ++j) {
        d[j].resize(j);
        for (int i = 0; i < j; ++i) {
            d[j][i] = op_norm(sandwiched[j] - sandwiched[i]);
        }
    }
    return d;
}

} // namespace

AssumptionReport estimate_holder(const TimeDependentFamily& family, const SpectralOperator& a, double alpha,
                                 int grid_n) {
    if (grid_n < 8) {
        throw Error(Errc::DegenerateGrid, "estimate_holder needs grid_n >= 8");
    }
    AssumptionReport report;
    report.grid_size = grid_n;
    report.alpha_used = alpha;
    report.c_alpha_hat = estimate_c_alpha(family, a, alpha, grid_n);

    const auto d = sandwiched_differences(family, a, alpha, grid_n);
    const double h = family.horizon() / grid_n;
    report.gap_envelope.assign(grid_n, 0.0);
    for (int j = 0; j <= grid_n; ++j) {
        for (int i = 0; i < j; ++i) {
            auto& slot = report.gap_envelope[j - i - 1];
            slot = std::max(slot, d[j][i]);
        }
    }

    std::vector<double> xs;
    std::vector<double> ys;
    for (int g = 1; g <= grid_n; ++g) {
        const double e = report.gap_envelope[g - 1];
        if (e > kDifferenceFloor) {
            xs.push_back(std::log(g * h));
            ys.push_back(std::log(e));
        }
    }
    if (xs.empty()) {
        report.holder_L_hat = 0.0;
        report.holder_beta_hat = 1.0;
        report.holder_beta_raw = 1.0;
        report.fit_r2 = 1.0;
        return report;
    }
    if (xs.size() == 1) {
        report.beta_defined = false;
        report.holder_beta_raw = report.holder_beta_hat = 1.0;
        report.holder_L_hat = std::exp(ys[0] - xs[0]);
        report.fit_r2 = 0.0;
        return report;
    }
    const LinearFit fit = fit_line(xs, ys);
    report.holder_beta_raw = fit.slope;
    report.holder_L_hat = std::exp(fit.intercept);
    report.fit_r2 = std::clamp(fit.r2, 0.0, 1.0);
    if (fit.slope > 1.0 - 1e-9) {
        report.beta_clipped = true;
        report.holder_beta_hat = 1.0;
    } else if (fit.slope <= 0.0) {
        report.beta_defined = false;
        report.holder_beta_hat = fit.slope;
    } else {
        report.holder_beta_hat = fit.slope;
    }
    return report;
}

double holder_seminorm(const TimeDependentFamily& family, const SpectralOperator& a, double alpha, double beta,
                       int grid_n) {
    if (grid_n < 2) {
        throw Error(Errc::DegenerateGrid, "holder_seminorm needs grid_n >= 2");
    }
    const auto d = sandwiched_differences(family, a, alpha, grid_n);
    const double h = family.horizon() / grid_n;
    double best = 0.0;
    for (int j = 0; j <= grid_n; ++j) {
        for (int i = 0; i < j; ++i) {
            best = std::max(best, d[j][i] / std::pow((j - i) * h, beta));
        }
    }
    return best;
}

} // namespace trotter
