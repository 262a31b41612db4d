#include "trotter/reference_oracle.hpp"

#include "trotter/error.hpp"
#include "trotter/numeric.hpp"

#include <cmath>
#include <sstream>

namespace trotter {

namespace {

void check_interval(const SpectralOperator& a, const TimeDependentFamily& family, double s, double t) {
    if (a.dim() != family.dim()) {
        throw Error(Errc::DimensionMismatch, "A and B(t) differ in size");
    }
    if (!(s >= 0.0 && s <= t && t <= family.horizon())) {
        std::ostringstream os;
        os << "need 0 <= s <= t <= T, got s = " << s << ", t = " << t;
        throw Error(Errc::InvalidInterval, os.str());
    }
}

} // namespace

Propagator analytic_commuting(const SpectralOperator& a, const TimeDependentFamily& family, double s, double t) {
    const auto& profile = family.scalar_profile();
    if (!profile) {
        throw Error(Errc::NonCommutingFamily, "family " + family.label() + " is not of the form b(t) I");
    }
    check_interval(a, family, s, t);
    Propagator out{Matrix::Identity(a.dim(), a.dim()), t, s, Method::analytic, 0, 0.0};
    if (s == t) {
        return out;
    }
    const long panels = static_cast<long>(std::ceil((t - s) / profile->resolution() - 1e-9));
    const double integral =
        profile->is_zero() ? 0.0 : integrate_adaptive_simpson(std::cref(*profile), s, t, 1e-12, panels);
    out.matrix = std::exp(-integral) * semigroup(a, t - s).matrix();
    out.steps = panels;
    return out;
}

Propagator midpoint_exponential(const SpectralOperator& a, const TimeDependentFamily& family, double s, double t,
                                long m) {
    check_interval(a, family, s, t);
    if (m < 1) {
        throw Error(Errc::DomainError, "midpoint_exponential needs m >= 1");
    }
    Propagator out{Matrix::Identity(a.dim(), a.dim()), t, s, Method::reference, m, 0.0};
    if (s == t) {
        return out;
    }
    const Matrix am = a.reconstruct();
    const double h = (t - s) / static_cast<double>(m);
    for (long i = 0; i < m; ++i) {
        const double r = s + (static_cast<double>(i) + 0.5) * h;
        const SymmetricMatrix c = SymmetricMatrix::assume_symmetric(am + family.sample(r).matrix());
        out.matrix = exp_neg(c, h) * out.matrix;
    }
    return out;
}

Propagator refine_to_tol(const SpectralOperator& a, const TimeDependentFamily& family, double s, double t,
                         double tol) {
    if (!(tol >= 1e-12)) {
        throw Error(Errc::DomainError, "refine_to_tol needs tol >= 1e-12");
    }
    check_interval(a, family, s, t);
    if (s == t) {
        return Propagator{Matrix::Identity(a.dim(), a.dim()), t, s, Method::reference, 0, 0.0};
    }
    long m = 16;
    while (m < kOracleMaxSteps && (t - s) / static_cast<double>(m) > family.resolution()) {
        m *= 2;
    }
    Propagator coarse = midpoint_exponential(a, family, s, t, m);
    for (;;) {
        if (2 * m > kOracleMaxSteps) {
            std::ostringstream os;
            os << "no convergence to " << tol << " on [" << s << ", " << t << "] within 2^20 steps";
            throw Error(Errc::CapExceeded, os.str());
        }
        Propagator fine = midpoint_exponential(a, family, s, t, 2 * m);
        const double diff = op_norm(fine.matrix - coarse.matrix);
        if (diff <= tol) {
            fine.error_estimate = diff;
            return fine;
        }
        coarse = std::move(fine);
        m *= 2;
    }
}

} // namespace trotter
