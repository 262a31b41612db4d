#include "trotter/trotter_products.hpp"

#include "trotter/error.hpp"

#include <sstream>

namespace trotter {

Partition::Partition(double s, double t, long n) : s_(s), t_(t), n_(n) {
    if (!(s >= 0.0 && s <= t) || n < 1) {
        std::ostringstream os;
        os << "need 0 <= s <= t and n >= 1, got s = " << s << ", t = " << t << ", n = " << n;
        throw Error(Errc::InvalidInterval, os.str());
    }
}

double Partition::node(long j) const noexcept {
    if (j >= n_) {
        return t_;
    }
    return s_ + (t_ - s_) * static_cast<double>(j) / static_cast<double>(n_);
}

Matrix step_G(const SpectralOperator& a, const TimeDependentFamily& family, double tau, double t_j) {
    if (tau == 0.0) {
        return Matrix::Identity(a.dim(), a.dim());
    }
    return semigroup(a, tau).matrix() * exp_neg(family.sample(t_j), tau);
}

Matrix step_G_reversed(const SpectralOperator& a, const TimeDependentFamily& family, double tau, double t_j) {
    if (tau == 0.0) {
        return Matrix::Identity(a.dim(), a.dim());
    }
    return exp_neg(family.sample(t_j), tau) * semigroup(a, tau).matrix();
}

namespace {

Partition checked_partition(const SpectralOperator& a, const TimeDependentFamily& family, double s, double t,
                            long n) {
    if (a.dim() != family.dim()) {
        throw Error(Errc::DimensionMismatch, "A and B(t) differ in size");
    }
    if (t > family.horizon()) {
        throw Error(Errc::InvalidInterval, "t exceeds the family horizon");
    }
    return Partition(s, t, n);
}

} // namespace

Propagator trotter_left(const SpectralOperator& a, const TimeDependentFamily& family, double s, double t, long n) {
    const Partition p = checked_partition(a, family, s, t, n);
    Propagator out{Matrix::Identity(a.dim(), a.dim()), t, s, Method::trotter_left, n, 0.0};
    if (s == t) {
        return out;
    }
    const Matrix ea = semigroup(a, p.tau()).matrix();
    for (long j = 0; j < n; ++j) {
        out.matrix = ea * (exp_neg(family.sample(p.node(j)), p.tau()) * out.matrix);
    }
    return out;
}

Propagator trotter_right(const SpectralOperator& a, const TimeDependentFamily& family, double s, double t, long n) {
    const Partition p = checked_partition(a, family, s, t, n);
    Propagator out{Matrix::Identity(a.dim(), a.dim()), t, s, Method::trotter_right, n, 0.0};
    if (s == t) {
        return out;
    }
    const Matrix ea = semigroup(a, p.tau()).matrix();
    for (long j = 1; j <= n; ++j) {
        out.matrix = exp_neg(family.sample(p.node(j)), p.tau()) * (ea * out.matrix);
    }
    return out;
}

} // namespace trotter
