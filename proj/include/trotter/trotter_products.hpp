// trotter_products.hpp: split-step products
//   V_n(t,s) = G_{n-1} ... G_0,  G_j = e^{-tau A} e^{-tau B(t_j)}      (left nodes)
//   W_n(t,s) = G~_n ... G~_1,    G~_j = e^{-tau B(t_j)} e^{-tau A}     (right nodes)
// with tau = (t - s)/n and t_j = s + j tau.

#pragma once

#include "trotter/operator_core.hpp"
#include "trotter/problem_families.hpp"

#include <string_view>

namespace trotter {

class Partition {
public:
    // Throws InvalidInterval unless 0 <= s <= t and n >= 1.
    Partition(double s, double t, long n);

    [[nodiscard]] double s() const noexcept { return s_; }
    [[nodiscard]] double t() const noexcept { return t_; }
    [[nodiscard]] long n() const noexcept { return n_; }
    [[nodiscard]] double tau() const noexcept { return (t_ - s_) / static_cast<double>(n_); }
    // node(0) == s and node(n) == t exactly.
    [[nodiscard]] double node(long j) const noexcept;

private:
    double s_;
    double t_;
    long n_;
};

// Which product: V_n (left nodes) or W_n (right nodes).
enum class Variant { left, right };

enum class Method { trotter_left, trotter_right, reference, analytic };

constexpr std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::trotter_left: return "trotter_left";
        case Method::trotter_right: return "trotter_right";
        case Method::reference: return "reference";
        case Method::analytic: return "analytic";
    }
    return "unknown";
}

struct Propagator {
    Matrix matrix;
    double t = 0.0;
    double s = 0.0;
    Method method = Method::reference;
    long steps = 0;
    double error_estimate = 0.0; // reference only: last halving difference
};

// e^{-tau A} e^{-tau B(t_j)}
Matrix step_G(const SpectralOperator& a, const TimeDependentFamily& family, double tau, double t_j);
// e^{-tau B(t_j)} e^{-tau A}
Matrix step_G_reversed(const SpectralOperator& a, const TimeDependentFamily& family, double tau, double t_j);

// Throws InvalidInterval unless 0 <= s <= t <= T and n >= 1.
Propagator trotter_left(const SpectralOperator& a, const TimeDependentFamily& family, double s, double t, long n);
Propagator trotter_right(const SpectralOperator& a, const TimeDependentFamily& family, double s, double t, long n);

inline Propagator trotter_product(Variant v, const SpectralOperator& a, const TimeDependentFamily& family, double s,
                                  double t, long n) {
    return v == Variant::left ? trotter_left(a, family, s, t, n) : trotter_right(a, family, s, t, n);
}

} // namespace trotter
