// bounds_and_rates.hpp: scalar bound machinery and convergence measurement.

#pragma once

#include "trotter/trotter_products.hpp"

#include <optional>
#include <vector>

namespace trotter {

// B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b), through lgamma.
double beta_function(double a, double b);

struct BetaSumRow {
    long n = 0;
    double alpha = 0.0;
    double gamma = 0.0;
    double lhs = 0.0; // sum_{k=1}^{n-1} (n-k)^{-gamma} k^{-alpha}
    double rhs = 0.0; // B(1-alpha, 1-gamma) n^{1-gamma-alpha}
    bool holds = false;
};

BetaSumRow beta_sum_bound(long n, double alpha, double gamma);

// Every n in [2, n_max] for every (alpha, gamma) in grid x grid with gamma >= alpha.
// Rows come out ordered by (alpha, gamma, n).
std::vector<BetaSumRow> beta_sum_scan(long n_max, const std::vector<double>& grid);

// Lemma constant for ||A^-g (T(tau) - U(tau)) A^-g|| <= Z tau^{1+min(g,b)}.
// Throws DomainError unless gamma in (0,1), beta in (0,1], C, L >= 0, T > 0.
double z_constant(double gamma, double beta, double c_gamma, double holder_l, double horizon);

// floor((2 (lambda/(1-gamma) + 1) C)^{1/(1-gamma)} T) + 1 with lambda clamped to >= 1.
long n0_threshold(double gamma, double c_gamma, double horizon, double lambda = 1.0);

// Smallest M in [c0, 1e8] with c0 + c1 M n^{gamma-1} + c2 M^{alpha/gamma} <= M,
// to relative 1e-8. nullopt when 1e8 still violates. Throws FeasibilityViolated
// when n <= c1^{1/(1-gamma)}.
std::optional<double> m_gamma_solve(double c0, double c1, double c2, double n, double gamma, double alpha);

// max over grid pairs s = iT/g < t = jT/g of ||V_n(t,s) - U(t,s)||.
double sup_error(const SpectralOperator& a, const TimeDependentFamily& family, long n, int grid_n, double tol,
                 Variant variant);

struct SupErrorRow {
    long n = 0;
    double left = 0.0;
    double right = 0.0;
};

// sup_error for both variants over n_list. The reference propagators are
// computed once per grid pair and reused for every n.
std::vector<SupErrorRow> sup_error_sweep(const SpectralOperator& a, const TimeDependentFamily& family,
                                         const std::vector<long>& n_list, int grid_n, double tol,
                                         unsigned threads = 1);

inline constexpr double kErrorFloor = 1e-13;

struct ConvergenceReport {
    std::vector<std::pair<long, double>> entries;
    double fitted_slope = 0.0; // p in error ~ C n^{-p}
    double fitted_log_constant = 0.0;
    double r2 = 0.0;
    double predicted_beta = 0.0;
    bool condition_ok = false; // beta > 2 alpha - 1
    int points_used = 0;
};

// Least squares on log error vs log n over entries above 1e-13. Throws
// AllBelowFloor when none qualify and TooFewPoints when fewer than four do.
ConvergenceReport rate_fit(std::vector<std::pair<long, double>> entries, double predicted_beta, double alpha);

} // namespace trotter
