#include "trotter/bounds_and_rates.hpp"

#include "trotter/error.hpp"
#include "trotter/numeric.hpp"
#include "trotter/reference_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace trotter {

double beta_function(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) {
        throw Error(Errc::DomainError, "beta_function needs positive arguments");
    }
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

namespace {

void check_unit_interval(double alpha, double gamma) {
    if (!(alpha >= 0.0 && alpha < 1.0 && gamma >= 0.0 && gamma < 1.0)) {
        throw Error(Errc::DomainError, "alpha and gamma must lie in [0, 1)");
    }
}

BetaSumRow finish_row(long n, double alpha, double gamma, double lhs, double beta) {
    BetaSumRow row;
    row.n = n;
    row.alpha = alpha;
    row.gamma = gamma;
    row.lhs = lhs;
    row.rhs = beta * std::pow(static_cast<double>(n), 1.0 - gamma - alpha);
    row.holds = row.lhs <= row.rhs * (1.0 + 1e-12);
    return row;
}

} // namespace

BetaSumRow beta_sum_bound(long n, double alpha, double gamma) {
    check_unit_interval(alpha, gamma);
    if (n < 2) {
        throw Error(Errc::DomainError, "beta_sum_bound needs n >= 2");
    }
    double lhs = 0.0;
    for (long k = 1; k < n; ++k) {
        lhs += std::pow(static_cast<double>(n - k), -gamma) * std::pow(static_cast<double>(k), -alpha);
    }
    return finish_row(n, alpha, gamma, lhs, beta_function(1.0 - alpha, 1.0 - gamma));
}

std::vector<BetaSumRow> beta_sum_scan(long n_max, const std::vector<double>& grid) {
    if (n_max < 2) {
        throw Error(Errc::DomainError, "beta_sum_scan needs n_max >= 2");
    }
    std::vector<BetaSumRow> rows;
    std::vector<double> ka(n_max);
    std::vector<double> kg(n_max);
    for (double alpha : grid) {
        for (double gamma : grid) {
            if (gamma < alpha) {
                continue;
            }
            check_unit_interval(alpha, gamma);
            for (long k = 1; k < n_max; ++k) {
                ka[k] = std::pow(static_cast<double>(k), -alpha);
                kg[k] = std::pow(static_cast<double>(k), -gamma);
            }
            const double beta = beta_function(1.0 - alpha, 1.0 - gamma);
            for (long n = 2; n <= n_max; ++n) {
                double lhs = 0.0;
                for (long k = 1; k < n; ++k) {
                    lhs += kg[n - k] * ka[k];
                }
                rows.push_back(finish_row(n, alpha, gamma, lhs, beta));
            }
        }
    }
    return rows;
}

double z_constant(double gamma, double beta, double c_gamma, double holder_l, double horizon) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw Error(Errc::DomainError, "z_constant needs gamma in (0, 1)");
    }
    if (!(beta > 0.0 && beta <= 1.0) || c_gamma < 0.0 || holder_l < 0.0 || !(horizon > 0.0)) {
        throw Error(Errc::DomainError, "z_constant needs beta in (0, 1], C >= 0, L >= 0, T > 0");
    }
    const double c = c_gamma;
    const double t = horizon;
    const double cubic = 2.0 * c * c * c / ((2.0 - gamma) * (3.0 - gamma));
    const double square = 2.0 * c * c;
    const double linear = 2.0 * c / ((1.0 + gamma) * gamma);
    const double holder = holder_l / (1.0 + beta);
    if (gamma <= beta) {
        return cubic * std::pow(t, 2.0 - 2.0 * gamma) + square * std::pow(t, 1.0 - gamma) + linear +
               holder * std::pow(t, beta - gamma);
    }
    return cubic * std::pow(t, 2.0 - gamma - beta) + square * std::pow(t, 1.0 - beta) +
           linear * std::pow(t, gamma - beta) + holder;
}

long n0_threshold(double gamma, double c_gamma, double horizon, double lambda) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw Error(Errc::DomainError, "n0_threshold needs gamma in (0, 1)");
    }
    if (c_gamma < 0.0 || !(horizon > 0.0)) {
        throw Error(Errc::DomainError, "n0_threshold needs C >= 0 and T > 0");
    }
    lambda = std::max(lambda, 1.0);
    const double base = 2.0 * (lambda / (1.0 - gamma) + 1.0) * c_gamma;
    const double x = std::pow(base, 1.0 / (1.0 - gamma)) * horizon;
    return static_cast<long>(std::floor(x)) + 1;
}

std::optional<double> m_gamma_solve(double c0, double c1, double c2, double n, double gamma, double alpha) {
    if (c0 < 0.0 || c1 < 0.0 || c2 < 0.0) {
        throw Error(Errc::DomainError, "m_gamma_solve needs c0, c1, c2 >= 0");
    }
    if (!(gamma > 0.0 && gamma < 1.0) || !(alpha >= 0.0 && alpha <= gamma)) {
        throw Error(Errc::DomainError, "m_gamma_solve needs 0 <= alpha <= gamma < 1, gamma > 0");
    }
    if (c1 > 0.0 && !(n > std::pow(c1, 1.0 / (1.0 - gamma)))) {
        std::ostringstream os;
        os << "n = " << n << " does not exceed c1^{1/(1-gamma)} = " << std::pow(c1, 1.0 / (1.0 - gamma));
        throw Error(Errc::FeasibilityViolated, os.str());
    }
    const double slope = c1 * std::pow(n, gamma - 1.0);
    const double exponent = alpha / gamma;
    auto residual = [&](double m) { return c0 + slope * m + c2 * std::pow(m, exponent) - m; };

    constexpr double upper = 1e8;
    double lo = c0;
    if (residual(lo) <= 0.0) {
        return lo;
    }
    double hi = upper;
    if (residual(hi) > 0.0) {
        return std::nullopt;
    }
    while (hi - lo > 1e-8 * hi) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) <= 0.0 ? hi : lo) = mid;
    }
    return hi;
}

namespace {

struct GridPair {
    double s;
    double t;
};

std::vector<GridPair> grid_pairs(double horizon, int grid_n) {
    std::vector<GridPair> pairs;
    for (int j = 1; j <= grid_n; ++j) {
        for (int i = 0; i < j; ++i) {
            const double s = horizon * i / grid_n;
            const double t = j == grid_n ? horizon : horizon * j / grid_n;
            pairs.push_back({s, t});
        }
    }
    return pairs;
}

} // namespace

std::vector<SupErrorRow> sup_error_sweep(const SpectralOperator& a, const TimeDependentFamily& family,
                                         const std::vector<long>& n_list, int grid_n, double tol, unsigned threads) {
    if (grid_n < 2) {
        throw Error(Errc::DegenerateGrid, "sup_error needs grid_n >= 2");
    }
    const auto pairs = grid_pairs(family.horizon(), grid_n);
    std::vector<Matrix> refs(pairs.size());
    parallel_for(pairs.size(), threads,
                 [&](std::size_t p) { refs[p] = refine_to_tol(a, family, pairs[p].s, pairs[p].t, tol).matrix; });

    const std::size_t np = pairs.size();
    std::vector<double> left(n_list.size() * np);
    std::vector<double> right(n_list.size() * np);
    parallel_for(left.size(), threads, [&](std::size_t idx) {
        const long n = n_list[idx / np];
        const auto& pr = pairs[idx % np];
        left[idx] = op_norm(trotter_left(a, family, pr.s, pr.t, n).matrix - refs[idx % np]);
        right[idx] = op_norm(trotter_right(a, family, pr.s, pr.t, n).matrix - refs[idx % np]);
    });

    std::vector<SupErrorRow> rows;
    for (std::size_t k = 0; k < n_list.size(); ++k) {
        SupErrorRow row;
        row.n = n_list[k];
        for (std::size_t p = 0; p < np; ++p) {
            row.left = std::max(row.left, left[k * np + p]);
            row.right = std::max(row.right, right[k * np + p]);
        }
        rows.push_back(row);
    }
    return rows;
}

double sup_error(const SpectralOperator& a, const TimeDependentFamily& family, long n, int grid_n, double tol,
                 Variant variant) {
    const auto rows = sup_error_sweep(a, family, {n}, grid_n, tol);
    return variant == Variant::left ? rows.front().left : rows.front().right;
}

ConvergenceReport rate_fit(std::vector<std::pair<long, double>> entries, double predicted_beta, double alpha) {
    std::sort(entries.begin(), entries.end());
    ConvergenceReport report;
    report.entries = entries;
    report.predicted_beta = predicted_beta;
    report.condition_ok = predicted_beta > 2.0 * alpha - 1.0;

    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [n, err] : entries) {
        if (err < 0.0 || n < 1) {
            throw Error(Errc::DomainError, "rate_fit needs n >= 1 and nonnegative errors");
        }
        if (err > kErrorFloor) {
            xs.push_back(std::log(static_cast<double>(n)));
            ys.push_back(std::log(err));
        }
    }
    if (xs.empty() && !entries.empty()) {
        throw Error(Errc::AllBelowFloor, "every error is at or below 1e-13");
    }
    if (xs.size() < 4) {
        throw Error(Errc::TooFewPoints, "rate_fit needs at least four errors above 1e-13");
    }
    const LinearFit fit = fit_line(xs, ys);
    report.fitted_slope = -fit.slope;
    report.fitted_log_constant = fit.intercept;
    report.r2 = fit.r2;
    report.points_used = static_cast<int>(xs.size());
    return report;
}

} // namespace trotter
