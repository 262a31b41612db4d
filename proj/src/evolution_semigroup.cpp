#include "trotter/evolution_semigroup.hpp"

#include "trotter/error.hpp"
#include "trotter/numeric.hpp"
#include "trotter/reference_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace trotter {

// --------------------------------------------------------------------------
// SlottedFunction

SlottedFunction::SlottedFunction(double horizon, std::vector<Vector> slots)
    : horizon_(horizon), slots_(std::move(slots)) {
    if (slots_.empty() || !(horizon > 0.0)) {
        throw Error(Errc::DomainError, "slotted function needs N >= 1 and T > 0");
    }
    for (const auto& v : slots_) {
        if (v.size() != slots_.front().size()) {
            throw Error(Errc::DimensionMismatch, "slots differ in size");
        }
    }
}

SlottedFunction SlottedFunction::zero(double horizon, int slots, Index dim) {
    return SlottedFunction(horizon, std::vector<Vector>(std::max(slots, 0), Vector::Zero(dim)));
}

double SlottedFunction::norm() const {
    double sum = 0.0;
    for (const auto& v : slots_) {
        sum += v.squaredNorm();
    }
    return std::sqrt(slot_width() * sum);
}

// --------------------------------------------------------------------------
// BlockShiftOperator

BlockShiftOperator::BlockShiftOperator(double horizon, int shift, std::vector<Matrix> blocks)
    : horizon_(horizon), shift_(shift), blocks_(std::move(blocks)) {
    if (blocks_.empty() || !(horizon > 0.0) || shift < 0) {
        throw Error(Errc::DomainError, "block operator needs N >= 1, T > 0, shift >= 0");
    }
    const Index d = blocks_.front().rows();
    for (auto& b : blocks_) {
        if (b.rows() != d || b.cols() != d) {
            throw Error(Errc::DimensionMismatch, "blocks differ in size");
        }
    }
    for (int i = 0; i < std::min(shift_, slots()); ++i) {
        blocks_[i].setZero();
    }
}

BlockShiftOperator BlockShiftOperator::identity(double horizon, int slots, Index dim) {
    return BlockShiftOperator(horizon, 0, std::vector<Matrix>(slots, Matrix::Identity(dim, dim)));
}

BlockShiftOperator BlockShiftOperator::zero(double horizon, int slots, Index dim, int shift) {
    return BlockShiftOperator(horizon, shift, std::vector<Matrix>(slots, Matrix::Zero(dim, dim)));
}

SlottedFunction BlockShiftOperator::apply(const SlottedFunction& f) const {
    if (f.slots() != slots() || f.dim() != dim()) {
        throw Error(Errc::DimensionMismatch, "slotted function does not match the operator");
    }
    SlottedFunction out = SlottedFunction::zero(horizon_, slots(), dim());
    for (int i = shift_; i < slots(); ++i) {
        out.slot(i) = blocks_[i] * f.slot(i - shift_);
    }
    return out;
}

Matrix BlockShiftOperator::assemble() const {
    const Index d = dim();
    Matrix m = Matrix::Zero(slots() * d, slots() * d);
    for (int i = shift_; i < slots(); ++i) {
        m.block(i * d, (i - shift_) * d, d, d) = blocks_[i];
    }
    return m;
}

BlockShiftOperator BlockShiftOperator::power(int n) const {
    if (n < 0) {
        throw Error(Errc::DomainError, "negative operator power");
    }
    BlockShiftOperator out = identity(horizon_, slots(), dim());
    for (int j = 0; j < n; ++j) {
        out = compose(*this, out);
    }
    return out;
}

BlockShiftOperator BlockShiftOperator::left_multiply(const Matrix& m) const {
    std::vector<Matrix> blocks(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        blocks[i] = m * blocks_[i];
    }
    return BlockShiftOperator(horizon_, shift_, std::move(blocks));
}

BlockShiftOperator BlockShiftOperator::right_multiply(const Matrix& m) const {
    std::vector<Matrix> blocks(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        blocks[i] = blocks_[i] * m;
    }
    return BlockShiftOperator(horizon_, shift_, std::move(blocks));
}

BlockShiftOperator compose(const BlockShiftOperator& outer, const BlockShiftOperator& inner) {
    if (outer.slots() != inner.slots() || outer.dim() != inner.dim()) {
        throw Error(Errc::DimensionMismatch, "composing block operators of different shape");
    }
    const int n = outer.slots();
    const int shift = outer.shift() + inner.shift();
    std::vector<Matrix> blocks(n, Matrix::Zero(outer.dim(), outer.dim()));
    for (int i = shift; i < n; ++i) {
        blocks[i] = outer.block(i) * inner.block(i - outer.shift());
    }
    return BlockShiftOperator(outer.horizon(), shift, std::move(blocks));
}

BlockShiftOperator operator-(const BlockShiftOperator& x, const BlockShiftOperator& y) {
    if (x.slots() != y.slots() || x.dim() != y.dim() || x.shift() != y.shift()) {
        throw Error(Errc::DimensionMismatch, "subtracting block operators of different shape or shift");
    }
    std::vector<Matrix> blocks(x.slots());
    for (int i = 0; i < x.slots(); ++i) {
        blocks[i] = x.block(i) - y.block(i);
    }
    return BlockShiftOperator(x.horizon(), x.shift(), std::move(blocks));
}

double block_norm(const BlockShiftOperator& g) {
    double best = 0.0;
    for (int i = std::min(g.shift(), g.slots()); i < g.slots(); ++i) {
        best = std::max(best, op_norm(g.block(i)));
    }
    return best;
}

// --------------------------------------------------------------------------
// Builders

namespace {

void check_grid(int slots, int k) {
    if (slots < 1 || k < 0) {
        throw Error(Errc::DomainError, "need N >= 1 and k >= 0");
    }
}

double slot_time(double horizon, int slots, int i) {
    return i >= slots ? horizon : horizon * i / slots;
}

} // namespace

BlockShiftOperator build_U0(const SpectralOperator& a, int slots, int k, double horizon) {
    check_grid(slots, k);
    if (k >= slots) {
        return BlockShiftOperator::zero(horizon, slots, a.dim(), k);
    }
    const double tau = horizon * k / slots;
    return BlockShiftOperator(horizon, k, std::vector<Matrix>(slots, semigroup(a, tau).matrix()));
}

BlockShiftOperator build_expB(const TimeDependentFamily& family, int slots, double tau) {
    check_grid(slots, 0);
    std::vector<Matrix> blocks(slots);
    for (int i = 0; i < slots; ++i) {
        blocks[i] = exp_neg(family.sample(slot_time(family.horizon(), slots, i)), tau);
    }
    return BlockShiftOperator(family.horizon(), 0, std::move(blocks));
}

BlockShiftOperator build_T(const SpectralOperator& a, const TimeDependentFamily& family, int slots, int k) {
    check_grid(slots, k);
    if (k >= slots) {
        return BlockShiftOperator::zero(family.horizon(), slots, a.dim(), k);
    }
    const double tau = family.horizon() * k / slots;
    return compose(build_U0(a, slots, k, family.horizon()), build_expB(family, slots, tau));
}

BlockShiftOperator build_T_reversed(const SpectralOperator& a, const TimeDependentFamily& family, int slots,
                                   int k) {
    check_grid(slots, k);
    if (k >= slots) {
        return BlockShiftOperator::zero(family.horizon(), slots, a.dim(), k);
    }
    const double tau = family.horizon() * k / slots;
    return compose(build_expB(family, slots, tau), build_U0(a, slots, k, family.horizon()));
}

BlockShiftOperator build_U_evo(const SpectralOperator& a, const TimeDependentFamily& family, int slots, int k,
                               double tol, unsigned threads) {
    ReferenceTable table(a, family, slots, tol);
    return table.evolution(k, threads);
}

ReferenceTable::ReferenceTable(const SpectralOperator& a, const TimeDependentFamily& family, int slots, double tol,
                               ReferenceMode mode)
    : a_(a), family_(family), slots_(slots), tol_(tol), mode_(mode) {
    check_grid(slots, 0);
}

const Matrix& ReferenceTable::get(int i, int j) {
    if (!(0 <= i && i <= j && j <= slots_)) {
        throw Error(Errc::InvalidInterval, "ReferenceTable::get needs 0 <= i <= j <= N");
    }
    auto it = cache_.find({i, j});
    if (it == cache_.end() && mode_ == ReferenceMode::chained && j > i + 1) {
        // Extend the longest cached prefix (i, m) one unit at a time.
        int m = j - 1;
        while (m > i + 1 && !cache_.contains({i, m})) {
            --m;
        }
        for (int r = m + 1; r <= j; ++r) {
            Matrix u = get(r - 1, r) * get(i, r - 1);
            it = cache_.emplace(std::make_pair(i, r), std::move(u)).first;
        }
    }
    if (it == cache_.end()) {
        const double horizon = family_.horizon();
        Matrix u = refine_to_tol(a_, family_, slot_time(horizon, slots_, i), slot_time(horizon, slots_, j), tol_)
                       .matrix;
        it = cache_.emplace(std::make_pair(i, j), std::move(u)).first;
    }
    return it->second;
}

void ReferenceTable::prefetch(const std::vector<std::pair<int, int>>& pairs, unsigned threads) {
    std::vector<std::pair<int, int>> missing;
    for (const auto& p : pairs) {
        if (!(0 <= p.first && p.first <= p.second && p.second <= slots_)) {
            throw Error(Errc::InvalidInterval, "ReferenceTable::prefetch needs 0 <= i <= j <= N");
        }
        if (mode_ == ReferenceMode::direct || p.second <= p.first + 1) {
            if (!cache_.contains(p)) {
                missing.push_back(p);
            }
            continue;
        }
        for (int u = p.first; u < p.second; ++u) {
            if (!cache_.contains({u, u + 1})) {
                missing.emplace_back(u, u + 1);
            }
        }
    }
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    std::vector<Matrix> results(missing.size());
    const double horizon = family_.horizon();
    parallel_for(missing.size(), threads, [&](std::size_t idx) {
        const auto [i, j] = missing[idx];
        results[idx] =
            refine_to_tol(a_, family_, slot_time(horizon, slots_, i), slot_time(horizon, slots_, j), tol_).matrix;
    });
    for (std::size_t idx = 0; idx < missing.size(); ++idx) {
        cache_.emplace(missing[idx], std::move(results[idx]));
    }
}

BlockShiftOperator ReferenceTable::evolution(int k, unsigned threads) {
    check_grid(slots_, k);
    if (k >= slots_) {
        return BlockShiftOperator::zero(family_.horizon(), slots_, a_.dim(), k);
    }
    std::vector<std::pair<int, int>> pairs;
    for (int i = k; i < slots_; ++i) {
        pairs.emplace_back(i - k, i);
    }
    prefetch(pairs, threads);
    std::vector<Matrix> blocks(slots_, Matrix::Zero(a_.dim(), a_.dim()));
    for (int i = k; i < slots_; ++i) {
        blocks[i] = get(i - k, i);
    }
    return BlockShiftOperator(family_.horizon(), k, std::move(blocks));
}

UnitChain::UnitChain(const SpectralOperator& a, const TimeDependentFamily& family, int slots, double tol,
                     unsigned threads)
    : horizon_(family.horizon()), dim_(a.dim()), tol_(tol), units_(std::max(slots, 1)) {
    check_grid(slots, 0);
    parallel_for(units_.size(), threads, [&](std::size_t j) {
        const int i = static_cast<int>(j);
        units_[j] = refine_to_tol(a, family, slot_time(horizon_, slots, i), slot_time(horizon_, slots, i + 1),
                                  tol)
                        .matrix;
    });
}

Matrix UnitChain::between(int i, int j) const {
    if (!(0 <= i && i <= j && j <= slots())) {
        throw Error(Errc::InvalidInterval, "UnitChain::between needs 0 <= i <= j <= N");
    }
    Matrix out = Matrix::Identity(dim_, dim_);
    for (int u = i; u < j; ++u) {
        out = units_[u] * out;
    }
    return out;
}

BlockShiftOperator UnitChain::evolution(int k) const {
    check_grid(slots(), k);
    if (k >= slots()) {
        return BlockShiftOperator::zero(horizon_, slots(), dim_, k);
    }
    std::vector<Matrix> blocks(slots(), Matrix::Zero(dim_, dim_));
    for (int i = k; i < slots(); ++i) {
        blocks[i] = between(i - k, i);
    }
    return BlockShiftOperator(horizon_, k, std::move(blocks));
}

// --------------------------------------------------------------------------
// Correspondence between the semigroup and propagator errors

CorrespondenceReport correspondence_check(ReferenceTable& table, int n, Variant variant, unsigned threads) {
    const int slots = table.slots();
    if (n < 1 || slots % n != 0) {
        std::ostringstream os;
        os << "n = " << n << " does not divide N = " << slots;
        throw Error(Errc::IndivisibleGrid, os.str());
    }
    const SpectralOperator& a = table.op();
    const TimeDependentFamily& family = table.family();
    const double horizon = family.horizon();
    CorrespondenceReport report;
    for (int k = n; k <= slots; k += n) {
        ++report.taus_tested;
        const BlockShiftOperator u = table.evolution(k, threads);
        const BlockShiftOperator tn = build_T(variant, a, family, slots, k / n).power(n);
        report.semigroup_error = std::max(report.semigroup_error, block_norm(u - tn));
        for (int i = k; i < slots; ++i) {
            const double s = slot_time(horizon, slots, i - k);
            const double t = slot_time(horizon, slots, i);
            const Matrix v = trotter_product(variant, a, family, s, t, n).matrix;
            report.propagator_error = std::max(report.propagator_error, op_norm(u.block(i) - v));
        }
    }
    report.gap = std::abs(report.semigroup_error - report.propagator_error);
    return report;
}

CorrespondenceReport correspondence_check(const SpectralOperator& a, const TimeDependentFamily& family, int slots,
                                          int n, double tol, Variant variant, unsigned threads) {
    if (n < 1 || slots < 1 || slots % n != 0) {
        std::ostringstream os;
        os << "n = " << n << " does not divide N = " << slots;
        throw Error(Errc::IndivisibleGrid, os.str());
    }
    ReferenceTable table(a, family, slots, tol);
    return correspondence_check(table, n, variant, threads);
}

// --------------------------------------------------------------------------
// Lemma checks

namespace {

// A zero bound (C = L = 0) can only be met up to the oracle tolerance.
double ratio_or_flag(double lhs, double bound, double tol) {
    if (bound > 0.0) {
        return lhs / bound;
    }
    return lhs <= tol ? 0.0 : std::numeric_limits<double>::infinity();
}

} // namespace

std::vector<OneStepReport> check_onestep_36(const SpectralOperator& a, const TimeDependentFamily& family,
                                            const std::vector<double>& gammas, const std::vector<double>& taus,
                                            int grid_n, double tol, int c_grid) {
    std::vector<OneStepReport> reports(gammas.size());
    std::vector<Matrix> inverses;
    for (std::size_t g = 0; g < gammas.size(); ++g) {
        if (!(gammas[g] >= 0.0 && gammas[g] < 1.0)) {
            throw Error(Errc::DomainError, "check_onestep_36 needs gamma in [0, 1)");
        }
        reports[g].gamma = gammas[g];
        reports[g].c_gamma = estimate_c_alpha(family, a, gammas[g], c_grid);
        inverses.push_back(frac_power(a, -gammas[g]).matrix());
    }
    const double horizon = family.horizon();
    for (double tau : taus) {
        if (!(tau > 0.0 && tau <= horizon)) {
            throw Error(Errc::DomainError, "one-step tau must lie in (0, T]");
        }
        std::vector<OneStepRow> rows(gammas.size(), OneStepRow{tau, 0.0, 0.0});
        for (int i = 0; i <= grid_n; ++i) {
            const double t = horizon * i / grid_n;
            if (t + tau > horizon * (1.0 + 1e-14)) {
                break;
            }
            const double end = std::min(t + tau, horizon);
            const Matrix diff = step_G(a, family, end - t, t) - refine_to_tol(a, family, t, end, tol).matrix;
            for (std::size_t g = 0; g < gammas.size(); ++g) {
                const double bound = 2.0 * reports[g].c_gamma * tau;
                rows[g].ratio_left =
                    std::max(rows[g].ratio_left, ratio_or_flag(op_norm(inverses[g] * diff), bound, tol));
                rows[g].ratio_right =
                    std::max(rows[g].ratio_right, ratio_or_flag(op_norm(diff * inverses[g]), bound, tol));
            }
        }
        for (std::size_t g = 0; g < gammas.size(); ++g) {
            reports[g].max_ratio = std::max({reports[g].max_ratio, rows[g].ratio_left, rows[g].ratio_right});
            reports[g].rows.push_back(rows[g]);
        }
    }
    for (auto& r : reports) {
        r.passed = r.max_ratio <= 1.0 + kLemmaSlack;
    }
    return reports;
}

OneStepReport check_onestep_36(const SpectralOperator& a, const TimeDependentFamily& family, double gamma,
                               const std::vector<double>& taus, int grid_n, double tol, int c_grid) {
    return check_onestep_36(a, family, std::vector<double>{gamma}, taus, grid_n, tol, c_grid).front();
}

namespace {

int slots_for(double tau, double horizon, int slots) {
    const double k = tau / horizon * slots;
    const double rounded = std::round(k);
    if (rounded < 1.0 || std::abs(k - rounded) > 1e-9 * std::max(1.0, k)) {
        std::ostringstream os;
        os << "tau = " << tau << " is not a whole number of slots (N = " << slots << ")";
        throw Error(Errc::IndivisibleGrid, os.str());
    }
    return static_cast<int>(rounded);
}

} // namespace

SandwichReport check_sandwich_37(const SpectralOperator& a, const TimeDependentFamily& family, double gamma,
                                 double beta, int slots, const std::vector<double>& taus, double tol,
                                 unsigned threads, int c_grid) {
    const UnitChain chain(a, family, slots, tol, threads);
    return check_sandwich_37(a, family, gamma, beta, chain, taus, c_grid);
}

SandwichReport check_sandwich_37(const SpectralOperator& a, const TimeDependentFamily& family, double gamma,
                                 double beta, const UnitChain& chain, const std::vector<double>& taus,
                                 int c_grid) {
    const int slots = chain.slots();
    const double tol = chain.tol();
    SandwichReport report;
    report.gamma = gamma;
    report.beta = beta;
    report.kappa = std::min(gamma, beta);
    report.c_gamma = estimate_c_alpha(family, a, gamma, c_grid);
    report.holder_l = holder_seminorm(family, a, gamma, beta, c_grid);
    report.z = z_constant(gamma, beta, report.c_gamma, report.holder_l, family.horizon());

    const Matrix inv = frac_power(a, -gamma).matrix();
    for (double tau : taus) {
        const int k = slots_for(tau, family.horizon(), slots);
        const BlockShiftOperator diff = build_T(a, family, slots, k) - chain.evolution(k);
        SandwichRow row;
        row.tau = tau;
        row.lhs = block_norm(diff.left_multiply(inv).right_multiply(inv));
        row.bound = report.z * std::pow(tau, 1.0 + report.kappa);
        row.ratio = ratio_or_flag(row.lhs, row.bound, tol);
        report.max_ratio = std::max(report.max_ratio, row.ratio);
        report.rows.push_back(row);
    }
    report.passed = report.max_ratio <= 1.0 + kLemmaSlack;
    return report;
}

namespace {

std::pair<double, double> smoothing_at(const UnitChain& chain, const Matrix& ag, double gamma, double tau,
                                       int k) {
    const BlockShiftOperator u = chain.evolution(k);
    const double scale = std::pow(tau, gamma);
    return {scale * block_norm(u.left_multiply(ag)), scale * block_norm(u.right_multiply(ag))};
}

bool within(double x, double reference, double rel) {
    return std::abs(x - reference) <= rel * std::max(std::abs(reference), 1e-300);
}

} // namespace

SmoothingReport check_smoothing_33(const SpectralOperator& a, const TimeDependentFamily& family, double gamma,
                                   int slots, const std::vector<double>& taus, double tol, unsigned threads) {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw Error(Errc::DomainError, "check_smoothing_33 needs gamma in [0, 1)");
    }
    SmoothingReport report;
    report.gamma = gamma;
    const Matrix ag = frac_power(a, gamma).matrix();
    const UnitChain chain(a, family, slots, tol, threads);
    const UnitChain fine(a, family, 2 * slots, tol, threads);
    for (double tau : taus) {
        const int k = slots_for(tau, family.horizon(), slots);
        const auto [left, right] = smoothing_at(chain, ag, gamma, tau, k);
        const auto [left2, right2] = smoothing_at(fine, ag, gamma, tau, 2 * k);
        report.rows.push_back({tau, left, right});
        report.lambda_left = std::max(report.lambda_left, left);
        report.lambda_right = std::max(report.lambda_right, right);
        report.lambda_left_doubled = std::max(report.lambda_left_doubled, left2);
        report.lambda_right_doubled = std::max(report.lambda_right_doubled, right2);
    }
    report.stable = within(report.lambda_left_doubled, report.lambda_left, 0.10) &&
                    within(report.lambda_right_doubled, report.lambda_right, 0.10);
    return report;
}

namespace {

struct StabilityScan {
    std::vector<double> s_values;
    std::vector<double> sigma_values;
};

StabilityScan stability_scan(const SpectralOperator& a, const TimeDependentFamily& family, double gamma,
                             double sigma, int n, int slots) {
    const int k = slots / n;
    const double tau = family.horizon() / n;
    const Matrix ag = frac_power(a, gamma).matrix();
    const Matrix as = frac_power(a, sigma).matrix();
    const BlockShiftOperator t = build_T(a, family, slots, k);
    StabilityScan scan;
    BlockShiftOperator power = t;
    for (int m = 1; m <= n; ++m) {
        if (m > 1) {
            power = compose(t, power);
        }
        const double mt = m * tau;
        scan.s_values.push_back(std::pow(mt, gamma) * block_norm(power.left_multiply(ag)));
        scan.sigma_values.push_back(std::pow(mt, sigma) * block_norm(power.left_multiply(as)));
    }
    return scan;
}

} // namespace

StabilityReport check_stability_53(const SpectralOperator& a, const TimeDependentFamily& family, double gamma,
                                   int n, int slots, double lambda, int c_grid) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw Error(Errc::DomainError, "check_stability_53 needs gamma in (0, 1)");
    }
    if (n < 1 || slots % n != 0) {
        throw Error(Errc::IndivisibleGrid, "check_stability_53 needs n to divide N");
    }
    StabilityReport report;
    report.gamma = gamma;
    report.n = n;
    report.slots = slots;
    report.sigma = 0.5 * gamma;
    report.lambda_used = std::max(lambda, 1.0);

    const StabilityScan scan = stability_scan(a, family, gamma, report.sigma, n, slots);
    const StabilityScan doubled = stability_scan(a, family, gamma, report.sigma, n, 2 * slots);
    report.s_values = scan.s_values;
    for (double s : scan.s_values) {
        report.m_gamma = std::max(report.m_gamma, s);
    }
    for (double s : doubled.s_values) {
        report.m_gamma_doubled = std::max(report.m_gamma_doubled, s);
    }
    report.relative_change = std::abs(report.m_gamma_doubled - report.m_gamma) / report.m_gamma;
    report.stable = std::isfinite(report.m_gamma) && report.relative_change <= 0.20;

    const double cap = std::pow(report.m_gamma, report.sigma / gamma);
    for (double v : scan.sigma_values) {
        report.interpolation_max_ratio = std::max(report.interpolation_max_ratio, v / cap);
    }
    report.interpolation_ok = report.interpolation_max_ratio <= 1.0 + kLemmaSlack;

    const double c = estimate_c_alpha(family, a, gamma, c_grid);
    const double horizon = family.horizon();
    report.n0 = n0_threshold(gamma, c, horizon, report.lambda_used);
    report.n_at_least_n0 = n >= report.n0;

    const double alpha = family.declared_alpha();
    if (alpha <= gamma) {
        const double lam = report.lambda_used;
        const double c0 = 5.0 * lam;
        const double c1 = 2.0 * (lam / (1.0 - gamma) + 1.0) * c * std::pow(horizon, 1.0 - gamma);
        const double c2 = 4.0 * lam * c * beta_function(1.0 - alpha, 1.0 - gamma) * std::pow(horizon, 1.0 - alpha);
        try {
            report.m_gamma_bound = m_gamma_solve(c0, c1, c2, n, gamma, alpha);
        } catch (const Error& e) {
            if (e.code() != Errc::FeasibilityViolated) {
                throw;
            }
        }
    }
    return report;
}

std::vector<SupErrorRow> semigroup_rate_sweep(const SpectralOperator& a, const TimeDependentFamily& family,
                                              int slots, const std::vector<long>& n_list, double tol,
                                              unsigned threads) {
    if (n_list.empty()) {
        return {};
    }
    long step = 1;
    for (long n : n_list) {
        if (n < 1 || slots % n != 0) {
            throw Error(Errc::IndivisibleGrid, "every n must divide N");
        }
        step = std::lcm(step, n);
    }
    if (step >= slots) {
        throw Error(Errc::IndivisibleGrid, "N must exceed the least common multiple of n_list");
    }
    const UnitChain chain(a, family, slots, tol, threads);
    std::vector<int> ks;
    for (long k = step; k < slots; k += step) {
        ks.push_back(static_cast<int>(k));
    }
    std::vector<BlockShiftOperator> evolutions;
    for (int k : ks) {
        evolutions.push_back(chain.evolution(k));
    }

    std::vector<SupErrorRow> rows(n_list.size());
    parallel_for(n_list.size(), threads, [&](std::size_t idx) {
        const int n = static_cast<int>(n_list[idx]);
        SupErrorRow row;
        row.n = n;
        for (std::size_t j = 0; j < ks.size(); ++j) {
            const int per = ks[j] / n;
            row.left = std::max(row.left, block_norm(evolutions[j] - build_T(a, family, slots, per).power(n)));
            row.right =
                std::max(row.right, block_norm(evolutions[j] - build_T_reversed(a, family, slots, per).power(n)));
        }
        rows[idx] = row;
    });
    return rows;
}

} // namespace trotter
