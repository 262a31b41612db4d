// evolution_semigroup.hpp: slotted discretization of L^2([0,T], R^d) and the
// block-shift operators U0(tau), exp(-tau B), T(tau), U(tau) acting on it.
//
// Slot i covers (t_i, t_{i+1}] with t_i = i h, h = T/N. Every per-slot matrix
// (multiplication or evolution) is evaluated at the left endpoint t_i, so that
// block i of T(tau/n)^n is exactly V_n(t_i, t_i - tau).

#pragma once

#include "trotter/bounds_and_rates.hpp"
#include "trotter/reference_oracle.hpp"
#include "trotter/problem_families.hpp"
#include "trotter/trotter_products.hpp"

#include <map>
#include <optional>
#include <vector>

namespace trotter {

class SlottedFunction {
public:
    SlottedFunction(double horizon, std::vector<Vector> slots);
    static SlottedFunction zero(double horizon, int slots, Index dim);

    [[nodiscard]] int slots() const noexcept { return static_cast<int>(slots_.size()); }
    [[nodiscard]] Index dim() const noexcept { return slots_.front().size(); }
    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] double slot_width() const noexcept { return horizon_ / slots(); }
    [[nodiscard]] const Vector& slot(int i) const { return slots_.at(i); }
    [[nodiscard]] Vector& slot(int i) { return slots_.at(i); }

    // sqrt(h * sum_i |f_i|^2)
    [[nodiscard]] double norm() const;

private:
    double horizon_;
    std::vector<Vector> slots_;
};

// (G f)_i = M_i f_{i-k} for i >= k, 0 otherwise. Blocks below the shift are
// stored as zeros, so block_norm can simply take the max over all blocks.
class BlockShiftOperator {
public:
    BlockShiftOperator(double horizon, int shift, std::vector<Matrix> blocks);

    static BlockShiftOperator identity(double horizon, int slots, Index dim);
    static BlockShiftOperator zero(double horizon, int slots, Index dim, int shift = 0);

    [[nodiscard]] int shift() const noexcept { return shift_; }
    [[nodiscard]] int slots() const noexcept { return static_cast<int>(blocks_.size()); }
    [[nodiscard]] Index dim() const noexcept { return blocks_.front().rows(); }
    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] double slot_width() const noexcept { return horizon_ / slots(); }
    [[nodiscard]] const Matrix& block(int i) const { return blocks_.at(i); }

    [[nodiscard]] SlottedFunction apply(const SlottedFunction& f) const;
    // Dense (N dim) x (N dim) matrix; for small-instance cross-checks.
    [[nodiscard]] Matrix assemble() const;
    [[nodiscard]] BlockShiftOperator power(int n) const;
    // M * G and G * M with the same M on every slot.
    [[nodiscard]] BlockShiftOperator left_multiply(const Matrix& m) const;
    [[nodiscard]] BlockShiftOperator right_multiply(const Matrix& m) const;

private:
    double horizon_;
    int shift_;
    std::vector<Matrix> blocks_;
};

// outer o inner: shift adds, block i = X_i Y_{i - k_outer}.
BlockShiftOperator compose(const BlockShiftOperator& outer, const BlockShiftOperator& inner);
// Requires equal shifts (DimensionMismatch otherwise).
BlockShiftOperator operator-(const BlockShiftOperator& x, const BlockShiftOperator& y);

// max_i ||M_i||, the operator norm on the slotted space.
double block_norm(const BlockShiftOperator& g);

// e^{-tau A} shifted by k slots, tau = k h. Zero for k >= N.
BlockShiftOperator build_U0(const SpectralOperator& a, int slots, int k, double horizon);
// Block i = e^{-tau B(t_i)}, no shift.
BlockShiftOperator build_expB(const TimeDependentFamily& family, int slots, double tau);
// U0(k) o expB(k h): block i = e^{-tau A} e^{-tau B(t_{i-k})}.
BlockShiftOperator build_T(const SpectralOperator& a, const TimeDependentFamily& family, int slots, int k);
// expB(k h) o U0(k): block i = e^{-tau B(t_i)} e^{-tau A}.
BlockShiftOperator build_T_reversed(const SpectralOperator& a, const TimeDependentFamily& family, int slots, int k);
inline BlockShiftOperator build_T(Variant v, const SpectralOperator& a, const TimeDependentFamily& family,
                                  int slots, int k) {
    return v == Variant::left ? build_T(a, family, slots, k) : build_T_reversed(a, family, slots, k);
}
// Block i = U(t_i, t_i - tau) from refine_to_tol, one oracle call per block.
BlockShiftOperator build_U_evo(const SpectralOperator& a, const TimeDependentFamily& family, int slots, int k,
                               double tol, unsigned threads = 1);

// Evolution blocks assembled from per-slot reference propagators
// U(t_{j+1}, t_j). Chaining keeps the cocycle law exact and costs one oracle
// call per slot instead of one per block. Each unit is refined to tol, so a
// block spanning k slots carries an oracle error of about k * tol.
class UnitChain {
public:
    UnitChain(const SpectralOperator& a, const TimeDependentFamily& family, int slots, double tol,
              unsigned threads = 1);

    [[nodiscard]] int slots() const noexcept { return static_cast<int>(units_.size()); }
    [[nodiscard]] double tol() const noexcept { return tol_; }
    // U(t_j, t_i) for slot indices 0 <= i <= j <= N.
    [[nodiscard]] Matrix between(int i, int j) const;
    // Same layout as build_U_evo.
    [[nodiscard]] BlockShiftOperator evolution(int k) const;

private:
    double horizon_;
    Index dim_;
    double tol_;
    std::vector<Matrix> units_;
};

// direct: one refine_to_tol call per pair, each accurate to tol.
// chained: U(t_j, t_i) = U(t_j, t_{j-1}) U(t_{j-1}, t_i) from refined per-slot
// units, so only N short intervals hit the oracle; error about (j - i) tol.
enum class ReferenceMode { direct, chained };

// Memoized U(t_j, t_i) on slot boundaries.
// Holds references to a and family; both must outlive the table.
class ReferenceTable {
public:
    ReferenceTable(const SpectralOperator& a, const TimeDependentFamily& family, int slots, double tol,
                   ReferenceMode mode = ReferenceMode::direct);

    [[nodiscard]] int slots() const noexcept { return slots_; }
    [[nodiscard]] const SpectralOperator& op() const noexcept { return a_; }
    [[nodiscard]] const TimeDependentFamily& family() const noexcept { return family_; }
    // U(t_j, t_i) for 0 <= i <= j <= N.
    const Matrix& get(int i, int j);
    // Refines every missing pair, in parallel.
    void prefetch(const std::vector<std::pair<int, int>>& pairs, unsigned threads = 1);
    // Same blocks as build_U_evo.
    BlockShiftOperator evolution(int k, unsigned threads = 1);

private:
    const SpectralOperator& a_;
    const TimeDependentFamily& family_;
    int slots_;
    double tol_;
    ReferenceMode mode_;
    std::map<std::pair<int, int>, Matrix> cache_;
};

struct CorrespondenceReport {
    double semigroup_error = 0.0;
    double propagator_error = 0.0;
    double gap = 0.0;
    int taus_tested = 0;
};

// Over tau = k h, k = n, 2n, ..., N: block_norm(U(tau) - T(tau/n)^n) against
// the max over matching pairs of ||U(t,s) - V_n(t,s)||. Throws IndivisibleGrid
// unless n divides N.
CorrespondenceReport correspondence_check(const SpectralOperator& a, const TimeDependentFamily& family, int slots,
                                          int n, double tol, Variant variant = Variant::left, unsigned threads = 1);
// Same, reusing reference blocks across calls.
CorrespondenceReport correspondence_check(ReferenceTable& table, int n, Variant variant = Variant::left,
                                          unsigned threads = 1);

struct OneStepRow {
    double tau = 0.0;
    double ratio_left = 0.0;  // ||A^-g (G - U)|| / (2 C tau)
    double ratio_right = 0.0; // ||(G - U) A^-g|| / (2 C tau)
};

struct OneStepReport {
    double gamma = 0.0;
    double c_gamma = 0.0;
    double max_ratio = 0.0;
    bool passed = true;
    std::vector<OneStepRow> rows;
};

inline constexpr double kLemmaSlack = 1e-6;

// One-step bound at every grid point t with t + tau <= T.
OneStepReport check_onestep_36(const SpectralOperator& a, const TimeDependentFamily& family, double gamma,
                               const std::vector<double>& taus, int grid_n = 16, double tol = kDefaultOracleTol,
                               int c_grid = 256);
// Same for several gammas; the reference propagators are shared.
std::vector<OneStepReport> check_onestep_36(const SpectralOperator& a, const TimeDependentFamily& family,
                                            const std::vector<double>& gammas, const std::vector<double>& taus,
                                            int grid_n = 16, double tol = kDefaultOracleTol, int c_grid = 256);

struct SandwichRow {
    double tau = 0.0;
    double lhs = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
};

struct SandwichReport {
    double gamma = 0.0;
    double beta = 0.0;
    double kappa = 0.0;
    double c_gamma = 0.0;
    double holder_l = 0.0;
    double z = 0.0;
    double max_ratio = 0.0;
    bool passed = true;
    std::vector<SandwichRow> rows;
};

// ||A^-g (T(tau) - U(tau)) A^-g|| <= Z tau^{1+kappa} on the slotted space with
// N slots, for each tau in taus (each must be a whole number of slots).
SandwichReport check_sandwich_37(const SpectralOperator& a, const TimeDependentFamily& family, double gamma,
                                 double beta, int slots, const std::vector<double>& taus,
                                 double tol = kDefaultOracleTol, unsigned threads = 1, int c_grid = 256);
// Same, on a prebuilt chain (its slot count and tol are used).
SandwichReport check_sandwich_37(const SpectralOperator& a, const TimeDependentFamily& family, double gamma,
                                 double beta, const UnitChain& chain, const std::vector<double>& taus,
                                 int c_grid = 256);

struct SmoothingRow {
    double tau = 0.0;
    double left = 0.0;  // tau^g ||A^g U(tau)||
    double right = 0.0; // tau^g ||U(tau) A^g||
};

struct SmoothingReport {
    double gamma = 0.0;
    double lambda_left = 0.0;
    double lambda_right = 0.0;
    double lambda_left_doubled = 0.0;
    double lambda_right_doubled = 0.0;
    bool stable = true; // both within 10% under N -> 2N
    std::vector<SmoothingRow> rows;

    [[nodiscard]] double lambda() const noexcept { return std::max(lambda_left, lambda_right); }
};

SmoothingReport check_smoothing_33(const SpectralOperator& a, const TimeDependentFamily& family, double gamma,
                                   int slots, const std::vector<double>& taus, double tol = kDefaultOracleTol,
                                   unsigned threads = 1);

struct StabilityReport {
    double gamma = 0.0;
    int n = 0;
    int slots = 0;
    double m_gamma = 0.0;         // max_m (m tau)^g ||A^g T(tau)^m||
    double m_gamma_doubled = 0.0; // same with 2N slots
    double relative_change = 0.0;
    bool stable = true; // within 20%
    double sigma = 0.0;
    double interpolation_max_ratio = 0.0; // (m tau)^s ||A^s T^m|| / M^{s/g}
    bool interpolation_ok = true;
    double lambda_used = 1.0;
    long n0 = 1;
    bool n_at_least_n0 = true;
    std::optional<double> m_gamma_bound; // fixed-point bound, when feasible
    std::vector<double> s_values;        // S(m), m = 1..n
};

// tau = T/n. lambda is the measured smoothing constant (clamped to >= 1).
StabilityReport check_stability_53(const SpectralOperator& a, const TimeDependentFamily& family, double gamma,
                                   int n, int slots, double lambda = 1.0, int c_grid = 256);

// max over tested tau of block_norm(U(tau) - T(tau/n)^n) for each n. The
// tested taus are k h with k a positive multiple of max(n_list), k < N.
std::vector<SupErrorRow> semigroup_rate_sweep(const SpectralOperator& a, const TimeDependentFamily& family,
                                              int slots, const std::vector<long>& n_list, double tol,
                                              unsigned threads = 1);

} // namespace trotter
