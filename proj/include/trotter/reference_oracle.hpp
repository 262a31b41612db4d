// reference_oracle.hpp: high-accuracy U(t,s) for measuring Trotter errors.

#pragma once

#include "trotter/trotter_products.hpp"

namespace trotter {

inline constexpr double kDefaultOracleTol = 1e-10;
inline constexpr long kOracleMaxSteps = 1L << 20;

// Closed form for b(t) * I families: e^{-(t-s)A} e^{-int_s^t b}. The integral
// is adaptive Simpson to 1e-12. Throws NonCommutingFamily otherwise.
Propagator analytic_commuting(const SpectralOperator& a, const TimeDependentFamily& family, double s, double t);

// prod_{i=m-1..0} exp(-h C(s + (i + 1/2) h)), h = (t - s)/m, C = A + B.
Propagator midpoint_exponential(const SpectralOperator& a, const TimeDependentFamily& family, double s, double t,
                                long m);

// Doubles m until ||U_2m - U_m|| <= tol and returns U_2m. Starts at 16, or
// higher when the family has structure below that step. Throws DomainError for
// tol < 1e-12 and CapExceeded if m would pass 2^20.
Propagator refine_to_tol(const SpectralOperator& a, const TimeDependentFamily& family, double s, double t,
                         double tol = kDefaultOracleTol);

} // namespace trotter
