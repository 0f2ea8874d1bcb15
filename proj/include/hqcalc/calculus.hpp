#pragma once

/**
 * @file calculus.hpp
 * @brief S-functional calculus, harmonic calculus, their polynomial and
 * rational closed forms, and the regularised (H-infinity) extensions.
 *
 *   f(T)  =  1/(2 pi) int S_L^{-1}(s,T) ds_J f(s)
 *   Df(T) = -1/pi     int Q_{c,s}^{-1}(T) ds_J f(s)
 *
 * over the boundary of S_phi in C_J. Growing functions f are handled with a
 * regulariser e(s) = s^n/(1+s)^{2n-1}:
 *   f(T)  = e(T)^{-1} (ef)(T)
 *   Df(T) = e(T-bar)^{-1} (D(ef)(T) - f(T) De(T))
 *         = e(T)^{-1} (D(ef)(T) - f(T-bar) De(T)).
 */

#include <map>
#include <optional>
#include <string>

#include "hqcalc/contour.hpp"
#include "hqcalc/operator.hpp"
#include "hqcalc/stem.hpp"

namespace hqcalc {

struct CalcOptions {
    /// Contour angle; unset picks the midpoint between the spectral angle and theta.
    std::optional<double> phi;
    Unit J{};
    double tol{1e-7};
    std::size_t max_nodes{std::size_t{1} << 20};
    int order{12};
    /// Assembly side; unset uses the function's own side. Overriding is only
    /// allowed for intrinsic functions.
    std::optional<Side> side;
};

struct CalculusResult {
    QMat value;
    double est_error{0};
    std::size_t nodes{0};
    /// Gap between the two equivalent forms (regularised harmonic calculus).
    std::optional<double> form_gap;
    std::optional<ContourPlan> plan;
    std::map<std::string, double> diagnostics;
};

/// Angle used when CalcOptions::phi is unset.
double default_phi(const CommutingOperator& T, double theta);

/// S-functional calculus; f must carry a Psi or PsiQ certificate.
CalculusResult s_calc(const CommutingOperator& T, const CertifiedFunction& f, CalcOptions opt = {});
/// Harmonic functional calculus; f must carry a PsiQ certificate.
CalculusResult d_calc(const CommutingOperator& T, const CertifiedFunction& f, CalcOptions opt = {});

/// q[T] = sum q_j T^j (Horner).
QMat poly_calc(const Polynomial& q, const CommutingOperator& T);
/// Dp[T] = -2 sum_i p_i sum_{k<i} T^k T-bar^{i-1-k}.
QMat d_poly_calc(const Polynomial& p, const CommutingOperator& T);

struct RationalD {
    QMat form1; ///< (Dp[T] q[T] - p[T] Dq[T]) q[T]^{-1} q[T-bar]^{-1}
    QMat form2; ///< (Dp[T] q[T-bar] - p[T-bar] Dq[T]) q[T]^{-1} q[T-bar]^{-1}
};

/// Closed form of D(p/q)(T). Throws ZeroInSector when q vanishes on the
/// spectral sector of T (or on the spectrum itself).
RationalD rational_d(const Polynomial& p, const Polynomial& q, const CommutingOperator& T);
/// p[T] q[T]^{-1}.
QMat rational_calc(const Polynomial& p, const Polynomial& q, const CommutingOperator& T);

/// Smallest n > 1 + alpha, plus one.
int default_regularizer_power(const DecayCertificate& f_cert);

struct HinfOptions {
    CalcOptions calc{};
    /// Regulariser power; 0 selects default_regularizer_power.
    int regularizer_n{0};
    /// Threshold on sigma_min(e(T)) / ||e(T)||.
    double injectivity_threshold{1e-10};
};

/// f(T) = e(T)^{-1} (ef)(T) for left slice f in the class F.
/// Throws RegularizerSingular, ProductNotDecaying.
CalculusResult hinf_s(const CommutingOperator& T, const CertifiedFunction& f, HinfOptions opt = {});
/// Regularised harmonic calculus; value is the first form, form_gap the
/// distance to the second.
CalculusResult hinf_d(const CommutingOperator& T, const CertifiedFunction& f, HinfOptions opt = {});

} // namespace hqcalc
