#pragma once

/**
 * @file contour.hpp
 * @brief Quadrature along the sector boundary in one complex slice.
 *
 * The path is gamma(t) = -t e^{J phi} for t < 0 and t e^{-J phi} for t > 0:
 * it comes in from infinity along the upper ray and leaves along the lower
 * one. With ds_J = gamma'(t)/J dt both halves become integrals over t > 0,
 *     upper ray  s = t e^{+J phi},  weight  +J e^{+J phi} dt
 *     lower ray  s = t e^{-J phi},  weight  -J e^{-J phi} dt,
 * and after t = e^x each is a composite Gauss-Legendre rule in x.
 *
 * Left assembly sums kernel(s) * weight * f(s), right assembly sums
 * f(s) * weight * kernel(s); the operand order is never rearranged.
 */

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "hqcalc/operator.hpp"
#include "hqcalc/qmatrix.hpp"
#include "hqcalc/stem.hpp"

namespace hqcalc {

enum class KernelKind {
    s_resolvent, ///< ||S^{-1}(s,T)|| <= C_theta / |s|, prefactor 1/(2 pi)
    q_pencil     ///< ||Q_{c,s}^{-1}(T)|| <= C_theta_Q / |s|^2, prefactor -1/pi
};

double kernel_prefactor(KernelKind k);

struct ContourNode {
    Quat s;
    Quat weight; ///< gamma'(t)/J times the quadrature weight (including dt = t dx)
};

struct ContourPlan {
    double phi{0};
    Unit J{};
    double eps{0};
    double R{0};
    double tol{0};
    KernelKind kernel{KernelKind::q_pencil};
    double tail_inner{0};
    double tail_outer{0};
    double est_tail{0};
    int order{12};
    std::size_t max_nodes{std::size_t{1} << 20};
    /// Initial panels [x_a, x_b] in x = ln t, shared by both rays.
    std::vector<std::pair<double, double>> panels;

    /// Nodes of the initial composite rule, upper ray then lower ray per panel.
    std::vector<ContourNode> nodes() const;
};

struct PlanOptions {
    int order{12};
    std::size_t max_nodes{std::size_t{1} << 20};
};

/// Chooses eps and R from the closed-form tail bounds (each below tol/4,
/// prefactor included) and doubles the panel count until the embedded
/// estimate on the bound profile is below tol/2.
/// Throws DomainError for a non-decaying certificate or a kernel/class
/// combination whose tails diverge, UnreachableTolerance when the budget
/// is exhausted.
ContourPlan plan_contour(const DecayCertificate& cert, const SectorCertificate& resolvent_consts,
                         double phi, const Unit& J, double tol, KernelKind kernel,
                         PlanOptions opt = {});

/// The tail bounds alone, for a given eps and R.
std::pair<double, double> tail_bounds(const DecayCertificate& cert,
                                      const SectorCertificate& resolvent_consts, KernelKind kernel,
                                      double eps, double R);

struct ContourResult {
    QMat value;
    double est_quad_err{0};
    double est_tail{0};
    std::size_t nodes{0};
    std::size_t panels{0};

    double est_error() const { return est_quad_err + est_tail; }
};

using Kernel = std::function<QMat(const Quat&)>;

/// prefactor * integral of kernel ds_J f (left) or f ds_J kernel (right),
/// refined panel by panel until the halving estimate meets tol/2.
/// Throws KernelSingular, NonFinite, UnreachableTolerance.
ContourResult contour_integrate(const ContourPlan& plan, const Kernel& kernel,
                                const StemFunction& f, Side side, double prefactor);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order);

} // namespace hqcalc
