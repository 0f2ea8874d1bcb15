#pragma once

/**
 * @file stem.hpp
 * @brief Slice hyperholomorphic functions induced by rational profiles.
 *
 * A StemFunction is f(s) = r(s) c (left) or c r(s) (right) where r = p/q is
 * a real rational function and c a constant quaternion. Writing
 * r(u + i v) = a(u,v) + i b(u,v), the stem pair is alpha = a c, beta = b c,
 * and
 *     left:  f(u + J v) = alpha(u,v) + J beta(u,v)
 *     right: f(u + J v) = alpha(u,v) + beta(u,v) J.
 * The Cauchy-Riemann system for (alpha, beta) holds because r is
 * holomorphic. f is intrinsic exactly when c is real.
 */

#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "hqcalc/operator.hpp"
#include "hqcalc/polynomial.hpp"
#include "hqcalc/quaternion.hpp"

namespace hqcalc {

enum class FunctionClass { PsiQ, Psi, F };

std::string to_string(FunctionClass c);
FunctionClass function_class_from_string(const std::string& s);

struct IntrinsicRational {
    Polynomial p;
    Polynomial q{1.0};

    std::complex<double> operator()(std::complex<double> z) const { return p(z) / q(z); }
};

/// Default holomorphy half-angle of catalog functions.
inline constexpr double kDefaultTheta = 0.75 * std::numbers::pi;

class StemFunction {
public:
    /// Throws DomainError for q == 0 or theta outside (0, pi).
    explicit StemFunction(IntrinsicRational r, double theta = kDefaultTheta, Side side = Side::left,
                          Quat coeff = Quat(1.0));

    static StemFunction polynomial(Polynomial p, double theta = kDefaultTheta) {
        return StemFunction(IntrinsicRational{std::move(p), Polynomial{1.0}}, theta);
    }

    const IntrinsicRational& rational() const { return r_; }
    const Quat& coeff() const { return c_; }
    Side side() const { return side_; }
    double theta() const { return theta_; }
    bool intrinsic() const { return c_.s1 == 0 && c_.s2 == 0 && c_.s3 == 0; }
    bool is_polynomial() const { return r_.q.degree() == 0; }

    /// Stem pair, defined for any v (alpha even, beta odd in v).
    Quat alpha(double u, double v) const;
    Quat beta(double u, double v) const;

    /// f(s); throws OutOfDomain outside the open sector S_theta.
    Quat operator()(const Quat& s) const;
    /// f(J.point(z)) without the sector check (used on contour nodes).
    Quat on_plane(std::complex<double> z, const Unit& J) const;

    /// Same profile, other multiplication side.
    StemFunction with_side(Side s) const { return StemFunction(r_, theta_, s, c_); }
    StemFunction with_theta(double theta) const { return StemFunction(r_, theta, side_, c_); }
    StemFunction scaled(const Quat& c) const;

private:
    IntrinsicRational r_;
    double theta_;
    Side side_;
    Quat c_;
};

/// f + g for two stems with the same side and coefficient structure
/// (both intrinsic, or identical coefficients).
StemFunction operator+(const StemFunction& f, const StemFunction& g);

struct DecayCertificate {
    FunctionClass class_tag{FunctionClass::PsiQ};
    double alpha{1.0};
    double C{0.0};

    /// Class bound at radius r: C r^{1+a}/(1+r^{1+2a}), C r^a/(1+r^{2a})
    /// or C (r^a + r^{-a}).
    double bound(double r) const;
};

struct CertifiedFunction {
    StemFunction f;
    DecayCertificate cert;
};

/// Fits a certificate for `f` in the requested class: the exponent follows
/// from the orders of p/q at 0 and at infinity, the constant is the grid
/// maximum (64 radii in [1e-6, 1e6] x 9 rays) times 2. Throws
/// HypothesisViolation naming the failed condition.
DecayCertificate certify(const StemFunction& f, FunctionClass tag);

/// PsiQ: (i) deg q >= deg p + 1, (ii) p has a zero of order >= 2 at 0,
/// (iii) q has no zero in the closed sector. Psi: (i) deg q >= deg p + 1,
/// (ii) p(0) = 0, (iii). F: (iii) only.
CertifiedFunction make_rational(const IntrinsicRational& r, FunctionClass tag,
                                double theta = kDefaultTheta);

/// e(s) = s^n / (1 + s)^{2n-1}; PsiQ with alpha = n - 1 for n >= 2, F for n = 1.
CertifiedFunction make_regularizer(int n, double theta = kDefaultTheta);

/// Pointwise product f g with f intrinsic; the result is certified in `tag`.
/// Throws NotIntrinsic, or HypothesisViolation when fg leaves the class.
CertifiedFunction product(const StemFunction& f, const StemFunction& g, FunctionClass tag);
StemFunction product(const StemFunction& f, const StemFunction& g);

/// |d_u alpha - d_v beta| + |d_v alpha + d_u beta| by central differences.
double cauchy_riemann_residual(const StemFunction& f, double u, double v, double h = 1e-5);

/// D s^i = -2 sum_{k<i} s^k conj(s)^{i-1-k}, extended linearly.
Quat cf_derivative_polynomial(const Polynomial& p, const Quat& x);

/// Closed-form D(p/q)(x) = (Dp(x) q(x) - p(x) Dq(x)) q(x)^{-1} q(conj x)^{-1},
/// times the coefficient on the function's side.
Quat cf_derivative_rational(const StemFunction& f, const Quat& x);

struct CfDerivativeOptions {
    double h{0.0};         ///< 0 selects 1e-5 max(1, |x|)
    double rel_tol{1e-6};  ///< Richardson estimate limit, relative to max(1, |Df|)
};

/// D f(x) with D = d0 + e1 d1 + e2 d2 + e3 d3 (acting from the left for left
/// slice functions, from the right otherwise). Exact for polynomials;
/// central differences with one Richardson step otherwise.
/// Throws StepTooLarge when the Richardson estimate exceeds the tolerance.
Quat pointwise_cf_derivative(const StemFunction& f, const Quat& x, CfDerivativeOptions opt = {});

/// Plain central-difference D f at step h, no extrapolation.
Quat central_difference_cf(const std::function<Quat(const Quat&)>& f, const Quat& x, double h,
                           Side side = Side::left);

} // namespace hqcalc
