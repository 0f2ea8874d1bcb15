#include "hqcalc/stem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hqcalc {

std::string to_string(FunctionClass c) {
    switch (c) {
    case FunctionClass::PsiQ: return "PsiQ";
    case FunctionClass::Psi: return "Psi";
    case FunctionClass::F: return "F";
    }
    return "?";
}

FunctionClass function_class_from_string(const std::string& s) {
    if (s == "PsiQ") return FunctionClass::PsiQ;
    if (s == "Psi") return FunctionClass::Psi;
    if (s == "F") return FunctionClass::F;
    throw DomainError("unknown function class '" + s + "'");
}

StemFunction::StemFunction(IntrinsicRational r, double theta, Side side, Quat coeff)
    : r_(std::move(r)), theta_(theta), side_(side), c_(coeff) {
    if (r_.q.is_zero()) throw DomainError("denominator polynomial is identically zero");
    if (!(theta > 0 && theta < std::numbers::pi)) throw DomainError("theta must lie in (0, pi)");
    if (!coeff.is_finite()) throw NonFinite("coefficient is not finite");
}

Quat StemFunction::alpha(double u, double v) const {
    return c_ * r_({u, v}).real();
}

Quat StemFunction::beta(double u, double v) const {
    return c_ * r_({u, v}).imag();
}

Quat StemFunction::on_plane(std::complex<double> z, const Unit& J) const {
    const Quat base = J.point(r_(z));
    return side_ == Side::left ? qmul(base, c_) : qmul(c_, base);
}

Quat StemFunction::operator()(const Quat& s) const {
    if (s.norm() == 0.0 || !Sector<double>(theta_).contains(s))
        throw OutOfDomain("point lies outside the holomorphy sector of the function");
    const auto c = decompose(s);
    return on_plane({c.u, c.v}, c.J);
}

StemFunction StemFunction::scaled(const Quat& c) const {
    return StemFunction(r_, theta_, side_, side_ == Side::left ? qmul(c_, c) : qmul(c, c_));
}

StemFunction operator+(const StemFunction& f, const StemFunction& g) {
    if (f.side() != g.side()) throw DomainError("cannot add stems of different sides");
    if (!(f.coeff() == g.coeff()))
        throw DomainError("sum needs stems with a common coefficient");
    IntrinsicRational r{f.rational().p * g.rational().q + g.rational().p * f.rational().q,
                        f.rational().q * g.rational().q};
    return StemFunction(std::move(r), std::min(f.theta(), g.theta()), f.side(), f.coeff());
}

double DecayCertificate::bound(double r) const {
    const double a = alpha;
    switch (class_tag) {
    case FunctionClass::PsiQ: return C * std::pow(r, 1 + a) / (1 + std::pow(r, 1 + 2 * a));
    case FunctionClass::Psi: return C * std::pow(r, a) / (1 + std::pow(r, 2 * a));
    case FunctionClass::F: return C * (std::pow(r, a) + std::pow(r, -a));
    }
    return 0;
}

namespace {

constexpr int kFitRadii = 64;
constexpr int kFitRays = 9;
constexpr double kFitSafety = 2.0;

bool zero_free_on_closed_sector(const Polynomial& q, double theta) {
    constexpr double kRootTol = 1e-12;
    for (const auto& z : q.roots()) {
        if (std::abs(z) <= kRootTol) return false;
        if (std::abs(std::arg(z)) <= theta + kRootTol) return false;
    }
    return true;
}

void check_hypotheses(const StemFunction& f, FunctionClass tag) {
    const auto& p = f.rational().p;
    const auto& q = f.rational().q;
    const int dp = p.is_zero() ? -1 : p.degree();
    const int m = p.is_zero() ? 1 << 20 : p.zero_order();
    if (tag == FunctionClass::PsiQ) {
        if (!p.is_zero() && q.degree() < dp + 1)
            throw HypothesisViolation("(i) deg(q) >= deg(p) + 1 fails");
        if (m < 2) throw HypothesisViolation("(ii) p needs a zero of order >= 2 at the origin");
    } else if (tag == FunctionClass::Psi) {
        if (!p.is_zero() && q.degree() < dp + 1)
            throw HypothesisViolation("(i) deg(q) >= deg(p) + 1 fails");
        if (m < 1) throw HypothesisViolation("(ii) p needs a zero at the origin");
    }
    if (!zero_free_on_closed_sector(q, f.theta()))
        throw HypothesisViolation("(iii) q has a zero in the closed sector");
}

double class_exponent(const StemFunction& f, FunctionClass tag) {
    const auto& p = f.rational().p;
    const auto& q = f.rational().q;
    if (p.is_zero()) return 1.0;
    const int m = p.zero_order();            // order at 0 (q(0) != 0 here)
    const int d = q.degree() - p.degree();   // decay order at infinity
    switch (tag) {
    case FunctionClass::PsiQ: return std::min(m - 1, d);
    case FunctionClass::Psi: return std::min(m, d);
    case FunctionClass::F: return std::max(1, -d);
    }
    return 0;
}

} // namespace

DecayCertificate certify(const StemFunction& f, FunctionClass tag) {
    check_hypotheses(f, tag);
    DecayCertificate cert{tag, class_exponent(f, tag), 0.0};
    if (!(cert.alpha > 0)) throw HypothesisViolation("no positive decay exponent for this class");

    const double cnorm = f.coeff().norm();
    double worst = 0.0;
    for (int k = 0; k < kFitRays; ++k) {
        // rays strictly inside the sector
        const double angle = f.theta() * (2.0 * k / (kFitRays - 1) - 1.0) * 0.999;
        for (int i = 0; i < kFitRadii; ++i) {
            const double r = std::pow(10.0, -6.0 + 12.0 * i / (kFitRadii - 1));
            const double val = std::abs(f.rational()(std::polar(r, angle))) * cnorm;
            const double shape = DecayCertificate{tag, cert.alpha, 1.0}.bound(r);
            worst = std::max(worst, val / shape);
        }
    }
    if (!std::isfinite(worst)) throw HypothesisViolation("decay constant is not finite on the fit grid");
    cert.C = kFitSafety * worst;
    return cert;
}

CertifiedFunction make_rational(const IntrinsicRational& r, FunctionClass tag, double theta) {
    StemFunction f(r, theta);
    auto cert = certify(f, tag);
    return {std::move(f), cert};
}

CertifiedFunction make_regularizer(int n, double theta) {
    if (n < 1) throw DomainError("regularizer power must be positive");
    IntrinsicRational r{Polynomial::monomial(n), Polynomial::binomial_power(1.0, 1.0, 2 * n - 1)};
    return make_rational(r, n >= 2 ? FunctionClass::PsiQ : FunctionClass::F, theta);
}

StemFunction product(const StemFunction& f, const StemFunction& g) {
    if (!f.intrinsic()) throw NotIntrinsic("left factor of a product must be intrinsic");
    IntrinsicRational r{f.rational().p * g.rational().p, f.rational().q * g.rational().q};
    const Quat c = f.coeff().s0 * g.coeff();
    return StemFunction(std::move(r), std::min(f.theta(), g.theta()), g.side(), c);
}

CertifiedFunction product(const StemFunction& f, const StemFunction& g, FunctionClass tag) {
    StemFunction fg = product(f, g);
    auto cert = certify(fg, tag);
    return {std::move(fg), cert};
}

double cauchy_riemann_residual(const StemFunction& f, double u, double v, double h) {
    const Quat au = (f.alpha(u + h, v) - f.alpha(u - h, v)) / (2 * h);
    const Quat av = (f.alpha(u, v + h) - f.alpha(u, v - h)) / (2 * h);
    const Quat bu = (f.beta(u + h, v) - f.beta(u - h, v)) / (2 * h);
    const Quat bv = (f.beta(u, v + h) - f.beta(u, v - h)) / (2 * h);
    return (au - bv).norm() + (av + bu).norm();
}

Quat cf_derivative_polynomial(const Polynomial& p, const Quat& x) {
    const auto& c = p.coeffs();
    const Quat xb = x.conj();
    Quat total;
    // D x^i = -2 sum_{k=0}^{i-1} x^k xb^{i-1-k}; x and xb commute.
    for (std::size_t i = 1; i < c.size(); ++i) {
        if (c[i] == 0.0) continue;
        Quat inner;
        Quat xk(1.0);
        for (std::size_t k = 0; k < i; ++k) {
            Quat xbp(1.0);
            for (std::size_t j = 0; j + 1 + k < i; ++j) xbp = qmul(xbp, xb);
            inner += qmul(xk, xbp);
            xk = qmul(xk, x);
        }
        total += (-2.0 * c[i]) * inner;
    }
    return total;
}

Quat cf_derivative_rational(const StemFunction& f, const Quat& x) {
    const auto& p = f.rational().p;
    const auto& q = f.rational().q;
    const Quat num = qmul(cf_derivative_polynomial(p, x), q(x)) - qmul(p(x), cf_derivative_polynomial(q, x));
    const Quat val = qmul(qmul(num, qinv(q(x))), qinv(q(x.conj())));
    return f.side() == Side::left ? qmul(val, f.coeff()) : qmul(f.coeff(), val);
}

Quat central_difference_cf(const std::function<Quat(const Quat&)>& f, const Quat& x, double h,
                           Side side) {
    Quat total;
    for (int i = 0; i < 4; ++i) {
        Quat step;
        step[i] = h;
        const Quat d = (f(x + step) - f(x - step)) / (2 * h);
        Quat unit;
        unit[i] = 1.0;
        total += side == Side::left ? qmul(unit, d) : qmul(d, unit);
    }
    return total;
}

Quat pointwise_cf_derivative(const StemFunction& f, const Quat& x, CfDerivativeOptions opt) {
    if (f.is_polynomial()) {
        const double q0 = f.rational().q.coeffs().front();
        const Quat val = cf_derivative_polynomial((1.0 / q0) * f.rational().p, x);
        return f.side() == Side::left ? qmul(val, f.coeff()) : qmul(f.coeff(), val);
    }
    const double h = opt.h > 0 ? opt.h : 1e-5 * std::max(1.0, x.norm());
    auto eval = [&](const Quat& s) { return f(s); };
    const Quat coarse = central_difference_cf(eval, x, h, f.side());
    const Quat fine = central_difference_cf(eval, x, h / 2, f.side());
    const Quat extrapolated = (4.0 * fine - coarse) / 3.0;
    const double estimate = (fine - coarse).norm();
    if (estimate > opt.rel_tol * std::max(1.0, extrapolated.norm()))
        throw StepTooLarge("Richardson estimate exceeds the tolerance; reduce the step");
    return extrapolated;
}

} // namespace hqcalc
