#include "hqcalc/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hqcalc {

namespace {

/// Largest |Arg| over sigma_S(T); 0 when the spectrum is not available.
double spectral_angle(const CommutingOperator& T) {
    if (T.construction() == CommutingOperator::Construction::general) return 0.0;
    return s_spectrum(T).max_arg;
}

Side resolve_side(const CertifiedFunction& f, const CalcOptions& opt) {
    const Side side = opt.side.value_or(f.f.side());
    if (side != f.f.side() && !f.f.intrinsic())
        throw NotIntrinsic("only intrinsic functions may be assembled on either side");
    return side;
}

CalculusResult run_contour(const CommutingOperator& T, const CertifiedFunction& f, const CalcOptions& opt,
                           KernelKind kind) {
    const Side side = resolve_side(f, opt);
    const double phi = opt.phi.value_or(default_phi(T, f.f.theta()));
    if (!(phi < f.f.theta()))
        throw DomainError("contour angle must be smaller than the holomorphy angle of f");
    const Sector<double> sector(phi);
    const SectorCertificate rc = sector_certificate(T, sector, opt.J);
    const ContourPlan plan =
        plan_contour(f.cert, rc, phi, opt.J, opt.tol, kind, PlanOptions{opt.order, opt.max_nodes});

    Kernel kernel;
    if (kind == KernelKind::q_pencil) {
        kernel = [&T](const Quat& s) { return pencil_inverse(T, s); };
    } else {
        kernel = [&T, side](const Quat& s) { return s_resolvent(T, s, side); };
    }
    const ContourResult cr = contour_integrate(plan, kernel, f.f, side, kernel_prefactor(kind));

    CalculusResult out;
    out.value = cr.value;
    out.est_error = cr.est_error();
    out.nodes = cr.nodes;
    out.plan = plan;
    out.diagnostics["est_quad_err"] = cr.est_quad_err;
    out.diagnostics["est_tail"] = cr.est_tail;
    out.diagnostics["panels"] = static_cast<double>(cr.panels);
    out.diagnostics["C_theta"] = rc.C_theta;
    out.diagnostics["C_theta_Q"] = rc.C_theta_Q;
    return out;
}

QMat scale_by_coeff(const QMat& m, const StemFunction& f) {
    return f.side() == Side::left ? m * f.coeff() : f.coeff() * m;
}

/// Norm of the closed-form value of a rational stem at T, or 0 if q[T]
/// cannot be inverted.
double closed_form_norm(const StemFunction& f, const CommutingOperator& T) {
    try {
        return scale_by_coeff(rational_calc(f.rational().p, f.rational().q, T), f).frobenius();
    } catch (const Error&) {
        return 0.0;
    }
}

double closed_form_d_norm(const StemFunction& f, const CommutingOperator& T) {
    try {
        return scale_by_coeff(rational_d(f.rational().p, f.rational().q, T).form1, f).frobenius();
    } catch (const Error&) {
        return 0.0;
    }
}

constexpr double kInnerTolFloor = 1e-14;

struct Regularised {
    CertifiedFunction e;
    CertifiedFunction ef;
};

Regularised regularise(const CertifiedFunction& f, int n, FunctionClass product_class) {
    if (f.f.side() != Side::left)
        throw Unsupported("regularised calculi are defined for left slice functions only");
    CertifiedFunction e = make_regularizer(n, f.f.theta());
    StemFunction ef = product(e.f, f.f);
    try {
        auto cert = certify(ef, product_class);
        return {std::move(e), {std::move(ef), cert}};
    } catch (const HypothesisViolation& err) {
        if (product_class == FunctionClass::PsiQ)
            throw ProductNotDecaying(std::string("e f is not in PsiQ: ") + err.what());
    }
    try {
        auto cert = certify(ef, FunctionClass::PsiQ);
        return {std::move(e), {std::move(ef), cert}};
    } catch (const HypothesisViolation& err) {
        throw ProductNotDecaying(std::string("e f decays too slowly: ") + err.what());
    }
}

void require_injective(const QMat& m, double threshold, const char* what) {
    const double norm = m.op_norm();
    if (!(m.min_singular() >= threshold * norm))
        throw RegularizerSingular(std::string(what) + " is not numerically injective");
}

} // namespace

double default_phi(const CommutingOperator& T, double theta) {
    const double omega = spectral_angle(T);
    if (!(omega < theta)) throw NotSectorial("S-spectrum is not inside the holomorphy sector");
    return 0.5 * (omega + theta);
}

CalculusResult s_calc(const CommutingOperator& T, const CertifiedFunction& f, CalcOptions opt) {
    if (f.cert.class_tag == FunctionClass::F)
        throw HypothesisViolation("S-functional calculus needs a decaying (Psi or PsiQ) function");
    return run_contour(T, f, opt, KernelKind::s_resolvent);
}

CalculusResult d_calc(const CommutingOperator& T, const CertifiedFunction& f, CalcOptions opt) {
    if (f.cert.class_tag != FunctionClass::PsiQ)
        throw HypothesisViolation("harmonic calculus needs a PsiQ function");
    return run_contour(T, f, opt, KernelKind::q_pencil);
}

QMat poly_calc(const Polynomial& q, const CommutingOperator& T) {
    const QMat t = T.matrix();
    QMat acc = QMat::Zero(T.dim(), T.dim());
    const auto& c = q.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * t;
        acc.component(0).diagonal().array() += *it;
    }
    return acc;
}

QMat d_poly_calc(const Polynomial& p, const CommutingOperator& T) {
    const auto& c = p.coeffs();
    const Eigen::Index n = T.dim();
    QMat out = QMat::Zero(n, n);
    if (c.size() <= 1) return out;
    const std::size_t top = c.size() - 1;
    std::vector<QMat> tp{QMat::Identity(n)}, tbp{QMat::Identity(n)};
    const QMat t = T.matrix(), tb = t.conj();
    for (std::size_t k = 1; k < top; ++k) {
        tp.push_back(tp.back() * t);
        tbp.push_back(tbp.back() * tb);
    }
    for (std::size_t i = 1; i <= top; ++i) {
        if (c[i] == 0.0) continue;
        QMat inner = QMat::Zero(n, n);
        for (std::size_t k = 0; k < i; ++k) inner += tp[k] * tbp[i - 1 - k];
        out += (-2.0 * c[i]) * inner;
    }
    return out;
}

namespace {

void check_zero_free(const Polynomial& q, const CommutingOperator& T) {
    if (q.is_zero()) throw DomainError("denominator polynomial is identically zero");
    if (T.construction() == CommutingOperator::Construction::general) return;
    const auto rep = s_spectrum(T);
    constexpr double kTol = 1e-12;
    for (const auto& r : q.roots()) {
        const Quat root(r.real(), std::abs(r.imag()), 0, 0);
        if (std::abs(r) <= kTol || std::abs(std::arg(r)) <= rep.max_arg + kTol)
            throw ZeroInSector("q has a zero at arg " + std::to_string(std::arg(r)) +
                               " inside the closed spectral sector (max arg " + std::to_string(rep.max_arg) + ")");
        for (const auto& sp : rep.spheres)
            if (sp.distance(root) <= kTol * std::max(1.0, std::abs(r)))
                throw ZeroInSector("q vanishes on the S-spectrum of T");
    }
}

QMat checked_solve_right(const QMat& b, const QMat& a) {
    try {
        return solve_right(b, a);
    } catch (const ZeroDivision&) {
        throw ZeroInSector("q[T] is numerically singular");
    }
}

} // namespace

RationalD rational_d(const Polynomial& p, const Polynomial& q, const CommutingOperator& T) {
    check_zero_free(q, T);
    const CommutingOperator Tb = T.conjugate();
    const QMat pT = poly_calc(p, T), pTb = poly_calc(p, Tb);
    const QMat qT = poly_calc(q, T), qTb = poly_calc(q, Tb);
    const QMat DpT = d_poly_calc(p, T), DqT = d_poly_calc(q, T);
    // X q[T]^{-1} q[T-bar]^{-1} = X (q[T-bar] q[T])^{-1}
    const QMat denom = qTb * qT;
    return {checked_solve_right(DpT * qT - pT * DqT, denom),
            checked_solve_right(DpT * qTb - pTb * DqT, denom)};
}

QMat rational_calc(const Polynomial& p, const Polynomial& q, const CommutingOperator& T) {
    check_zero_free(q, T);
    return checked_solve_right(poly_calc(p, T), poly_calc(q, T));
}

int default_regularizer_power(const DecayCertificate& f_cert) {
    const int smallest = static_cast<int>(std::floor(1.0 + f_cert.alpha)) + 1;
    return smallest + 1;
}

CalculusResult hinf_s(const CommutingOperator& T, const CertifiedFunction& f, HinfOptions opt) {
    const int n = opt.regularizer_n > 0 ? opt.regularizer_n : default_regularizer_power(f.cert);
    const Regularised reg = regularise(f, n, FunctionClass::Psi);

    // tolerance budget from the closed forms: errors are amplified by ||e(T)^{-1}||
    const QMat e_cf = rational_calc(reg.e.f.rational().p, reg.e.f.rational().q, T);
    require_injective(e_cf, opt.injectivity_threshold, "e(T)");
    const double sigma = e_cf.min_singular();
    const double scale = 1.0 + closed_form_norm(f.f, T);
    CalcOptions inner = opt.calc;
    inner.side.reset();
    inner.tol = std::max(kInnerTolFloor, opt.calc.tol * std::min(1.0, sigma) / (4.0 * scale));

    const CalculusResult eT = s_calc(T, reg.e, inner);
    const CalculusResult efT = s_calc(T, reg.ef, inner);
    require_injective(eT.value, opt.injectivity_threshold, "e(T)");
    const double sig = eT.value.min_singular();

    CalculusResult out;
    out.value = solve(eT.value, efT.value);
    out.est_error = (efT.est_error + out.value.frobenius() * eT.est_error) / sig;
    out.nodes = eT.nodes + efT.nodes;
    out.plan = efT.plan;
    out.diagnostics["regularizer_n"] = n;
    out.diagnostics["sigma_min_e"] = sig;
    out.diagnostics["inner_tol"] = inner.tol;
    return out;
}

CalculusResult hinf_d(const CommutingOperator& T, const CertifiedFunction& f, HinfOptions opt) {
    const int n = opt.regularizer_n > 0 ? opt.regularizer_n : default_regularizer_power(f.cert);
    if (n < 2) throw DomainError("harmonic regularisation needs a PsiQ regulariser (n >= 2)");
    const Regularised reg = regularise(f, n, FunctionClass::PsiQ);
    const CommutingOperator Tb = T.conjugate();

    const auto& ep = reg.e.f.rational().p;
    const auto& eq = reg.e.f.rational().q;
    const QMat e_cf = rational_calc(ep, eq, T);
    const QMat eb_cf = rational_calc(ep, eq, Tb);
    require_injective(e_cf, opt.injectivity_threshold, "e(T)");
    require_injective(eb_cf, opt.injectivity_threshold, "e(T-bar)");
    const double sigma = std::min(e_cf.min_singular(), eb_cf.min_singular());
    const double scale = 1.0 + std::max(closed_form_norm(f.f, T), closed_form_norm(f.f, Tb)) +
                         closed_form_d_norm(reg.e.f, T) + closed_form_d_norm(f.f, T);
    CalcOptions inner = opt.calc;
    inner.side.reset();
    inner.tol = std::max(kInnerTolFloor, opt.calc.tol * std::min(1.0, sigma) / (8.0 * scale));

    const CalculusResult eT = s_calc(T, reg.e, inner);
    const CalculusResult eTb = s_calc(Tb, reg.e, inner);
    const CalculusResult efT = s_calc(T, reg.ef, inner);
    const CalculusResult efTb = s_calc(Tb, reg.ef, inner);
    const CalculusResult DefT = d_calc(T, reg.ef, inner);
    const CalculusResult DeT = d_calc(T, reg.e, inner);
    require_injective(eT.value, opt.injectivity_threshold, "e(T)");
    require_injective(eTb.value, opt.injectivity_threshold, "e(T-bar)");

    const QMat fT = solve(eT.value, efT.value);
    const QMat fTb = solve(eTb.value, efTb.value);
    const QMat form1 = solve(eTb.value, DefT.value - fT * DeT.value);
    const QMat form2 = solve(eT.value, DefT.value - fTb * DeT.value);

    const double sig = std::min(eT.value.min_singular(), eTb.value.min_singular());
    const double quad = DefT.est_error + fT.frobenius() * DeT.est_error +
                        DeT.value.frobenius() * (efT.est_error + efTb.est_error) / sig;

    CalculusResult out;
    out.value = form1;
    out.form_gap = (form1 - form2).frobenius();
    out.est_error = (quad + form1.frobenius() * std::max(eT.est_error, eTb.est_error)) / sig;
    out.nodes = eT.nodes + eTb.nodes + efT.nodes + efTb.nodes + DefT.nodes + DeT.nodes;
    out.plan = DefT.plan;
    out.diagnostics["regularizer_n"] = n;
    out.diagnostics["sigma_min_e"] = sig;
    out.diagnostics["inner_tol"] = inner.tol;
    out.diagnostics["max_nodes_per_integral"] = static_cast<double>(
        std::max({eT.nodes, eTb.nodes, efT.nodes, efTb.nodes, DefT.nodes, DeT.nodes}));
    return out;
}

} // namespace hqcalc
