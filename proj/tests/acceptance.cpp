// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hqcalc/harness.hpp"

using namespace hqcalc;

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& g, double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }

Quat gaussian_quat(Rng& g) {
    std::normal_distribution<double> n;
    return {n(g), n(g), n(g), n(g)};
}

Unit random_unit(Rng& g) {
    for (;;) {
        const Quat q = gaussian_quat(g);
        if (q.imag_norm() > 1e-3) return Unit::from(q);
    }
}

// spectra inside |Arg| <= pi/6
CommutingOperator random_diag(Rng& g, int n) {
    std::vector<Quat> e;
    for (int i = 0; i < n; ++i) {
        const double u = uniform(g, 0.5, 4.0);
        e.push_back(random_unit(g).point(u, uniform(g, 0, u * std::tan(std::numbers::pi / 6))));
    }
    return build_diagonal(e);
}

CommutingOperator random_family(Rng& g, int n) {
    Eigen::MatrixXd G = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return uniform(g, -1, 1); });
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
    Eigen::VectorXd lam(n);
    for (int i = 0; i < n; ++i) lam(i) = uniform(g, 0.5, 3.0);
    Eigen::MatrixXd M = Q * lam.asDiagonal() * Q.transpose();
    M = 0.5 * (M + M.transpose()).eval();
    const Unit d = random_unit(g);
    const double c = uniform(g, 0, 0.5);
    return build_poly_family(M, {Polynomial{0, 1}, Polynomial{0, c * d[0]}, Polynomial{0, c * d[1]},
                                 Polynomial{0, c * d[2]}});
}

CommutingOperator random_op(Rng& g) { return g() % 2 ? random_diag(g, 3) : random_family(g, 4); }

std::vector<CommutingOperator> catalog() {
    Eigen::MatrixXd M(4, 4);
    M << 2, -0.5, 0, 0, -0.5, 2, -0.5, 0, 0, -0.5, 2, -0.5, 0, 0, -0.5, 2;
    return {build_diagonal({Quat(2.0)}), build_diagonal({Quat(1, 2, 0, 0)}),
            build_poly_family(M, {Polynomial{0, 1}, Polynomial{0, 0.3}, Polynomial{0.1, 0, 0.05}, Polynomial{0, 0.1}})};
}

CertifiedFunction random_psiq(Rng& g) {
    const double a = uniform(g, 0.5, 2), b = uniform(g, 0.5, 2), c = uniform(g, 0.5, 2);
    return make_rational({Polynomial::monomial(2, a), Polynomial{b, 1} * Polynomial::binomial_power(c, 1, 2)},
                         FunctionClass::PsiQ);
}

double rel(const QMat& a, const QMat& b) { return (a - b).frobenius() / std::max(1.0, b.frobenius()); }

CalcOptions with_tol(double tol) {
    CalcOptions o;
    o.tol = tol;
    return o;
}

struct Verdict {
    bool pass;
    std::string detail;
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

Verdict resolvent_equation() {
    Rng g(101);
    double worst = 0;
    int used = 0;
    while (used < 200) {
        const auto T = random_op(g);
        const Quat s = 2.0 * gaussian_quat(g), p = 2.0 * gaussian_quat(g);
        if (same_sphere(s, p, 1e-3)) continue;
        try {
            const QMat Qs = pencil_inverse(T, s), Qp = pencil_inverse(T, p);
            const QMat lhs = Qs * cauchy_kernel_left(p, s) + cauchy_kernel_right(s, p) * Qp;
            const QMat a = Qs * s_resolvent(T, p, Side::left) + s_resolvent(T.conjugate(), s, Side::right) * Qp;
            const QMat b = Qs * s_resolvent(T.conjugate(), p, Side::left) + s_resolvent(T, s, Side::right) * Qp;
            const QMat mid = QMat::scalar(p + s, T.dim()) - 2.0 * QMat::real(T.component(0));
            const QMat k = Qs * mid * Qp;
            const double scale = std::max({lhs.frobenius(), k.frobenius(), Qs.frobenius() * mid.frobenius() * Qp.frobenius()});
            worst = std::max({worst, (lhs - a).frobenius() / scale, (lhs - b).frobenius() / scale,
                              (lhs - k).frobenius() / scale});
            ++used;
        } catch (const SpectralPoint&) {
        }
    }
    return {worst <= 1e-9, "200 triples, worst relative residual " + num(worst)};
}

Verdict kernel_identity() {
    Rng g(202);
    double worst = 0, order = 1e300;
    auto err = [](const Quat& s, const Quat& q, double h) {
        const Quat fd = central_difference_cf([&](const Quat& x) { return cauchy_kernel_left(s, x); }, q, h);
        const Quat exact = -2.0 * qinv(pencil_scalar(s, q));
        return (fd - exact).norm() / std::max(1.0, exact.norm());
    };
    for (int i = 0; i < 50; ++i) {
        const Quat q = gaussian_quat(g);
        Quat s;
        do s = 2.0 * gaussian_quat(g);
        while (Sphere<double>::of(q).distance(s) < 0.5);
        worst = std::max(worst, err(s, q, 1e-4));
        order = std::min(order, std::log2(err(s, q, 2e-2) / err(s, q, 1e-2)));
    }
    return {worst <= 1e-5 && order > 1.8, "residual " + num(worst) + " at h = 1e-4, observed order " + num(order)};
}

Verdict independence() {
    Rng g(303);
    const double tol = 1e-7;
    double worst = 0;
    for (int c = 0; c < 20; ++c) {
        const auto T = random_op(g);
        const auto f = random_psiq(g);
        const double omega = s_spectrum(T).max_arg;
        std::vector<Unit> units{Unit::e1(), random_unit(g), random_unit(g)};
        std::vector<QMat> vals;
        for (int a = 0; a < 3; ++a)
            for (const auto& J : units) {
                CalcOptions o = with_tol(tol);
                o.phi = omega + (f.f.theta() - omega) * (a + 1) / 4.0;
                o.J = J;
                vals.push_back(d_calc(T, f, o).value);
            }
        for (std::size_t i = 0; i < vals.size(); ++i)
            for (std::size_t j = i + 1; j < vals.size(); ++j) worst = std::max(worst, (vals[i] - vals[j]).frobenius());
    }
    return {worst <= 6 * tol, "20 cases x 3 angles x 3 units, worst pairwise gap " + num(worst) + " (limit " +
                                  num(6 * tol) + ")"};
}

Verdict rational_equivalence() {
    const Polynomial p{0, 0, 1}, q = Polynomial::binomial_power(1, 1, 3);
    const auto f = make_rational({p, q}, FunctionClass::PsiQ);
    double worst = 0;
    for (const auto& T : catalog()) {
        const QMat quad = d_calc(T, f, with_tol(1e-9)).value;
        const auto cf = rational_d(p, q, T);
        worst = std::max({worst, rel(quad, cf.form1), rel(quad, cf.form2)});
    }
    const double pin0 = rational_d(p, q, build_diagonal({Quat(2.0)})).form1.max_abs();
    const double pin1 = (rational_d(p, q, build_diagonal({Quat::e1()})).form1(0, 0) - Quat(-0.5)).norm();
    const double qpin = d_calc(build_diagonal({Quat::e1()}), f, with_tol(1e-9)).value(0, 0).s0 + 0.5;
    const bool ok = worst <= 1e-7 && pin0 <= 1e-14 && pin1 <= 1e-14 && std::abs(qpin) <= 1e-7;
    return {ok, "worst relative gap " + num(worst) + ", pins 0 -> " + num(pin0) + ", -1/2 -> " + num(pin1)};
}

Verdict product_rule() {
    Rng g(505);
    const auto e = make_regularizer(3);
    const CalcOptions o = with_tol(1e-10);
    double worst = 0, forms = 0;
    for (int i = 0; i < 10; ++i) {
        const auto T = random_op(g);
        const auto h = random_psiq(g);
        const auto fg = product(e.f, h.f, FunctionClass::PsiQ);
        const auto Tb = T.conjugate();
        const QMat lhs = d_calc(T, fg, o).value;
        const QMat Df = d_calc(T, e, o).value, Dg = d_calc(T, h, o).value;
        const QMat a = Df * s_calc(T, h, o).value + s_calc(Tb, e, o).value * Dg;
        const QMat b = Df * s_calc(Tb, h, o).value + s_calc(T, e, o).value * Dg;
        const double scale = std::max(1.0, lhs.frobenius());
        worst = std::max({worst, (lhs - a).frobenius() / scale, (lhs - b).frobenius() / scale});
        forms = std::max(forms, (a - b).frobenius() / scale);
    }
    return {worst <= 1e-7 && forms <= 1e-9,
            "10 operators, worst residual " + num(worst) + ", form gap " + num(forms)};
}

Verdict hinf_consistency() {
    const double tol = 1e-7;
    const auto id = make_rational({Polynomial{0, 1}}, FunctionClass::F);
    double worst = 0, ngap = 0, fgap = 0;
    for (const auto& T : catalog()) {
        HinfOptions h;
        h.calc.tol = tol;
        h.regularizer_n = default_regularizer_power(id.cert);
        const auto a = hinf_d(T, id, h);
        ++h.regularizer_n;
        const auto b = hinf_d(T, id, h);
        worst = std::max(worst, (a.value - (-2.0) * QMat::Identity(T.dim())).frobenius());
        ngap = std::max(ngap, (a.value - b.value).frobenius());
        fgap = std::max({fgap, *a.form_gap, *b.form_gap});
    }
    return {worst <= 1e-7 && ngap <= 3 * tol && fgap <= 1e-8,
            "|Ds(T) + 2I| " + num(worst) + ", n vs n+1 " + num(ngap) + ", form gap " + num(fgap)};
}

Verdict structure() {
    Rng g(707);
    const CalcOptions o = with_tol(1e-9);
    double comm = 0, imag = 0, conj_gap = 0;
    for (int i = 0; i < 5; ++i) {
        const auto T = random_family(g, 4);
        const auto f = random_psiq(g);
        const QMat d = d_calc(T, f, o).value;
        const QMat s = s_calc(T, f, o).value;
        for (const QMat* v : {&d, &s}) {
            const double sc = v->frobenius() * v->frobenius();
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b) {
                    const auto& A = v->component(a);
                    const auto& B = v->component(b);
                    comm = std::max(comm, (A * B - B * A).norm() / sc);
                }
        }
        imag = std::max(imag, d.imag_frobenius() / d.frobenius());
        conj_gap = std::max(conj_gap, (d - d_calc(T.conjugate(), f, o).value).max_abs());
        for (int k = 0; k < 10; ++k) {
            const Quat z = 3.0 * gaussian_quat(g);
            try {
                conj_gap = std::max(conj_gap, (pencil_inverse(T, z) - pencil_inverse(T.conjugate(), z)).max_abs());
            } catch (const SpectralPoint&) {
            }
        }
    }
    return {comm <= 1e-9 && imag <= 1e-10 && conj_gap == 0.0,
            "commutation " + num(comm) + ", non-real part " + num(imag) + ", Df(T) - Df(T-bar) " + num(conj_gap)};
}

Verdict q_estimate() {
    Rng g(808);
    auto ops = catalog();
    for (int i = 0; i < 5; ++i) ops.push_back(random_op(g));
    double worst = 0;
    bool finite = true;
    for (const auto& T : ops) {
        const double theta = 0.5 * (s_spectrum(T).max_arg + std::numbers::pi);
        const auto prof = ray_profile(T, theta, random_unit(g), 1e-4, 1e4, 10);
        double full = 0, inner = 0;
        for (const auto& r : prof) {
            finite = finite && std::isfinite(r.q_scaled);
            full = std::max(full, r.q_scaled);
            if (r.radius <= 1e3 * (1 + 1e-9)) inner = std::max(inner, r.q_scaled);
        }
        worst = std::max(worst, full / inner);
    }
    return {finite && worst < 1.01, "running-max ratio over the last decade " + num(worst)};
}

Verdict performance() {
    SuiteConfig cfg;
    cfg.suites = {"all"};
    validate(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const Report rep = run_suite(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::size_t nodes = 0;
    const auto f = make_rational({Polynomial{0, 0, 1}, Polynomial::binomial_power(1, 1, 3)}, FunctionClass::PsiQ);
    const auto g = make_rational({Polynomial{0, 1}, Polynomial{1, 2, 1}}, FunctionClass::Psi);
    const auto id = make_rational({Polynomial{0, 1}}, FunctionClass::F);
    for (const auto& T : catalog()) {
        nodes = std::max({nodes, d_calc(T, f, with_tol(1e-7)).nodes, s_calc(T, f, with_tol(1e-7)).nodes,
                          s_calc(T, g, with_tol(1e-7)).nodes});
        HinfOptions h;
        h.calc.tol = 1e-7;
        nodes = std::max(nodes, static_cast<std::size_t>(hinf_d(T, id, h).diagnostics.at("max_nodes_per_integral")));
    }
    const bool ok = rep.pass() && secs < 60.0 && nodes < (std::size_t{1} << 14);
    return {ok, "suite all: " + std::to_string(rep.checks.size() - rep.failed()) + "/" +
                    std::to_string(rep.checks.size()) + " in " + num(secs) + " s, max nodes per integral " +
                    std::to_string(nodes)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"resolvent equation", resolvent_equation},
        {"kernel identity", kernel_identity},
        {"angle and unit independence", independence},
        {"rational equivalence", rational_equivalence},
        {"product rule", product_rule},
        {"H-infinity consistency", hinf_consistency},
        {"structure", structure},
        {"pencil estimate", q_estimate},
        {"performance", performance},
    };
    int failed = 0;
    int k = 0;
    for (const auto& [name, run] : criteria) {
        ++k;
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw ") + e.what()};
        }
        failed += !v.pass;
        std::printf("%d %s %-28s %s\n", k, v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
