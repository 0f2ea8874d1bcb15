#include "doctest.h"

#include <numbers>

#include "hqcalc/calculus.hpp"

using namespace hqcalc;

namespace {

IntrinsicRational rat(Polynomial p, Polynomial q) { return {std::move(p), std::move(q)}; }

double diag_gap(const QMat& m, std::initializer_list<Quat> expect) {
    QMat e(m.rows(), m.cols());
    Eigen::Index i = 0;
    for (const auto& q : expect) {
        e.set(i, i, q);
        ++i;
    }
    return (m - e).max_abs();
}

CommutingOperator family() {
    Eigen::MatrixXd M(3, 3);
    M << 2, -0.5, 0, -0.5, 2, -0.5, 0, -0.5, 2;
    return build_poly_family(M, {Polynomial{0, 1}, Polynomial{0, 0.3}, Polynomial{0.1, 0, 0.05}, Polynomial{0, 0.1}});
}

CalcOptions tight(double tol = 1e-9) {
    CalcOptions o;
    o.tol = tol;
    return o;
}

} // namespace

TEST_CASE("polynomial calculus") {
    const auto T = build_diagonal({Quat(1, 1, 0, 0)});
    CHECK(diag_gap(poly_calc(Polynomial{-2, 0, 1}, T), {Quat(-2, 2, 0, 0)}) < 1e-15);
    CHECK(diag_gap(d_poly_calc(Polynomial{0, 1}, T), {Quat(-2.0)}) < 1e-15);
    CHECK(diag_gap(d_poly_calc(Polynomial{0, 0, 1}, T), {Quat(-4.0)}) < 1e-15);
    CHECK(d_poly_calc(Polynomial{3.0}, T).max_abs() == 0.0);

    // D s^3 = -2 (T^2 + T Tbar + Tbar^2)
    const auto F = family();
    const QMat t = F.matrix(), tb = F.conjugate().matrix();
    const QMat expect = -2.0 * (t * t + t * tb + tb * tb);
    CHECK((d_poly_calc(Polynomial{0, 0, 0, 1}, F) - expect).frobenius() < 1e-12);
}

TEST_CASE("rational closed forms") {
    const auto r0 = rational_d(Polynomial{0, 0, 1}, Polynomial{1, 3, 3, 1}, build_diagonal({Quat(2.0)}));
    CHECK(r0.form1.max_abs() < 1e-15);
    CHECK(r0.form2.max_abs() < 1e-15);

    const auto r1 = rational_d(Polynomial{0, 1}, Polynomial{1, 1}, build_diagonal({Quat(1.0)}));
    CHECK(diag_gap(r1.form1, {Quat(-0.5)}) < 1e-15);

    const auto F = family();
    const auto r = rational_d(Polynomial{0, 0, 1}, Polynomial{1, 3, 3, 1}, F);
    CHECK((r.form1 - r.form2).frobenius() < 1e-12);

    CHECK(diag_gap(rational_calc(Polynomial{0, 1}, Polynomial{1, 2, 1}, build_diagonal({Quat(2.0)})),
                   {Quat(2.0 / 9.0)}) < 1e-15);
    // q vanishes at s = 2 on the spectrum
    CHECK_THROWS_AS(rational_d(Polynomial{1.0}, Polynomial{-2, 1}, build_diagonal({Quat(2.0)})), ZeroInSector);
    // q vanishes at 1 + e1-ish point inside the spectral sector of diag(1 + 2 e1)
    CHECK_THROWS_AS(rational_calc(Polynomial{1.0}, Polynomial{-0.5, 1}, build_diagonal({Quat(1, 2, 0, 0)})),
                    ZeroInSector);
}

TEST_CASE("S-functional calculus") {
    const auto T = build_diagonal({Quat(2.0), Quat(1, 1, 0, 0)});
    const auto f = make_rational(rat({0, 1}, {1, 2, 1}), FunctionClass::Psi);
    const auto r = s_calc(T, f, tight());
    CHECK(diag_gap(r.value, {Quat(2.0 / 9.0), f.f(Quat(1, 1, 0, 0))}) < 1e-8);
    CHECK(r.est_error < 1e-8);
    REQUIRE(r.plan);
    CHECK(r.plan->phi == doctest::Approx(default_phi(T, kDefaultTheta)));

    CalcOptions right;
    right.side = Side::right;
    right.tol = 1e-9;
    CHECK((s_calc(T, f, right).value - r.value).max_abs() < 1e-8);

    const auto g = make_rational(rat({0, 0, 1}, {1}), FunctionClass::F);
    CHECK_THROWS_AS(s_calc(T, g), HypothesisViolation);
    CHECK_THROWS_AS(s_calc(build_diagonal({Quat(-1, 0.1, 0, 0)}), f), NotSectorial);

    // agrees with the rational closed form on a polynomial family
    const auto F = family();
    const auto fr = s_calc(F, f, tight());
    CHECK((fr.value - rational_calc(Polynomial{0, 1}, Polynomial{1, 2, 1}, F)).max_abs() < 1e-8);
}

TEST_CASE("non-intrinsic functions keep their side") {
    const auto T = build_diagonal({Quat(1, 0, 0.5, 0)});
    const StemFunction fl(rat({0, 0, 1}, {1, 3, 3, 1}), kDefaultTheta, Side::left, Quat(0, 1, 0, 0));
    const CertifiedFunction f{fl, certify(fl, FunctionClass::PsiQ)};
    const auto r = s_calc(T, f, tight());
    CHECK((r.value(0, 0) - fl(Quat(1, 0, 0.5, 0))).norm() < 1e-8);
    CalcOptions flip;
    flip.side = Side::right;
    CHECK_THROWS_AS(s_calc(T, f, flip), NotIntrinsic);

    const StemFunction fr = fl.with_side(Side::right);
    const CertifiedFunction g{fr, certify(fr, FunctionClass::PsiQ)};
    CHECK((s_calc(T, g, tight()).value(0, 0) - fr(Quat(1, 0, 0.5, 0))).norm() < 1e-8);
}

TEST_CASE("harmonic calculus") {
    const auto f = make_rational(rat({0, 0, 1}, {1, 3, 3, 1}), FunctionClass::PsiQ);
    CHECK(d_calc(build_diagonal({Quat(2.0)}), f, tight()).value.max_abs() < 1e-8);

    for (const Quat q : {Quat(1, 0.5, 0, 0), Quat(0.5, 0.2, -0.3, 0.4), Quat(3, 0, 0, 1)}) {
        const auto r = d_calc(build_diagonal({q}), f, tight());
        CHECK((r.value(0, 0) - cf_derivative_rational(f.f, q)).norm() < 1e-8);
        CHECK((r.value(0, 0) - pointwise_cf_derivative(f.f, q)).norm() < 1e-6);
    }

    const auto F = family();
    const auto r = d_calc(F, f, tight());
    const auto cf = rational_d(Polynomial{0, 0, 1}, Polynomial{1, 3, 3, 1}, F);
    CHECK((r.value - cf.form1).max_abs() < 1e-8);

    // Psi is not enough for the pencil kernel
    const auto g = make_rational(rat({0, 1}, {1, 2, 1}), FunctionClass::Psi);
    CHECK_THROWS_AS(d_calc(F, g), HypothesisViolation);
}

TEST_CASE("angle and slice independence") {
    const auto F = family();
    const auto f = make_rational(rat({0, 0, 1}, {1, 3, 3, 1}), FunctionClass::PsiQ);
    const double lo = s_spectrum(F).max_arg;
    CalcOptions a = tight(), b = tight();
    a.phi = lo + 0.2;
    b.phi = 2.2;
    b.J = Unit::from(0.3, -0.5, 0.8);
    CHECK((d_calc(F, f, a).value - d_calc(F, f, b).value).max_abs() < 1e-8);
    CHECK((s_calc(F, f, a).value - s_calc(F, f, b).value).max_abs() < 1e-8);
}

TEST_CASE("regularised calculus") {
    const auto id = make_rational(rat({0, 1}, {1}), FunctionClass::F);
    const auto sq = make_rational(rat({0, 0, 1}, {1}), FunctionClass::F);
    HinfOptions opt;
    opt.calc.tol = 1e-9;

    CHECK(diag_gap(hinf_s(build_diagonal({Quat(2.0)}), id, opt).value, {Quat(2.0)}) < 1e-7);
    const auto D = build_diagonal({Quat(1, 1, 0, 0), Quat(3.0)});
    CHECK((hinf_s(D, id, opt).value - D.matrix()).max_abs() < 1e-7);

    const auto d1 = hinf_d(build_diagonal({Quat(2.0)}), id, opt);
    CHECK(diag_gap(d1.value, {Quat(-2.0)}) < 1e-7);
    REQUIRE(d1.form_gap);
    CHECK(*d1.form_gap < 1e-7);
    CHECK(diag_gap(hinf_d(build_diagonal({Quat(2.0)}), sq, opt).value, {Quat(-8.0)}) < 1e-6);
    CHECK(diag_gap(hinf_d(build_diagonal({Quat(1.0)}), sq, opt).value, {Quat(-4.0)}) < 1e-6);
    CHECK(d1.diagnostics.count("regularizer_n") == 1);

    const auto F = family();
    const QMat ref = d_poly_calc(Polynomial{0, 0, 1}, F);
    HinfOptions n5 = opt, n6 = opt;
    n5.regularizer_n = 5;
    n6.regularizer_n = 6;
    const QMat a = hinf_d(F, sq, n5).value, b = hinf_d(F, sq, n6).value;
    CHECK((a - ref).max_abs() < 1e-6);
    CHECK((a - b).max_abs() < 1e-6);

    // too small a power leaves e f non-decaying
    HinfOptions n1 = opt, n3 = opt;
    n1.regularizer_n = 1;
    n3.regularizer_n = 3;
    CHECK_THROWS_AS(hinf_d(F, sq, n3), ProductNotDecaying);
    CHECK_THROWS_AS(hinf_d(F, sq, n1), DomainError);
    CHECK(default_regularizer_power(sq.cert) == 5);
    CHECK(default_regularizer_power(id.cert) == 4);
}

TEST_CASE("regularised calculus rejects singular regularisers") {
    const auto id = make_rational(rat({0, 1}, {1}), FunctionClass::F);
    // e(T) is singular when T has a zero eigenvalue
    const auto Z = build_diagonal({Quat(0.0), Quat(1.0)});
    CHECK_THROWS_AS(hinf_s(Z, id), RegularizerSingular);
}
