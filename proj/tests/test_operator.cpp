#include "doctest.h"

#include <numbers>

#include "hqcalc/operator.hpp"

using namespace hqcalc;

namespace {

bool near(const Quat& a, const Quat& b, double tol = 1e-13) { return (a - b).norm() <= tol; }

} // namespace

TEST_CASE("diagonal operators") {
    const auto T = build_diagonal({Quat(2.0)});
    CHECK(T.dim() == 1);
    CHECK(T.component(0)(0, 0) == 2.0);
    CHECK(T.component(1)(0, 0) == 0.0);

    const auto E = build_diagonal({Quat::e1()});
    CHECK(E.component(1)(0, 0) == 1.0);
    CHECK(E.component(0)(0, 0) == 0.0);

    const auto D = build_diagonal({Quat(1, 2, 0, 0), Quat(3.0)});
    const auto rep = s_spectrum(D);
    REQUIRE(rep.spheres.size() == 2);
    CHECK(rep.spheres[0] == Sphere<double>{1, 2});
    CHECK(rep.spheres[1] == Sphere<double>{3, 0});
    // the pencil is singular exactly on those spheres
    CHECK_THROWS_AS(QPencil(D, Quat(1, 0, 2, 0)), SpectralPoint);
    CHECK_THROWS_AS(QPencil(D, Quat(3.0)), SpectralPoint);
    CHECK_NOTHROW(QPencil(D, Quat(1, 0, 2.1, 0)));
}

TEST_CASE("|T|^2 = T-bar T = T T-bar") {
    Eigen::MatrixXd M(3, 3);
    M << 2, 1, 0, 1, 3, 0.5, 0, 0.5, 1;
    const auto T = build_poly_family(M, {Polynomial{0, 1}, Polynomial{1, 0, 0.1}, Polynomial{0.2}, Polynomial{0, 0, 0, 0.01}});
    const QMat t = T.matrix(), tb = T.conjugate().matrix();
    const QMat a2 = QMat::real(T.abs2());
    CHECK((tb * t - a2).frobenius() < 1e-12);
    CHECK((t * tb - a2).frobenius() < 1e-12);
    CHECK(T.commutator_residual() < 1e-14);
}

TEST_CASE("polynomial families") {
    Eigen::MatrixXd M = Eigen::Vector2d(1, 2).asDiagonal();
    const auto T = build_poly_family(M, {Polynomial{0, 1}, Polynomial{0.0}, Polynomial{0.0}, Polynomial{0.0}});
    CHECK(T.component(0).isApprox(M));

    Eigen::MatrixXd S(2, 2);
    S << 0, 1, 1, 0;
    const auto U = build_poly_family(S, {Polynomial{0, 1}, Polynomial{1.0}, Polynomial{0.0}, Polynomial{0.0}});
    CHECK(U.component(1).isApprox(Eigen::MatrixXd::Identity(2, 2)));

    const Eigen::MatrixXd D = Eigen::Vector2d(1, 4).asDiagonal();
    const auto V = build_poly_family(D, {Polynomial{0, 1}, Polynomial{0, 1}, Polynomial{0.0}, Polynomial{0.0}});
    const auto rep = s_spectrum(V);
    REQUIRE(rep.spheres.size() == 2);
    CHECK(rep.spheres[0].center == doctest::Approx(1));
    CHECK(rep.spheres[0].radius == doctest::Approx(1));
    CHECK(rep.spheres[1].center == doctest::Approx(4));
    CHECK(rep.spheres[1].radius == doctest::Approx(4));

    Eigen::MatrixXd N(2, 2);
    N << 0, 1, 0, 0;
    CHECK_THROWS_AS(build_poly_family(N, {Polynomial{0, 1}, Polynomial{0.0}, Polynomial{0.0}, Polynomial{0.0}}),
                    NonSymmetric);
}

TEST_CASE("non-commuting components are rejected") {
    Eigen::MatrixXd a(2, 2), b(2, 2);
    a << 0, 1, 0, 0;
    b << 0, 0, 1, 0;
    CHECK_THROWS_AS(CommutingOperator::from_components({a, b, Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)}),
                    NonCommuting);
    const auto T = CommutingOperator::from_components(
        {a, Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)});
    CHECK_THROWS_AS(s_spectrum(T), Unsupported);
}

TEST_CASE("pencil solves") {
    const auto E = build_diagonal({Quat::e1()});
    CHECK(near(pencil_inverse(E, Quat(2.0))(0, 0), Quat(0.2)));
    CHECK_THROWS_AS(pencil_inverse(E, Quat::e1()), SpectralPoint);

    const auto T = build_diagonal({Quat(2.0)});
    CHECK(near(pencil_inverse(T, Quat(1, 1, 0, 0))(0, 0), Quat(0, 0.5, 0, 0)));

    // quaternionic right-hand side, s outside C_{e1}
    const Quat s(0.3, 0.2, -1.1, 0.4);
    const auto D = build_diagonal({Quat(1, 2, 0, 0), Quat(3, 0, 1, 0)});
    QMat rhs(2, 1);
    rhs.set(0, 0, Quat(1, 2, 3, 4));
    rhs.set(1, 0, Quat(-1, 0.5, 0, 2));
    const QMat x = pencil_solve(D, s, rhs);
    CHECK((pencil_matrix(D, s) * x - rhs).frobenius() < 1e-12);
}

TEST_CASE("S-resolvents") {
    const auto E = build_diagonal({Quat::e1()});
    CHECK(near(s_resolvent(E, Quat(2.0), Side::left)(0, 0), Quat(0.4, 0.2, 0, 0)));

    const auto T = build_diagonal({Quat(2.0)});
    CHECK(near(s_resolvent(T, Quat(3.0), Side::left)(0, 0), Quat(1.0)));
    CHECK(near(s_resolvent(T, Quat(3.0), Side::right)(0, 0), Quat(1.0)));

    const auto A = build_diagonal({Quat(1, 1, 0, 0)});
    const Quat s(2, 1, 0, 0);
    const Quat kernel = cauchy_kernel_left(s, Quat(1, 1, 0, 0));
    CHECK(near(s_resolvent(A, s, Side::left)(0, 0), kernel));
    CHECK(near(s_resolvent(A, s, Side::right)(0, 0), kernel));
    CHECK(near(cauchy_kernel_right(s, Quat(1, 1, 0, 0)), kernel));
}

TEST_CASE("left and right S-resolvents differ off the aligned slice") {
    const auto A = build_diagonal({Quat(1, 1, 0, 0)});
    const Quat s(2, 0, 1, 0);
    const QMat l = s_resolvent(A, s, Side::left), r = s_resolvent(A, s, Side::right);
    CHECK((l - r).frobenius() > 1e-3);
}

TEST_CASE("pencil of T-bar is the pencil of T") {
    const auto D = build_diagonal({Quat(1, 2, 0, 0), Quat(3, 0, 1, 0.5)});
    const Quat s(0.3, 0.2, -1.1, 0.4);
    CHECK((pencil_inverse(D, s) - pencil_inverse(D.conjugate(), s)).max_abs() == 0.0);
}

TEST_CASE("sector certificates") {
    const auto T = build_diagonal({Quat(2.0)});
    const auto c = sector_certificate(T, Sector<double>(std::numbers::pi / 2));
    CHECK(std::isfinite(c.C_theta));
    CHECK(std::isfinite(c.C_theta_Q));
    CHECK(c.C_theta_Q > 0);
    // |s|^2 |s^2 - 4 s + 4|^{-1} = |s|^2 / |s - 2|^2 on |Arg s| = pi/2 stays below 1
    CHECK(c.C_theta_Q <= 2.0 * kCertificateSafety / 2.0 + 1e-12);

    CHECK_THROWS_AS(sector_certificate(build_diagonal({Quat(-1.0)}), Sector<double>(std::numbers::pi / 2)),
                    NotSectorial);
    CHECK_THROWS_AS(sector_certificate(build_diagonal({Quat::e1()}), Sector<double>(std::numbers::pi / 4)),
                    NotSectorial);
}

TEST_CASE("ray profile stays bounded under radius extension") {
    const auto D = build_diagonal({Quat(1, 0.5, 0, 0), Quat(3, 0, 0.2, 0)});
    const auto prof = ray_profile(D, 2.0, Unit::e1(), 1e-4, 1e4, 10);
    double inner = 0, full = 0;
    for (const auto& r : prof) {
        full = std::max(full, r.q_scaled);
        if (r.radius >= 1e-3 * 0.999 && r.radius <= 1e3 * 1.001) inner = std::max(inner, r.q_scaled);
    }
    CHECK(full / inner < 1.01);
}
