#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "hqcalc/qmatrix.hpp"

using namespace hqcalc;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool near(const Quat& a, const Quat& b, double tol = 1e-14) { return (a - b).norm() <= tol; }

Quat rnd(std::mt19937_64& g) {
    std::normal_distribution<double> n;
    return {n(g), n(g), n(g), n(g)};
}

} // namespace

TEST_CASE("Hamilton table") {
    const Quat e1 = Quat::e1(), e2 = Quat::e2(), e3 = Quat::e3();
    CHECK(e1 * e2 == e3);
    CHECK(e2 * e3 == e1);
    CHECK(e3 * e1 == e2);
    CHECK(e2 * e1 == -1.0 * e3);
    CHECK(e1 * e1 == Quat(-1.0));
    CHECK(Quat(1, 1, 0, 0) * Quat(1, -1, 0, 0) == Quat(2.0));
    const Quat s(0.3, -1.2, 2.5, 0.7);
    CHECK(Quat(1.0) * s == s);
}

TEST_CASE("norm is multiplicative and |s|^2 = s conj(s)") {
    std::mt19937_64 g(1);
    for (int i = 0; i < 100; ++i) {
        const Quat a = rnd(g), b = rnd(g);
        CHECK(std::abs((a * b).norm() - a.norm() * b.norm()) <= 4 * kEps * a.norm() * b.norm());
        CHECK(near(a * a.conj(), Quat(a.norm2()), 4 * kEps * a.norm2()));
    }
}

TEST_CASE("qinv") {
    CHECK(near(qinv(Quat::e1()), -1.0 * Quat::e1()));
    CHECK(near(qinv(Quat(2.0)), Quat(0.5)));
    CHECK(near(qinv(Quat(1, 0, 1, 0)), Quat(0.5, 0, -0.5, 0)));
    std::mt19937_64 g(2);
    for (int i = 0; i < 50; ++i) {
        const Quat a = rnd(g);
        CHECK(near(a * qinv(a), Quat(1.0), 8 * kEps));
    }
    CHECK_THROWS_AS(qinv(Quat()), ZeroDivision);
}

TEST_CASE("decompose") {
    auto c = decompose(Quat(1, 0, 2, 0));
    CHECK(c.u == 1.0);
    CHECK(c.v == 2.0);
    CHECK(c.J == Unit::e2());

    c = decompose(Quat(3.0));
    CHECK(c.u == 3.0);
    CHECK(c.v == 0.0);
    CHECK(c.J == Unit::e1());

    c = decompose(Quat(0, 1, 0, 1));
    CHECK(c.v == doctest::Approx(std::sqrt(2.0)));
    CHECK(c.J[0] == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(c.J[2] == doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("imaginary units") {
    const Unit J = Unit::from(1, 2, 3);
    CHECK(std::abs(J[0] * J[0] + J[1] * J[1] + J[2] * J[2] - 1) < 1e-14);
    CHECK(near(J.q() * J.q(), Quat(-1.0), 1e-15));
    const Unit K = J.orthogonal();
    CHECK(std::abs(J[0] * K[0] + J[1] * K[1] + J[2] * K[2]) < 1e-15);
    CHECK_THROWS_AS(Unit::from(0, 0, 0), DomainError);

    std::mt19937_64 g(3);
    for (int i = 0; i < 20; ++i) {
        const Quat q = rnd(g);
        const auto [z1, z2] = split_plane(q, J);
        CHECK(near(join_plane(z1, z2, J), q, 1e-14 * (1 + q.norm())));
    }
}

TEST_CASE("sectors") {
    CHECK(in_sector(Quat(1, 1, 0, 0), Sector<double>(std::numbers::pi / 3)));
    CHECK_FALSE(in_sector(Quat(-1.0), Sector<double>(3.0)));
    CHECK(in_sector(Quat(5.0), Sector<double>(0.01)));
    CHECK_THROWS_AS(in_sector(Quat(), Sector<double>(1.0)), DomainError);
    CHECK_THROWS_AS(Sector<double>(0.0), DomainError);
    CHECK_THROWS_AS(Sector<double>(std::numbers::pi), DomainError);
    // axial symmetry
    const Sector<double> sec(0.9);
    CHECK(in_sector(Quat(1, 0.5, 0, 0), sec) == in_sector(Quat(1, 0, 0.3, 0.4), sec));
}

TEST_CASE("spheres") {
    CHECK(same_sphere(Quat(1, 2, 0, 0), Quat(1, 0, 0, 2)));
    CHECK_FALSE(same_sphere(Quat(1, 2, 0, 0), Quat(1, 0, 0, 2.5)));
    CHECK(Sphere<double>::of(Quat(1, 0, 3, 4)).radius == 5.0);
}

TEST_CASE("quaternionic matrices") {
    std::mt19937_64 g(4);
    const int n = 3;
    QMat A(n, n), B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A.set(i, j, rnd(g));
            B.set(i, j, rnd(g));
        }
    SUBCASE("product follows entrywise Hamilton products") {
        const QMat C = A * B;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Quat s;
                for (int k = 0; k < n; ++k) s += A(i, k) * B(k, j);
                CHECK(near(C(i, j), s, 1e-13));
            }
    }
    SUBCASE("adjoint embedding is multiplicative") {
        const auto lhs = (A * B).adjoint_embedding();
        const Eigen::MatrixXcd rhs = A.adjoint_embedding() * B.adjoint_embedding();
        CHECK((lhs - rhs).norm() < 1e-13);
        CHECK((QMat::from_adjoint_embedding(A.adjoint_embedding()) - A).frobenius() == 0.0);
    }
    SUBCASE("left and right solves") {
        const QMat X = solve(A, B);
        CHECK((A * X - B).frobenius() < 1e-12 * B.frobenius() * A.op_norm() / A.min_singular());
        const QMat Y = solve_right(B, A);
        CHECK((Y * A - B).frobenius() < 1e-12 * B.frobenius() * A.op_norm() / A.min_singular());
        CHECK_THROWS_AS(solve(QMat::Zero(n, n), B), ZeroDivision);
    }
    SUBCASE("scalar actions") {
        const Quat q(0.5, 1, -2, 0.25);
        const QMat L = q * A, R = A * q;
        CHECK(near(L(1, 2), q * A(1, 2), 1e-14));
        CHECK(near(R(1, 2), A(1, 2) * q, 1e-14));
    }
}
