#pragma once

/**
 * @file quaternion.hpp
 * @brief Quaternion scalars, imaginary units, sectors and spheres.
 *
 * A quaternion is s = s0 + s1 e1 + s2 e2 + s3 e3 with
 *   e1 e2 = -e2 e1 = e3,  e2 e3 = -e3 e2 = e1,  e3 e1 = -e1 e3 = e2.
 *
 * Every nonreal quaternion lies in exactly one complex plane
 * C_J = { u + J v } for a unit J with J^2 = -1; decompose() returns
 * that (u, v, J) with v >= 0.
 */

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>

#include "hqcalc/errors.hpp"

namespace hqcalc {

template <typename Scalar = double>
struct Quaternion {
    Scalar s0{0}, s1{0}, s2{0}, s3{0};

    constexpr Quaternion() = default;
    constexpr Quaternion(Scalar a) : s0{a} {} // NOLINT: reals embed implicitly
    constexpr Quaternion(Scalar a, Scalar b, Scalar c, Scalar d)
        : s0{a}, s1{b}, s2{c}, s3{d} {}

    static constexpr Quaternion e1() { return {0, 1, 0, 0}; }
    static constexpr Quaternion e2() { return {0, 0, 1, 0}; }
    static constexpr Quaternion e3() { return {0, 0, 0, 1}; }

    constexpr Scalar operator[](int i) const {
        return i == 0 ? s0 : i == 1 ? s1 : i == 2 ? s2 : s3;
    }
    constexpr Scalar& operator[](int i) {
        return i == 0 ? s0 : i == 1 ? s1 : i == 2 ? s2 : s3;
    }

    constexpr Scalar real() const { return s0; }
    constexpr Quaternion imag() const { return {0, s1, s2, s3}; }
    constexpr Quaternion conj() const { return {s0, -s1, -s2, -s3}; }
    constexpr Scalar norm2() const { return s0 * s0 + s1 * s1 + s2 * s2 + s3 * s3; }
    Scalar norm() const { return std::hypot(std::hypot(s0, s1), std::hypot(s2, s3)); }
    Scalar imag_norm() const { return std::hypot(std::hypot(s1, s2), s3); }
    bool is_finite() const {
        return std::isfinite(s0) && std::isfinite(s1) && std::isfinite(s2) && std::isfinite(s3);
    }

    constexpr Quaternion operator-() const { return {-s0, -s1, -s2, -s3}; }
    constexpr Quaternion& operator+=(const Quaternion& o) {
        s0 += o.s0; s1 += o.s1; s2 += o.s2; s3 += o.s3;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        s0 -= o.s0; s1 -= o.s1; s2 -= o.s2; s3 -= o.s3;
        return *this;
    }
    constexpr Quaternion& operator*=(Scalar a) {
        s0 *= a; s1 *= a; s2 *= a; s3 *= a;
        return *this;
    }

    constexpr bool operator==(const Quaternion&) const = default;
};

template <typename S>
constexpr Quaternion<S> operator+(Quaternion<S> a, const Quaternion<S>& b) { return a += b; }
template <typename S>
constexpr Quaternion<S> operator-(Quaternion<S> a, const Quaternion<S>& b) { return a -= b; }
template <typename S>
constexpr Quaternion<S> operator*(Quaternion<S> a, S k) { return a *= k; }
template <typename S>
constexpr Quaternion<S> operator*(S k, Quaternion<S> a) { return a *= k; }
template <typename S>
constexpr Quaternion<S> operator/(Quaternion<S> a, S k) { return a *= S(1) / k; }

/// Hamilton product.
template <typename S>
constexpr Quaternion<S> qmul(const Quaternion<S>& a, const Quaternion<S>& b) {
    return {a.s0 * b.s0 - a.s1 * b.s1 - a.s2 * b.s2 - a.s3 * b.s3,
            a.s0 * b.s1 + a.s1 * b.s0 + a.s2 * b.s3 - a.s3 * b.s2,
            a.s0 * b.s2 - a.s1 * b.s3 + a.s2 * b.s0 + a.s3 * b.s1,
            a.s0 * b.s3 + a.s1 * b.s2 - a.s2 * b.s1 + a.s3 * b.s0};
}

template <typename S>
constexpr Quaternion<S> operator*(const Quaternion<S>& a, const Quaternion<S>& b) {
    return qmul(a, b);
}

/// Below this modulus qinv refuses to divide.
inline constexpr double kSingularModulus = 1e-300;
/// Below this modulus an inverse is flagged as ill-conditioned.
inline constexpr double kIllConditionedModulus = 1e-14;

template <typename S>
Quaternion<S> qinv(const Quaternion<S>& a) {
    const S n = a.norm();
    if (!(n >= S(kSingularModulus)))
        throw ZeroDivision("quaternion of modulus below 1e-300 has no usable inverse");
    // scale first so that |a|^2 cannot underflow
    const Quaternion<S> c = a.conj() / n;
    return c / n;
}

template <typename S>
bool inverse_ill_conditioned(const Quaternion<S>& a) {
    return a.norm() < S(kIllConditionedModulus);
}

template <typename S>
std::ostream& operator<<(std::ostream& os, const Quaternion<S>& q) {
    return os << '(' << q.s0 << ", " << q.s1 << ", " << q.s2 << ", " << q.s3 << ')';
}

/// A unit of the sphere of purely imaginary quaternions.
template <typename Scalar = double>
class ImaginaryUnit {
public:
    constexpr ImaginaryUnit() = default; // e1

    /// Normalises (j1, j2, j3). Throws DomainError for the zero vector.
    static ImaginaryUnit from(Scalar j1, Scalar j2, Scalar j3) {
        const Scalar n = std::hypot(std::hypot(j1, j2), j3);
        if (!(n > 0) || !std::isfinite(n))
            throw DomainError("imaginary unit needs a finite nonzero direction");
        ImaginaryUnit u;
        u.j_ = {j1 / n, j2 / n, j3 / n};
        return u;
    }
    static ImaginaryUnit from(const Quaternion<Scalar>& q) { return from(q.s1, q.s2, q.s3); }

    static constexpr ImaginaryUnit e1() { return ImaginaryUnit{}; }
    static ImaginaryUnit e2() { return from(0, 1, 0); }
    static ImaginaryUnit e3() { return from(0, 0, 1); }

    constexpr Scalar operator[](int i) const { return j_[static_cast<std::size_t>(i)]; }
    constexpr Quaternion<Scalar> q() const { return {0, j_[0], j_[1], j_[2]}; }
    constexpr ImaginaryUnit operator-() const {
        ImaginaryUnit u;
        u.j_ = {-j_[0], -j_[1], -j_[2]};
        return u;
    }

    /// u + J v.
    constexpr Quaternion<Scalar> point(Scalar u, Scalar v) const {
        return {u, v * j_[0], v * j_[1], v * j_[2]};
    }
    constexpr Quaternion<Scalar> point(std::complex<Scalar> z) const {
        return point(z.real(), z.imag());
    }

    /// A unit K orthogonal to J; (1, J, K, JK) is then an orthonormal basis.
    ImaginaryUnit orthogonal() const {
        // cross with the coordinate axis least aligned with J
        const Scalar a0 = std::abs(j_[0]), a1 = std::abs(j_[1]), a2 = std::abs(j_[2]);
        std::array<Scalar, 3> axis{0, 0, 0};
        if (a0 <= a1 && a0 <= a2) axis[0] = 1;
        else if (a1 <= a2) axis[1] = 1;
        else axis[2] = 1;
        return from(j_[1] * axis[2] - j_[2] * axis[1], j_[2] * axis[0] - j_[0] * axis[2],
                    j_[0] * axis[1] - j_[1] * axis[0]);
    }

    constexpr bool operator==(const ImaginaryUnit&) const = default;

private:
    std::array<Scalar, 3> j_{1, 0, 0};
};

/// Splits q into its coordinates with respect to the plane C_J:
/// q = z1 + z2 K with z1, z2 in C_J and K = J.orthogonal().
template <typename S>
std::pair<std::complex<S>, std::complex<S>> split_plane(const Quaternion<S>& q,
                                                        const ImaginaryUnit<S>& J) {
    const Quaternion<S> K = J.orthogonal().q();
    const Quaternion<S> L = qmul(J.q(), K);
    auto dot = [&](const Quaternion<S>& a) {
        return q.s0 * a.s0 + q.s1 * a.s1 + q.s2 * a.s2 + q.s3 * a.s3;
    };
    // q = a + bJ + cK + dJK = (a + bJ) + (c + dJ) K
    return {{q.s0, dot(J.q())}, {dot(K), dot(L)}};
}

template <typename S>
Quaternion<S> join_plane(std::complex<S> z1, std::complex<S> z2, const ImaginaryUnit<S>& J) {
    const Quaternion<S> K = J.orthogonal().q();
    return J.point(z1) + qmul(J.point(z2), K);
}

template <typename S>
struct SliceCoordinates {
    S u{0};
    S v{0};
    ImaginaryUnit<S> J{};
};

/// s = u + J v with v = |Im s| >= 0; real s gets J = e1.
template <typename S>
SliceCoordinates<S> decompose(const Quaternion<S>& s) {
    const S v = s.imag_norm();
    if (v == S(0)) return {s.s0, S(0), ImaginaryUnit<S>::e1()};
    return {s.s0, v, ImaginaryUnit<S>::from(s.s1 / v, s.s2 / v, s.s3 / v)};
}

/// Principal argument in [0, pi] of the point (u, v), v >= 0.
template <typename S>
S arg(const Quaternion<S>& s) {
    const auto c = decompose(s);
    return std::atan2(c.v, c.u);
}

/// Open sector S_omega = { s != 0 : |Arg s| < omega }.
template <typename Scalar = double>
class Sector {
public:
    explicit Sector(Scalar omega) : omega_{omega} {
        if (!(omega > 0 && omega < std::numbers::pi_v<Scalar>))
            throw DomainError("sector half-angle must lie in (0, pi)");
    }
    Scalar omega() const { return omega_; }

    bool contains(const Quaternion<Scalar>& s) const {
        if (s.norm() == Scalar(0)) throw DomainError("0 is not a point of any sector");
        return arg(s) < omega_;
    }

private:
    Scalar omega_;
};

template <typename S>
bool in_sector(const Quaternion<S>& s, const Sector<S>& sec) {
    return sec.contains(s);
}

/// The 2-sphere [s] = Re(s) + S |Im(s)|.
template <typename Scalar = double>
struct Sphere {
    Scalar center{0};
    Scalar radius{0};

    static Sphere of(const Quaternion<Scalar>& s) { return {s.s0, s.imag_norm()}; }

    bool contains(const Quaternion<Scalar>& s, Scalar tol = 0) const {
        return std::abs(s.s0 - center) <= tol && std::abs(s.imag_norm() - radius) <= tol;
    }
    /// Largest |Arg| over the sphere; 0 for the origin.
    Scalar max_arg() const {
        if (center == 0 && radius == 0) return 0;
        return std::atan2(radius, center);
    }
    Scalar distance(const Quaternion<Scalar>& s) const {
        return std::hypot(s.s0 - center, s.imag_norm() - radius);
    }

    bool operator==(const Sphere&) const = default;
};

template <typename S>
bool same_sphere(const Quaternion<S>& a, const Quaternion<S>& b, S tol = 0) {
    return Sphere<S>::of(a).contains(b, tol);
}

using Quat = Quaternion<double>;
using Unit = ImaginaryUnit<double>;

} // namespace hqcalc
