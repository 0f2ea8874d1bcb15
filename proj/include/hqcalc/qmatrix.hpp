#pragma once

/**
 * @file qmatrix.hpp
 * @brief Dense quaternionic matrices stored as four real Eigen components.
 *
 * A = A0 + e1 A1 + e2 A2 + e3 A3 with real Ai. Products follow the Hamilton
 * table entrywise, so (AB)_ij = sum_k A_ik B_kj with quaternion products in
 * that order.
 *
 * Linear solves and norms go through the complex adjoint
 *   chi(A) = [ Z1  Z2 ; -conj(Z2)  conj(Z1) ],  A = Z1 + Z2 e2,
 * with Z1 = A0 + i A1, Z2 = A2 + i A3. chi is a multiplicative
 * homomorphism and the singular values of chi(A) are those of A, each
 * repeated twice.
 */

#include <algorithm>
#include <array>
#include <complex>

#include <Eigen/Dense>

#include "hqcalc/errors.hpp"
#include "hqcalc/quaternion.hpp"

namespace hqcalc {

template <typename Scalar = double>
class QMatrix {
public:
    using Real = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Complex = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

    QMatrix() = default;
    QMatrix(Eigen::Index rows, Eigen::Index cols) {
        for (auto& c : c_) c = Real::Zero(rows, cols);
    }
    QMatrix(Real a0, Real a1, Real a2, Real a3)
        : c_{std::move(a0), std::move(a1), std::move(a2), std::move(a3)} {}

    static QMatrix Zero(Eigen::Index rows, Eigen::Index cols) { return QMatrix(rows, cols); }
    static QMatrix Identity(Eigen::Index n) {
        QMatrix m(n, n);
        m.c_[0].setIdentity();
        return m;
    }
    static QMatrix real(const Real& a) {
        QMatrix m(a.rows(), a.cols());
        m.c_[0] = a;
        return m;
    }
    /// Constant quaternion times the identity.
    static QMatrix scalar(const Quaternion<Scalar>& q, Eigen::Index n) {
        QMatrix m(n, n);
        for (int i = 0; i < 4; ++i) m.c_[i].diagonal().setConstant(q[i]);
        return m;
    }
    /// Embeds a complex matrix into the slice C_J: Re + J Im.
    static QMatrix from_plane(const Complex& z, const ImaginaryUnit<Scalar>& J) {
        QMatrix m;
        m.c_[0] = z.real();
        const Real im = z.imag();
        for (int i = 1; i < 4; ++i) m.c_[i] = J[i - 1] * im;
        return m;
    }

    Eigen::Index rows() const { return c_[0].rows(); }
    Eigen::Index cols() const { return c_[0].cols(); }

    const Real& component(int i) const { return c_[static_cast<std::size_t>(i)]; }
    Real& component(int i) { return c_[static_cast<std::size_t>(i)]; }

    Quaternion<Scalar> operator()(Eigen::Index i, Eigen::Index j) const {
        return {c_[0](i, j), c_[1](i, j), c_[2](i, j), c_[3](i, j)};
    }
    void set(Eigen::Index i, Eigen::Index j, const Quaternion<Scalar>& q) {
        for (int k = 0; k < 4; ++k) c_[k](i, j) = q[k];
    }

    /// Componentwise conjugate A0 - e1 A1 - e2 A2 - e3 A3 (no transpose).
    QMatrix conj() const { return {c_[0], -c_[1], -c_[2], -c_[3]}; }

    QMatrix& operator+=(const QMatrix& o) {
        for (int i = 0; i < 4; ++i) c_[i] += o.c_[i];
        return *this;
    }
    QMatrix& operator-=(const QMatrix& o) {
        for (int i = 0; i < 4; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    QMatrix& operator*=(Scalar a) {
        for (auto& c : c_) c *= a;
        return *this;
    }
    QMatrix operator-() const { return {-c_[0], -c_[1], -c_[2], -c_[3]}; }

    Scalar frobenius() const {
        Scalar s = 0;
        for (const auto& c : c_) s += c.squaredNorm();
        return std::sqrt(s);
    }
    Scalar max_abs() const {
        Scalar m = 0;
        for (Eigen::Index i = 0; i < rows(); ++i)
            for (Eigen::Index j = 0; j < cols(); ++j) m = std::max(m, (*this)(i, j).norm());
        return m;
    }
    /// Frobenius norm of the components 1..3.
    Scalar imag_frobenius() const {
        return std::sqrt(c_[1].squaredNorm() + c_[2].squaredNorm() + c_[3].squaredNorm());
    }
    bool all_finite() const {
        for (const auto& c : c_)
            if (!c.allFinite()) return false;
        return true;
    }

    Complex adjoint_embedding() const {
        const Eigen::Index n = rows(), m = cols();
        Complex z1(n, m), z2(n, m);
        z1.real() = c_[0];
        z1.imag() = c_[1];
        z2.real() = c_[2];
        z2.imag() = c_[3];
        Complex out(2 * n, 2 * m);
        out.topLeftCorner(n, m) = z1;
        out.topRightCorner(n, m) = z2;
        out.bottomLeftCorner(n, m) = -z2.conjugate();
        out.bottomRightCorner(n, m) = z1.conjugate();
        return out;
    }
    static QMatrix from_adjoint_embedding(const Complex& chi) {
        const Eigen::Index n = chi.rows() / 2, m = chi.cols() / 2;
        const Complex z1 = chi.topLeftCorner(n, m);
        const Complex z2 = chi.topRightCorner(n, m);
        return {z1.real(), z1.imag(), z2.real(), z2.imag()};
    }

    /// Spectral norm (largest singular value).
    Scalar op_norm() const {
        if (rows() == 0 || cols() == 0) return 0;
        Eigen::JacobiSVD<Complex> svd(adjoint_embedding());
        return svd.singularValues()(0);
    }
    Scalar min_singular() const {
        if (rows() == 0 || cols() == 0) return 0;
        Eigen::JacobiSVD<Complex> svd(adjoint_embedding());
        return svd.singularValues()(svd.singularValues().size() - 1);
    }

private:
    std::array<Real, 4> c_;
};

template <typename S>
QMatrix<S> operator+(QMatrix<S> a, const QMatrix<S>& b) { return a += b; }
template <typename S>
QMatrix<S> operator-(QMatrix<S> a, const QMatrix<S>& b) { return a -= b; }
template <typename S>
QMatrix<S> operator*(QMatrix<S> a, S k) { return a *= k; }
template <typename S>
QMatrix<S> operator*(S k, QMatrix<S> a) { return a *= k; }

template <typename S>
QMatrix<S> operator*(const QMatrix<S>& a, const QMatrix<S>& b) {
    const auto& A = [&](int i) -> const auto& { return a.component(i); };
    const auto& B = [&](int i) -> const auto& { return b.component(i); };
    using R = typename QMatrix<S>::Real;
    R p[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) p[i][j].noalias() = A(i) * B(j);
    return {p[0][0] - p[1][1] - p[2][2] - p[3][3], p[0][1] + p[1][0] + p[2][3] - p[3][2],
            p[0][2] - p[1][3] + p[2][0] + p[3][1], p[0][3] + p[1][2] - p[2][1] + p[3][0]};
}

/// A * q (quaternion scalar on the right of every entry).
template <typename S>
QMatrix<S> operator*(const QMatrix<S>& a, const Quaternion<S>& q) {
    const auto& A0 = a.component(0);
    const auto& A1 = a.component(1);
    const auto& A2 = a.component(2);
    const auto& A3 = a.component(3);
    return {q.s0 * A0 - q.s1 * A1 - q.s2 * A2 - q.s3 * A3,
            q.s1 * A0 + q.s0 * A1 + q.s3 * A2 - q.s2 * A3,
            q.s2 * A0 - q.s3 * A1 + q.s0 * A2 + q.s1 * A3,
            q.s3 * A0 + q.s2 * A1 - q.s1 * A2 + q.s0 * A3};
}

/// q * A.
template <typename S>
QMatrix<S> operator*(const Quaternion<S>& q, const QMatrix<S>& a) {
    const auto& A0 = a.component(0);
    const auto& A1 = a.component(1);
    const auto& A2 = a.component(2);
    const auto& A3 = a.component(3);
    return {q.s0 * A0 - q.s1 * A1 - q.s2 * A2 - q.s3 * A3,
            q.s0 * A1 + q.s1 * A0 + q.s2 * A3 - q.s3 * A2,
            q.s0 * A2 - q.s1 * A3 + q.s2 * A0 + q.s3 * A1,
            q.s0 * A3 + q.s1 * A2 - q.s2 * A1 + q.s3 * A0};
}

/// LU reciprocal condition estimate, capped by the pivot ratio (Eigen's
/// estimator reports 1 for some exactly singular inputs).
template <typename LU>
double lu_rcond(const LU& lu) {
    const auto piv = lu.matrixLU().diagonal().cwiseAbs();
    if (piv.size() == 0) return 0;
    const double ratio = piv.maxCoeff() > 0 ? double(piv.minCoeff() / piv.maxCoeff()) : 0.0;
    return std::min(double(lu.rcond()), ratio);
}

/// Solves A X = B. Throws ZeroDivision when A is numerically singular
/// (reciprocal condition estimate below `rcond_min`).
template <typename S>
QMatrix<S> solve(const QMatrix<S>& a, const QMatrix<S>& b, S rcond_min = S(1e-14)) {
    Eigen::PartialPivLU<typename QMatrix<S>::Complex> lu(a.adjoint_embedding());
    if (!(lu_rcond(lu) >= rcond_min)) throw ZeroDivision("quaternionic matrix is numerically singular");
    return QMatrix<S>::from_adjoint_embedding(lu.solve(b.adjoint_embedding()));
}

/// Solves X A = B, i.e. returns B A^{-1}.
template <typename S>
QMatrix<S> solve_right(const QMatrix<S>& b, const QMatrix<S>& a, S rcond_min = S(1e-14)) {
    using C = typename QMatrix<S>::Complex;
    const C at = a.adjoint_embedding().transpose();
    Eigen::PartialPivLU<C> lu(at);
    if (!(lu_rcond(lu) >= rcond_min)) throw ZeroDivision("quaternionic matrix is numerically singular");
    const C y = lu.solve(C(b.adjoint_embedding().transpose()));
    return QMatrix<S>::from_adjoint_embedding(y.transpose());
}

/// Largest absolute residual of the pairwise commutators A B - B A.
template <typename S>
S commutator_norm(const QMatrix<S>& a, const QMatrix<S>& b) {
    return (a * b - b * a).frobenius();
}

using QMat = QMatrix<double>;

} // namespace hqcalc
