#include "hqcalc/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace hqcalc {

namespace {

Eigen::MatrixXd eval_matrix_poly(const Polynomial& p, const Eigen::MatrixXd& M) {
    const Eigen::Index n = M.rows();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * M;
        acc.diagonal().array() += *it;
    }
    return acc;
}

double largest_singular(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

} // namespace

CommutingOperator::CommutingOperator(std::array<Eigen::MatrixXd, 4> t, Construction c,
                                     std::vector<Quat> eig)
    : t_(std::move(t)), construction_(c), eigen_(std::move(eig)) {
    abs2_ = t_[0] * t_[0] + t_[1] * t_[1] + t_[2] * t_[2] + t_[3] * t_[3];
}

CommutingOperator CommutingOperator::from_components(std::array<Eigen::MatrixXd, 4> t, double tol) {
    const Eigen::Index n = t[0].rows();
    if (n == 0) throw DomainError("operator dimension must be positive");
    for (const auto& c : t) {
        if (c.rows() != n || c.cols() != n)
            throw DomainError("components must all be square of the same size");
        if (!c.allFinite()) throw NonFinite("operator component has non-finite entries");
    }
    CommutingOperator op(std::move(t), Construction::general, {});
    if (op.commutator_residual() > tol)
        throw NonCommuting("components do not commute within tolerance");
    return op;
}

double CommutingOperator::commutator_residual() const {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const double scale = t_[i].norm() * t_[j].norm();
            if (scale == 0.0) continue;
            const double r = (t_[i] * t_[j] - t_[j] * t_[i]).norm() / scale;
            worst = std::max(worst, r);
        }
    return worst;
}

CommutingOperator CommutingOperator::conjugate() const {
    std::vector<Quat> eig;
    eig.reserve(eigen_.size());
    for (const auto& q : eigen_) eig.push_back(q.conj());
    CommutingOperator out({t_[0], -t_[1], -t_[2], -t_[3]}, construction_, std::move(eig));
    // |T-bar|^2 is |T|^2 bit for bit; reuse it so both pencils coincide exactly.
    out.abs2_ = abs2_;
    return out;
}

CommutingOperator build_diagonal(std::span<const Quat> entries) {
    if (entries.empty()) throw DomainError("diagonal operator needs at least one entry");
    const auto n = static_cast<Eigen::Index>(entries.size());
    std::array<Eigen::MatrixXd, 4> t;
    for (int i = 0; i < 4; ++i) {
        t[i] = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index k = 0; k < n; ++k) t[i](k, k) = entries[static_cast<std::size_t>(k)][i];
    }
    for (const auto& q : entries)
        if (!q.is_finite()) throw NonFinite("diagonal entry is not finite");
    return {std::move(t), CommutingOperator::Construction::diagonal,
            std::vector<Quat>(entries.begin(), entries.end())};
}

CommutingOperator build_poly_family(const Eigen::MatrixXd& M, const std::array<Polynomial, 4>& p) {
    if (M.rows() == 0 || M.rows() != M.cols()) throw DomainError("M must be square and nonempty");
    if (!M.allFinite()) throw NonFinite("M has non-finite entries");
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff()))
        throw NonSymmetric("M must be symmetric within 1e-12");
    const Eigen::MatrixXd Ms = 0.5 * (M + M.transpose());
    std::array<Eigen::MatrixXd, 4> t;
    for (int i = 0; i < 4; ++i) t[i] = eval_matrix_poly(p[i], Ms);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ms, Eigen::EigenvaluesOnly);
    std::vector<Quat> eig;
    for (Eigen::Index k = 0; k < Ms.rows(); ++k) {
        const double lam = es.eigenvalues()(k);
        eig.emplace_back(p[0](lam), p[1](lam), p[2](lam), p[3](lam));
    }
    return {std::move(t), CommutingOperator::Construction::poly_family, std::move(eig)};
}

QPencil::QPencil(const CommutingOperator& T, const Quat& s) {
    const auto c = decompose(s);
    J_ = c.J;
    const std::complex<double> z(c.u, c.v);
    const Eigen::Index n = T.dim();
    q_ = (-2.0 * z) * T.component(0).cast<std::complex<double>>();
    q_ += T.abs2().cast<std::complex<double>>();
    q_.diagonal().array() += z * z;
    lu_.compute(q_);
    if (n == 0 || !(lu_rcond(lu_) >= kPencilSingular))
        throw SpectralPoint("Q_{c,s}(T) is numerically singular; s lies on or near the S-spectrum");
}

QMat QPencil::solve(const QMat& rhs) const {
    const Unit K = J_.orthogonal();
    const Quat L = qmul(J_.q(), K.q());
    auto along = [&](const Quat& dir) {
        Eigen::MatrixXd out = dir.s1 * rhs.component(1);
        out += dir.s2 * rhs.component(2);
        out += dir.s3 * rhs.component(3);
        return out;
    };
    Eigen::MatrixXcd z1(rhs.rows(), rhs.cols()), z2(rhs.rows(), rhs.cols());
    z1.real() = rhs.component(0);
    z1.imag() = along(J_.q());
    z2.real() = along(K.q());
    z2.imag() = along(L);
    const Eigen::MatrixXcd w1 = lu_.solve(z1);
    const Eigen::MatrixXcd w2 = lu_.solve(z2);
    const Eigen::MatrixXd w1i = w1.imag(), w2r = w2.real(), w2i = w2.imag();
    QMat out;
    out.component(0) = w1.real();
    for (int i = 1; i < 4; ++i)
        out.component(i) = J_[i - 1] * w1i + K[i - 1] * w2r + L[i] * w2i;
    return out;
}

Eigen::MatrixXcd QPencil::complex_inverse() const { return lu_.inverse(); }

QMat QPencil::inverse() const { return QMat::from_plane(lu_.inverse(), J_); }

QMat pencil_solve(const CommutingOperator& T, const Quat& s, const QMat& rhs) {
    if (rhs.rows() != T.dim()) throw DomainError("right-hand side has the wrong number of rows");
    return QPencil(T, s).solve(rhs);
}

QMat pencil_inverse(const CommutingOperator& T, const Quat& s) { return QPencil(T, s).inverse(); }

QMat pencil_matrix(const CommutingOperator& T, const Quat& s) {
    const auto n = T.dim();
    QMat out = QMat::scalar(qmul(s, s), n);
    out -= QMat::real(T.component(0)) * (2.0 * s);
    out += QMat::real(T.abs2());
    return out;
}

QMat s_resolvent(const CommutingOperator& T, const Quat& s, Side side) {
    const QPencil pencil(T, s);
    const QMat shift = QMat::scalar(s, T.dim()) - T.conjugate().matrix();
    const QMat qinv = pencil.inverse();
    return side == Side::left ? shift * qinv : qinv * shift;
}

Quat pencil_scalar(const Quat& s, const Quat& q) {
    return qmul(s, s) - 2.0 * q.s0 * s + Quat(q.norm2());
}

Quat cauchy_kernel_left(const Quat& s, const Quat& q) {
    return qmul(s - q.conj(), qinv(pencil_scalar(s, q)));
}

Quat cauchy_kernel_right(const Quat& s, const Quat& q) {
    return qmul(qinv(pencil_scalar(s, q)), s - q.conj());
}

double sector_boundary_distance(const Sphere<double>& sp, double theta) {
    const double c = sp.center, r = sp.radius;
    const double t = c * std::cos(theta) + r * std::sin(theta);
    if (t <= 0) return std::hypot(c, r);
    return std::abs(r * std::cos(theta) - c * std::sin(theta));
}

SpectrumReport s_spectrum(const CommutingOperator& T, std::optional<Sector<double>> query) {
    if (T.construction() == CommutingOperator::Construction::general)
        throw Unsupported("S-spectrum needs an operator with an eigen-resolvable construction");
    SpectrumReport rep;
    constexpr double kMergeTol = 1e-12;
    for (const auto& q : T.eigen_quaternions()) {
        const auto sp = Sphere<double>::of(q);
        const bool dup = std::any_of(rep.spheres.begin(), rep.spheres.end(), [&](const auto& o) {
            return std::abs(o.center - sp.center) <= kMergeTol * std::max(1.0, std::abs(sp.center)) &&
                   std::abs(o.radius - sp.radius) <= kMergeTol * std::max(1.0, sp.radius);
        });
        if (!dup) rep.spheres.push_back(sp);
        rep.max_arg = std::max(rep.max_arg, sp.max_arg());
    }
    if (query) {
        double margin = std::numeric_limits<double>::infinity();
        for (const auto& sp : rep.spheres)
            margin = std::min(margin, sector_boundary_distance(sp, query->omega()));
        rep.rho_margin = margin;
        rep.inside = rep.max_arg < query->omega();
    }
    return rep;
}

std::vector<RaySample> ray_profile(const CommutingOperator& T, double theta, const Unit& J,
                                   double rmin, double rmax, int per_decade) {
    const double decades = std::log10(rmax / rmin);
    const int count = std::max(1, static_cast<int>(std::lround(decades * per_decade))) + 1;
    const CommutingOperator Tbar = T.conjugate();
    std::vector<RaySample> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double r = rmin * std::pow(10.0, decades * k / (count - 1));
        RaySample sample{r, 0.0, 0.0};
        for (double sign : {1.0, -1.0}) {
            const Quat s = J.point(r * std::cos(theta), sign * r * std::sin(theta));
            try {
                const QPencil pencil(T, s);
                sample.q_scaled = std::max(sample.q_scaled, r * r * largest_singular(pencil.complex_inverse()));
                const QMat qinv = pencil.inverse();
                const QMat sl = (QMat::scalar(s, T.dim()) - Tbar.matrix()) * qinv;
                const QMat slb = (QMat::scalar(s, T.dim()) - T.matrix()) * qinv;
                sample.s_scaled = std::max({sample.s_scaled, r * sl.op_norm(), r * slb.op_norm()});
            } catch (const SpectralPoint&) {
                sample.q_scaled = sample.s_scaled = std::numeric_limits<double>::infinity();
            }
        }
        out.push_back(sample);
    }
    return out;
}

SectorCertificate sector_certificate(const CommutingOperator& T, const Sector<double>& theta,
                                     const Unit& J) {
    if (T.construction() != CommutingOperator::Construction::general) {
        const auto rep = s_spectrum(T);
        if (!(rep.max_arg < theta.omega()))
            throw NotSectorial("S-spectrum reaches |Arg| >= theta");
    }
    SectorCertificate cert;
    for (const auto& sample : ray_profile(T, theta.omega(), J, 1e-6, 1e6, 8)) {
        if (!std::isfinite(sample.q_scaled) || !std::isfinite(sample.s_scaled))
            throw NotSectorial("resolvent is singular on the sector boundary");
        cert.C_theta = std::max(cert.C_theta, sample.s_scaled);
        cert.C_theta_Q = std::max(cert.C_theta_Q, sample.q_scaled);
    }
    cert.C_theta *= kCertificateSafety;
    cert.C_theta_Q *= kCertificateSafety;
    return cert;
}

} // namespace hqcalc
