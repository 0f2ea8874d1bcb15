#pragma once

/**
 * @file operator.hpp
 * @brief Finite operators with commuting components and their pencils.
 *
 * T = T0 + e1 T1 + e2 T2 + e3 T3 with pairwise commuting real n x n
 * components. All operators here are bounded and everywhere defined, so
 * the domain conditions of the unbounded theory ("on dom(T^2)" and the
 * like) hold trivially.
 *
 * For s = u + J v the pencil
 *     Q_{c,s}(T) = s^2 I - 2 T0 s + |T|^2,   |T|^2 = T0^2 + T1^2 + T2^2 + T3^2
 * has real matrix coefficients, so it lives in the complex plane C_J and is
 * factorised as an ordinary complex n x n matrix.
 */

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hqcalc/polynomial.hpp"
#include "hqcalc/qmatrix.hpp"
#include "hqcalc/quaternion.hpp"

namespace hqcalc {

enum class Side { left, right };

/// Pencil is declared singular when its reciprocal condition estimate
/// falls below this value.
inline constexpr double kPencilSingular = 1e-12;

class CommutingOperator {
public:
    enum class Construction { diagonal, poly_family, general };

    /// Generic constructor; verifies the commutation residual
    /// ||Ti Tj - Tj Ti||_F <= tol ||Ti||_F ||Tj||_F and throws NonCommuting.
    static CommutingOperator from_components(std::array<Eigen::MatrixXd, 4> t,
                                             double tol = 1e-10);

    Eigen::Index dim() const { return t_[0].rows(); }
    const Eigen::MatrixXd& component(int i) const { return t_[static_cast<std::size_t>(i)]; }
    const Eigen::MatrixXd& abs2() const { return abs2_; }
    /// T as a quaternionic matrix.
    QMat matrix() const { return {t_[0], t_[1], t_[2], t_[3]}; }

    /// T-bar = T0 - e1 T1 - e2 T2 - e3 T3; keeps the construction data.
    CommutingOperator conjugate() const;

    Construction construction() const { return construction_; }
    /// Quaternion eigenvalues of the generating data (empty for `general`).
    const std::vector<Quat>& eigen_quaternions() const { return eigen_; }

    /// max over i<j of ||Ti Tj - Tj Ti||_F / (||Ti||_F ||Tj||_F).
    double commutator_residual() const;

private:
    friend CommutingOperator build_diagonal(std::span<const Quat>);
    friend CommutingOperator build_poly_family(const Eigen::MatrixXd&,
                                               const std::array<Polynomial, 4>&);
    CommutingOperator(std::array<Eigen::MatrixXd, 4> t, Construction c, std::vector<Quat> eig);

    std::array<Eigen::MatrixXd, 4> t_;
    Eigen::MatrixXd abs2_;
    Construction construction_{Construction::general};
    std::vector<Quat> eigen_;
};

/// Ti = diag of the i-th components of the entries.
CommutingOperator build_diagonal(std::span<const Quat> entries);
inline CommutingOperator build_diagonal(std::initializer_list<Quat> entries) {
    return build_diagonal(std::span<const Quat>(entries.begin(), entries.size()));
}

/// Ti = p_i(M) for a real symmetric M. Throws NonSymmetric.
CommutingOperator build_poly_family(const Eigen::MatrixXd& M, const std::array<Polynomial, 4>& p);

/// Factorised Q_{c,s}(T) for one point s.
class QPencil {
public:
    /// Throws SpectralPoint when the pencil is numerically singular.
    QPencil(const CommutingOperator& T, const Quat& s);

    const Unit& unit() const { return J_; }
    /// The pencil over C_J, with i standing for J.
    const Eigen::MatrixXcd& matrix() const { return q_; }
    double rcond() const { return lu_rcond(lu_); }

    /// Q^{-1} rhs for a quaternionic rhs, via rhs = Z1 + Z2 K, Z1, Z2 over C_J.
    QMat solve(const QMat& rhs) const;
    /// Q^{-1} as a quaternionic matrix (entries in C_J).
    QMat inverse() const;
    /// Q^{-1} over C_J.
    Eigen::MatrixXcd complex_inverse() const;

private:
    Unit J_;
    Eigen::MatrixXcd q_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

QMat pencil_solve(const CommutingOperator& T, const Quat& s, const QMat& rhs);
QMat pencil_inverse(const CommutingOperator& T, const Quat& s);
/// Q_{c,s}(T) itself as a quaternionic matrix.
QMat pencil_matrix(const CommutingOperator& T, const Quat& s);

/// left:  S_L^{-1}(s,T) = (s I - T-bar) Q_{c,s}^{-1}(T)
/// right: S_R^{-1}(s,T) = Q_{c,s}^{-1}(T) (s I - T-bar)
QMat s_resolvent(const CommutingOperator& T, const Quat& s, Side side);

/// Scalar Cauchy kernels, s and q arbitrary quaternions.
Quat cauchy_kernel_left(const Quat& s, const Quat& q);  // (s - q-bar)(s^2 - 2 q0 s + |q|^2)^{-1}
Quat cauchy_kernel_right(const Quat& s, const Quat& q); // (s^2 - 2 q0 s + |q|^2)^{-1}(s - q-bar)
Quat pencil_scalar(const Quat& s, const Quat& q);        // s^2 - 2 q0 s + |q|^2

struct SpectrumReport {
    std::vector<Sphere<double>> spheres;
    /// Largest |Arg| over the spectrum.
    double max_arg{0};
    /// Distance from the boundary of the query sector to the spectrum
    /// (only set when a sector was supplied).
    std::optional<double> rho_margin;
    /// True when the spectrum lies in the open query sector (or is {0}).
    std::optional<bool> inside;
};

/// Spheres of the construction eigenvalues. Throws Unsupported for
/// operators built from raw components.
SpectrumReport s_spectrum(const CommutingOperator& T, std::optional<Sector<double>> query = {});

/// Distance from the point (c, r) of the half-plane r >= 0 to the boundary
/// rays { t e^{+-i theta} }.
double sector_boundary_distance(const Sphere<double>& sp, double theta);

struct RaySample {
    double radius;
    double s_scaled;  ///< |s| max(||S_L^{-1}(s,T)||, ||S_L^{-1}(s,T-bar)||)
    double q_scaled;  ///< |s|^2 ||Q_{c,s}^{-1}(T)||
};

/// Samples the two rays t e^{+-J theta} at `per_decade` log-spaced radii
/// in [rmin, rmax]; each entry keeps the larger value of the two rays.
std::vector<RaySample> ray_profile(const CommutingOperator& T, double theta, const Unit& J,
                                   double rmin, double rmax, int per_decade);

struct SectorCertificate {
    double C_theta{0};   ///< bound for |s| ||S_L^{-1}(s,T)||
    double C_theta_Q{0}; ///< bound for |s|^2 ||Q_{c,s}^{-1}(T)||
};

inline constexpr double kCertificateSafety = 2.0;

/// Sampled suprema on the rays |Arg s| = theta over [1e-6, 1e6], times 2.
/// Throws NotSectorial when the spectrum reaches |Arg| >= theta.
SectorCertificate sector_certificate(const CommutingOperator& T, const Sector<double>& theta,
                                     const Unit& J = Unit::e1());

} // namespace hqcalc
