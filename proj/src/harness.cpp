#include "hqcalc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "hqcalc/parallel.hpp"

namespace hqcalc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOmegaMax = kPi / 6;

// ---- random instances -------------------------------------------------

double uniform(std::mt19937_64& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

Quat random_quat(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    return {n(rng), n(rng), n(rng), n(rng)};
}

Unit random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    for (;;) {
        const double a = n(rng), b = n(rng), c = n(rng);
        if (std::hypot(std::hypot(a, b), c) > 1e-3) return Unit::from(a, b, c);
    }
}

/// u + J v with u in [0.5, 4], v in [0, u tan(pi/6)].
Quat random_sector_point(std::mt19937_64& rng, const Unit& J) {
    const double u = uniform(rng, 0.5, 4.0);
    const double v = uniform(rng, 0.0, u * std::tan(kOmegaMax));
    return J.point(u, v);
}

struct Instance {
    CommutingOperator T;
    Json spec;
};

Instance random_diagonal(std::mt19937_64& rng, int n, std::optional<Unit> shared = {}) {
    std::vector<Quat> entries;
    Json js = Json::array();
    for (int i = 0; i < n; ++i) {
        entries.push_back(random_sector_point(rng, shared ? *shared : random_unit(rng)));
        js.push_back(to_json(entries.back()));
    }
    return {build_diagonal(entries), {{"kind", "diagonal"}, {"entries", js}}};
}

/// Ti = c_i M with M symmetric positive, |c| <= tan(pi/6).
Instance random_poly_family(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = nd(rng);
    const Eigen::MatrixXd Qm = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
    Eigen::VectorXd lambda(n);
    for (int i = 0; i < n; ++i) lambda(i) = uniform(rng, 0.5, 3.0);
    const Eigen::MatrixXd M = Qm * lambda.asDiagonal() * Qm.transpose();
    const Eigen::MatrixXd Ms = 0.5 * (M + M.transpose());
    const Unit dir = random_unit(rng);
    const double scale = uniform(rng, 0.0, 0.9 * std::tan(kOmegaMax));
    std::array<Polynomial, 4> p{Polynomial{0.0, 1.0}, Polynomial{0.0, scale * dir[0]},
                                Polynomial{0.0, scale * dir[1]}, Polynomial{0.0, scale * dir[2]}};
    Json mj = Json::array();
    for (int i = 0; i < n; ++i) {
        Json row = Json::array();
        for (int j = 0; j < n; ++j) row.push_back(Ms(i, j));
        mj.push_back(row);
    }
    Json pj = Json::array();
    for (const auto& q : p) pj.push_back(q.coeffs());
    return {build_poly_family(Ms, p), {{"kind", "poly_family"}, {"M", mj}, {"p", pj}}};
}

Instance random_operator(std::mt19937_64& rng) {
    return std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? random_diagonal(rng, 3)
                                                               : random_poly_family(rng, 4);
}

/// The fixed catalog: diag(2), diag(1 + 2 e1), a 4 x 4 polynomial family.
std::vector<Instance> catalog_operators(const SuiteConfig& cfg) {
    std::vector<Instance> out;
    out.push_back({build_diagonal({Quat(2.0)}),
                   {{"kind", "diagonal"}, {"entries", Json::array({to_json(Quat(2.0))})}}});
    out.push_back({build_diagonal({Quat(1, 2, 0, 0)}),
                   {{"kind", "diagonal"}, {"entries", Json::array({to_json(Quat(1, 2, 0, 0))})}}});
    Eigen::MatrixXd M(4, 4);
    M << 2, -0.5, 0, 0, -0.5, 2, -0.5, 0, 0, -0.5, 2, -0.5, 0, 0, -0.5, 2;
    Json pj = Json::array({Json::array({0, 1}), Json::array({0, 0.3}), Json::array({0.1, 0, 0.05}),
                           Json::array({0, 0.1})});
    Json spec{{"kind", "poly_family"},
              {"M", Json::array({{2, -0.5, 0, 0}, {-0.5, 2, -0.5, 0}, {0, -0.5, 2, -0.5}, {0, 0, -0.5, 2}})},
              {"p", pj}};
    out.push_back({operator_from_json(spec), spec});
    for (const auto& j : cfg.operators) out.push_back({operator_from_json(j), j});
    return out;
}

/// a s^2 / ((b + s)(c + s)^2): PsiQ with alpha = 1.
CertifiedFunction random_psiq(std::mt19937_64& rng, Json& spec) {
    const double a = uniform(rng, 0.5, 2.0), b = uniform(rng, 0.5, 2.0), c = uniform(rng, 0.5, 2.0);
    const Polynomial p = Polynomial::monomial(2, a);
    const Polynomial q = Polynomial{b, 1.0} * Polynomial::binomial_power(c, 1.0, 2);
    spec = {{"kind", "rational"}, {"p", p.coeffs()}, {"q", q.coeffs()}};
    return make_rational({p, q}, FunctionClass::PsiQ);
}

struct RationalCase {
    Polynomial p, q;
};

std::vector<RationalCase> rational_catalog() {
    return {{Polynomial{0, 0, 1}, Polynomial::binomial_power(1, 1, 3)},
            {Polynomial{0, 0, 0, 1}, Polynomial::binomial_power(1, 1, 5)},
            {Polynomial{0, 0, 2}, Polynomial{1, 1} * Polynomial::binomial_power(2, 1, 2)},
            {Polynomial{0, 0, 1}, Polynomial{3, 3, 1} * Polynomial{1, 1}}};
}

// ---- small helpers ----------------------------------------------------

double rel_gap(const QMat& a, const QMat& b) {
    return (a - b).frobenius() / std::max(1.0, b.frobenius());
}

double commute_gap(const QMat& a, const QMat& b) {
    const double scale = a.frobenius() * b.frobenius();
    return scale > 0 ? (a * b - b * a).frobenius() / scale : 0.0;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(3) << x;
    return os.str();
}

CalcOptions quad_opts(const SuiteConfig& cfg) {
    CalcOptions o;
    o.tol = cfg.tolerances.quadrature;
    return o;
}

CheckOutcome tolerance_only(double residual, double tol) {
    CheckOutcome o;
    o.residual = residual;
    o.tolerance = tol;
    o.inputs = {{"samples", 200}};
    return o;
}

// ---- hnum ---------------------------------------------------------------

CheckOutcome check_qmul_assoc_norm(CheckContext& ctx) {
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        const Quat a = random_quat(ctx.rng), b = random_quat(ctx.rng), c = random_quat(ctx.rng);
        const double nabc = a.norm() * b.norm() * c.norm();
        worst = std::max(worst, ((a * b) * c - a * (b * c)).norm() / nabc);
        worst = std::max(worst, std::abs((a * b).norm() - a.norm() * b.norm()) / (a.norm() * b.norm()));
    }
    return tolerance_only(worst, 1e-12);
}

CheckOutcome check_conj_antihom(CheckContext& ctx) {
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        const Quat a = random_quat(ctx.rng), b = random_quat(ctx.rng);
        worst = std::max(worst, ((a * b).conj() - b.conj() * a.conj()).norm() / (a.norm() * b.norm()));
    }
    return tolerance_only(worst, 1e-13);
}

CheckOutcome check_unit_square(CheckContext& ctx) {
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        const Quat j = random_unit(ctx.rng).q();
        worst = std::max(worst, (j * j + Quat(1.0)).norm());
    }
    return tolerance_only(worst, 1e-13);
}

CheckOutcome check_decompose_roundtrip(CheckContext& ctx) {
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        const Quat s = random_quat(ctx.rng);
        const auto c = decompose(s);
        worst = std::max(worst, (s - c.J.point(c.u, c.v)).norm() / s.norm());
    }
    return tolerance_only(worst, 2 * std::numeric_limits<double>::epsilon());
}

CheckOutcome check_sector_axial(CheckContext& ctx) {
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        const Sector<double> sec(uniform(ctx.rng, 0.1, kPi - 0.1));
        const Quat s = random_quat(ctx.rng);
        const auto c = decompose(s);
        const bool base = in_sector(s, sec);
        for (int k = 0; k < 4; ++k)
            if (in_sector(random_unit(ctx.rng).point(c.u, c.v), sec) != base) ++mismatches;
    }
    return tolerance_only(static_cast<double>(mismatches), 0.0);
}

// ---- qop ----------------------------------------------------------------

CheckOutcome check_axial_symmetry(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = ctx.cfg.tolerances.linear;
    int failures = 0;
    for (int i = 0; i < ctx.cfg.trials; ++i) {
        const auto inst = random_operator(ctx.rng);
        const Quat s = random_quat(ctx.rng);
        const auto c = decompose(s);
        const Quat s2 = random_unit(ctx.rng).point(c.u, c.v);
        try {
            const double n1 = pencil_inverse(inst.T, s).op_norm();
            const double n2 = pencil_inverse(inst.T, s2).op_norm();
            out.residual = std::max(out.residual, std::abs(n1 - n2) / n1);
        } catch (const SpectralPoint&) {
            ++failures;
        }
    }
    out.extra_ok = failures == 0;
    out.detail = "pencil failures on rotated points: " + std::to_string(failures);
    out.inputs = {{"trials", ctx.cfg.trials}};
    return out;
}

CheckOutcome check_left_right_resolvent(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = ctx.cfg.tolerances.linear;
    double misaligned = std::numeric_limits<double>::infinity();
    for (int i = 0; i < ctx.cfg.trials; ++i) {
        const Unit J = random_unit(ctx.rng);
        const auto aligned = random_diagonal(ctx.rng, 3, J);
        const Quat s = J.point(uniform(ctx.rng, -3, 3), uniform(ctx.rng, 0.5, 3));
        const QMat L = s_resolvent(aligned.T, s, Side::left);
        out.residual = std::max(out.residual, rel_gap(L, s_resolvent(aligned.T, s, Side::right)));

        const auto general = random_diagonal(ctx.rng, 3);
        const QMat L2 = s_resolvent(general.T, s, Side::left);
        misaligned = std::min(misaligned, rel_gap(L2, s_resolvent(general.T, s, Side::right)));
    }
    out.extra_ok = misaligned > 1e-6;
    out.detail = "smallest left/right gap for units not aligned with s: " + fmt(misaligned);
    out.inputs = {{"trials", ctx.cfg.trials}};
    return out;
}

struct ResolventResiduals {
    double stated{0};   // lhs vs first right-hand form
    double forms{0};    // first vs second right-hand form
    double kernel{0};   // lhs vs Q_s^{-1}(p - 2 T0 + s) Q_p^{-1}
};

ResolventResiduals resolvent_equation(const CommutingOperator& T, const Quat& s, const Quat& p) {
    const CommutingOperator Tb = T.conjugate();
    const Eigen::Index n = T.dim();
    const QMat Qs = pencil_inverse(T, s), Qp = pencil_inverse(T, p);
    const QMat lhs = Qs * cauchy_kernel_left(p, s) + cauchy_kernel_right(s, p) * Qp;
    const QMat form1 = Qs * s_resolvent(T, p, Side::left) + s_resolvent(Tb, s, Side::right) * Qp;
    const QMat form2 = Qs * s_resolvent(Tb, p, Side::left) + s_resolvent(T, s, Side::right) * Qp;
    const QMat middle = QMat::scalar(p + s, n) - 2.0 * QMat::real(T.component(0));
    const QMat kern = Qs * middle * Qp;
    const double scale = std::max({lhs.frobenius(), form1.frobenius(), kern.frobenius(),
                                   Qs.frobenius() * middle.frobenius() * Qp.frobenius()});
    return {(lhs - form1).frobenius() / scale, (form1 - form2).frobenius() / scale,
            (lhs - kern).frobenius() / scale};
}

CheckOutcome check_resolvent_equation(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = 1e-9;
    ResolventResiduals worst;
    int used = 0;
    while (used < ctx.cfg.trials) {
        const auto inst = random_operator(ctx.rng);
        const Quat s = 2.0 * random_quat(ctx.rng), p = 2.0 * random_quat(ctx.rng);
        if (same_sphere(s, p, 1e-3)) continue;
        ResolventResiduals r;
        try {
            r = resolvent_equation(inst.T, s, p);
        } catch (const SpectralPoint&) {
            continue;
        }
        worst.stated = std::max(worst.stated, r.stated);
        worst.forms = std::max(worst.forms, r.forms);
        worst.kernel = std::max(worst.kernel, r.kernel);
        ++used;
    }
    out.residual = std::max({worst.stated, worst.forms, worst.kernel});
    out.detail = "stated " + fmt(worst.stated) + ", forms " + fmt(worst.forms) + ", kernel " + fmt(worst.kernel);
    out.inputs = {{"trials", used}};
    return out;
}

/// |D S_L^{-1}(s, .) + 2 Q_{c,s}^{-1}(.)| at q for step h.
double kernel_fd_error(const Quat& s, const Quat& q, double h) {
    const auto f = [&s](const Quat& x) { return cauchy_kernel_left(s, x); };
    const Quat fd = central_difference_cf(f, q, h, Side::left);
    const Quat exact = -2.0 * qinv(pencil_scalar(s, q));
    return (fd - exact).norm() / std::max(1.0, exact.norm());
}

CheckOutcome check_kernel_fd(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = ctx.cfg.tolerances.finite_difference;
    double worst_order = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
        const Quat q = random_quat(ctx.rng);
        Quat s;
        do s = 2.0 * random_quat(ctx.rng);
        while (std::abs(s.s0 - q.s0) + std::abs(s.imag_norm() - q.imag_norm()) < 0.5);
        out.residual = std::max(out.residual, kernel_fd_error(s, q, 1e-4));
        const double e1 = kernel_fd_error(s, q, 2e-2), e2 = kernel_fd_error(s, q, 1e-2);
        worst_order = std::min(worst_order, std::log2(e1 / e2));
    }
    out.extra_ok = worst_order > 1.8;
    out.detail = "observed order " + fmt(worst_order);
    out.inputs = {{"samples", 20}, {"h", 1e-4}};
    return out;
}

CheckOutcome check_pencil_conjugate(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = 0.0;
    for (int i = 0; i < ctx.cfg.trials; ++i) {
        const auto inst = random_operator(ctx.rng);
        const Quat s = 2.0 * random_quat(ctx.rng);
        try {
            const QMat a = pencil_inverse(inst.T, s), b = pencil_inverse(inst.T.conjugate(), s);
            out.residual = std::max(out.residual, (a - b).max_abs());
        } catch (const SpectralPoint&) {
        }
    }
    out.inputs = {{"trials", ctx.cfg.trials}};
    return out;
}

/// Running maxima of |s|^2 ||Q^{-1}|| over [1e-4, 1e4] against the range
/// one decade shorter at each end.
CheckOutcome check_q_estimate(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = 0.01;
    Json ops = Json::array();
    auto cases = catalog_operators(ctx.cfg);
    cases.push_back(random_operator(ctx.rng));
    for (const auto& inst : cases) {
        const double omega = s_spectrum(inst.T).max_arg;
        const double theta = 0.5 * (omega + kPi);
        const auto prof = ray_profile(inst.T, theta, random_unit(ctx.rng), 1e-4, 1e4, 10);
        double full = 0, inner = 0;
        for (const auto& r : prof) {
            if (!std::isfinite(r.q_scaled)) {
                out.extra_ok = false;
                continue;
            }
            full = std::max(full, r.q_scaled);
            if (r.radius >= 1e-3 * (1 - 1e-9) && r.radius <= 1e3 * (1 + 1e-9)) inner = std::max(inner, r.q_scaled);
        }
        out.residual = std::max(out.residual, full / inner - 1.0);
        ops.push_back(inst.spec);
    }
    out.inputs = {{"operators", ops}};
    return out;
}

// ---- sfun ---------------------------------------------------------------

StemFunction random_stem(std::mt19937_64& rng, bool intrinsic) {
    const double b = uniform(rng, 0.5, 2.0);
    const IntrinsicRational r{Polynomial{uniform(rng, -1, 1), uniform(rng, -1, 1), 1.0},
                              Polynomial::binomial_power(b, 1.0, 3)};
    return StemFunction(r, kDefaultTheta, Side::left, intrinsic ? Quat(1.0) : random_quat(rng));
}

CheckOutcome check_representation_formula(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = ctx.cfg.tolerances.linear;
    for (int i = 0; i < 100; ++i) {
        const StemFunction f = random_stem(ctx.rng, false);
        const double u = uniform(ctx.rng, 0.2, 3), v = uniform(ctx.rng, 0.01, 2 * u);
        const Unit J = random_unit(ctx.rng), I = random_unit(ctx.rng);
        const Quat plus = f(J.point(u, v)), minus = f((-J).point(u, v));
        const Quat a = f.alpha(u, v), b = f.beta(u, v);
        const double scale = std::max(1.0, plus.norm());
        double r = (plus - (a + J.q() * b)).norm();
        r = std::max(r, (minus - (a - J.q() * b)).norm());
        r = std::max(r, (0.5 * (plus + minus) - a).norm());
        // f(u + I v) = 1/2 (1 - I J) f(u + J v) + 1/2 (1 + I J) f(u - J v)
        const Quat IJ = I.q() * J.q();
        const Quat rep = 0.5 * ((Quat(1.0) - IJ) * plus + (Quat(1.0) + IJ) * minus);
        r = std::max(r, (f(I.point(u, v)) - rep).norm());
        out.residual = std::max(out.residual, r / scale);
    }
    out.inputs = {{"samples", 100}};
    return out;
}

CheckOutcome check_intrinsic_slice(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = 1e-13;
    for (int i = 0; i < 100; ++i) {
        const StemFunction f = random_stem(ctx.rng, true);
        const double u = uniform(ctx.rng, 0.2, 3), v = uniform(ctx.rng, 0.01, 2 * u);
        const Unit J = random_unit(ctx.rng);
        const Quat val = f(J.point(u, v));
        const auto [z1, z2] = split_plane(val, J);
        out.residual = std::max(out.residual, std::abs(z2) / std::max(1e-300, val.norm()));
    }
    out.inputs = {{"samples", 100}};
    return out;
}

CheckOutcome check_cauchy_reconstruction(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = ctx.cfg.tolerances.quadrature;
    constexpr int kPoints = 512;
    for (int i = 0; i < 20; ++i) {
        Json spec;
        const auto cf = random_psiq(ctx.rng, spec);
        const StemFunction f = cf.f.scaled(random_quat(ctx.rng));
        const double u = uniform(ctx.rng, 0.5, 2), v = uniform(ctx.rng, 0, 0.8);
        const Quat q = random_unit(ctx.rng).point(u, v);
        const Unit J = random_unit(ctx.rng);
        const double r = 0.9 * u + 0.45;
        Quat sum;
        for (int k = 0; k < kPoints; ++k) {
            const double t = 2 * kPi * k / kPoints;
            const Quat e = J.point(std::cos(t), std::sin(t));
            const Quat s = Quat(u) + r * e;
            // ds_J = ds / J = r e^{Jt} dt
            sum += cauchy_kernel_left(s, q) * ((r * 2 * kPi / kPoints) * e) * f.on_plane({s.s0, r * std::sin(t)}, J);
        }
        sum = sum / (2 * kPi);
        const Quat exact = f(q);
        out.residual = std::max(out.residual, (sum - exact).norm() / std::max(1.0, exact.norm()));
    }
    out.inputs = {{"samples", 20}, {"points", kPoints}};
    return out;
}

CheckOutcome check_cf_derivative_fd(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = ctx.cfg.tolerances.finite_difference;
    double worst_order = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 30; ++i) {
        const StemFunction f = random_stem(ctx.rng, true);
        const Quat x = random_sector_point(ctx.rng, random_unit(ctx.rng));
        const Quat exact = cf_derivative_rational(f, x);
        const auto eval = [&f](const Quat& y) { return f(y); };
        const double scale = std::max(1.0, exact.norm());
        const double e1 = (central_difference_cf(eval, x, 2e-2) - exact).norm() / scale;
        const double e2 = (central_difference_cf(eval, x, 1e-2) - exact).norm() / scale;
        worst_order = std::min(worst_order, std::log2(e1 / e2));
        out.residual = std::max(out.residual, (central_difference_cf(eval, x, 1e-4) - exact).norm() / scale);
    }
    out.extra_ok = worst_order > 1.8;
    out.detail = "observed order " + fmt(worst_order);
    out.inputs = {{"samples", 30}};
    return out;
}

// ---- contour --------------------------------------------------------------

CheckOutcome check_quadrature_order(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = 0.25;
    const auto T = build_diagonal({random_sector_point(ctx.rng, Unit::e1())});
    Json spec;
    const auto f = random_psiq(ctx.rng, spec);
    const double phi = 0.5 * (kOmegaMax + kDefaultTheta);
    const Quat up = Unit::e1().point(std::cos(phi), std::sin(phi));
    const Quat w = Unit::e1().q() * up;
    // one component of the upper-ray integrand in x = ln t
    const auto g = [&](double x) {
        const double t = std::exp(x);
        const Quat s = t * up;
        return (pencil_inverse(T, s) * (t * w * f.f(s)))(0, 0).s0;
    };
    const auto [gx, gw] = gauss_legendre(12);
    const auto composite = [&](int panels) {
        const double a = -2, b = 2, h = (b - a) / panels;
        double sum = 0;
        for (int p = 0; p < panels; ++p)
            for (std::size_t i = 0; i < gx.size(); ++i) sum += 0.5 * h * gw[i] * g(a + h * (p + 0.5) + 0.5 * h * gx[i]);
        return sum;
    };
    const double i1 = composite(1), i2 = composite(2), i4 = composite(4);
    const double e_coarse = std::abs(i2 - i1), e_fine = std::abs(i4 - i2);
    out.residual = e_coarse > 0 ? (e_fine > 1e-15 ? e_fine / e_coarse : 0.0) : 0.0;
    out.detail = "estimates " + fmt(e_coarse) + " -> " + fmt(e_fine);
    out.inputs = {{"f", spec}};
    return out;
}

CheckOutcome check_angle_independence(CheckContext& ctx) {
    const double tol = ctx.cfg.tolerances.quadrature;
    CheckOutcome out;
    out.tolerance = 6 * tol;
    Json cases = Json::array();
    for (int i = 0; i < 3; ++i) {
        const auto inst = random_operator(ctx.rng);
        Json fspec;
        const auto f = random_psiq(ctx.rng, fspec);
        const double omega = s_spectrum(inst.T).max_arg;
        std::vector<QMat> values;
        for (int k = 0; k < ctx.cfg.angle_samples; ++k) {
            CalcOptions o = quad_opts(ctx.cfg);
            o.phi = omega + (f.f.theta() - omega) * (k + 1.0) / (ctx.cfg.angle_samples + 1.0);
            values.push_back(d_calc(inst.T, f, o).value);
        }
        for (std::size_t a = 0; a < values.size(); ++a)
            for (std::size_t b = a + 1; b < values.size(); ++b)
                out.residual = std::max(out.residual, (values[a] - values[b]).frobenius());
        cases.push_back({{"T", inst.spec}, {"f", fspec}});
    }
    out.inputs = {{"cases", cases}};
    return out;
}

CheckOutcome check_unit_independence(CheckContext& ctx) {
    const double tol = ctx.cfg.tolerances.quadrature;
    CheckOutcome out;
    out.tolerance = 6 * tol;
    Json cases = Json::array();
    for (int i = 0; i < 3; ++i) {
        const auto inst = random_operator(ctx.rng);
        Json fspec;
        const auto f = random_psiq(ctx.rng, fspec);
        std::vector<QMat> values;
        for (int k = 0; k < ctx.cfg.unit_samples; ++k) {
            CalcOptions o = quad_opts(ctx.cfg);
            o.J = k == 0 ? Unit::e1() : random_unit(ctx.rng);
            values.push_back(d_calc(inst.T, f, o).value);
        }
        for (std::size_t a = 0; a < values.size(); ++a)
            for (std::size_t b = a + 1; b < values.size(); ++b)
                out.residual = std::max(out.residual, (values[a] - values[b]).frobenius());
        cases.push_back({{"T", inst.spec}, {"f", fspec}});
    }
    out.inputs = {{"cases", cases}};
    return out;
}

CheckOutcome check_operand_order(CheckContext& ctx) {
    const double tol = ctx.cfg.tolerances.quadrature;
    CheckOutcome out;
    out.tolerance = 6 * tol;
    const auto inst = random_diagonal(ctx.rng, 3);
    Json fspec;
    const auto f = random_psiq(ctx.rng, fspec);

    // intrinsic: left and right assemblies agree
    CalcOptions o = quad_opts(ctx.cfg);
    o.side = Side::left;
    const QMat left = s_calc(inst.T, f, o).value;
    o.side = Side::right;
    const QMat right = s_calc(inst.T, f, o).value;
    out.residual = (left - right).frobenius();

    // non-intrinsic: swapping the summand order changes the integral
    const StemFunction g = f.f.scaled(Quat(0, 0, 1, 0));
    const CertifiedFunction gc{g, certify(g, FunctionClass::PsiQ)};
    const double phi = default_phi(inst.T, g.theta());
    const auto rc = sector_certificate(inst.T, Sector<double>(phi));
    const auto plan = plan_contour(gc.cert, rc, phi, Unit::e1(), tol, KernelKind::s_resolvent);
    const auto T = inst.T;
    const Kernel kl = [&T](const Quat& s) { return s_resolvent(T, s, Side::left); };
    const QMat kept = contour_integrate(plan, kl, g, Side::left, kernel_prefactor(plan.kernel)).value;
    const QMat swapped = contour_integrate(plan, kl, g, Side::right, kernel_prefactor(plan.kernel)).value;
    const double gap = rel_gap(kept, swapped);
    out.extra_ok = gap > 1e-3;
    out.detail = "non-intrinsic swap gap " + fmt(gap);
    out.inputs = {{"T", inst.spec}, {"f", fspec}};
    return out;
}

// ---- calculus -------------------------------------------------------------

CheckOutcome check_linearity(CheckContext& ctx) {
    const double tol = ctx.cfg.tolerances.quadrature;
    CheckOutcome out;
    out.tolerance = 3 * tol;
    const auto inst = random_operator(ctx.rng);
    Json fs, gs;
    const auto f = random_psiq(ctx.rng, fs), g = random_psiq(ctx.rng, gs);
    const StemFunction sum = f.f + g.f;
    const CertifiedFunction h{sum, certify(sum, FunctionClass::PsiQ)};
    const auto o = quad_opts(ctx.cfg);
    const QMat lhs = d_calc(inst.T, h, o).value;
    const QMat rhs = d_calc(inst.T, f, o).value + d_calc(inst.T, g, o).value;
    out.residual = (lhs - rhs).frobenius();
    out.inputs = {{"T", inst.spec}, {"f", fs}, {"g", gs}};
    return out;
}

CheckOutcome check_conjugation_invariance(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = 0.0;
    Json ops = Json::array();
    Json fs;
    const auto f = random_psiq(ctx.rng, fs);
    for (int i = 0; i < 3; ++i) {
        const auto inst = random_operator(ctx.rng);
        const auto o = quad_opts(ctx.cfg);
        const QMat a = d_calc(inst.T, f, o).value, b = d_calc(inst.T.conjugate(), f, o).value;
        out.residual = std::max(out.residual, (a - b).max_abs());
        ops.push_back(inst.spec);
    }
    out.inputs = {{"operators", ops}, {"f", fs}};
    return out;
}

CheckOutcome check_intrinsic_reality(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = ctx.cfg.tolerances.linear;
    Json ops = Json::array();
    for (int i = 0; i < 3; ++i) {
        const auto inst = random_operator(ctx.rng);
        Json fs;
        const auto f = random_psiq(ctx.rng, fs);
        const QMat v = d_calc(inst.T, f, quad_opts(ctx.cfg)).value;
        out.residual = std::max(out.residual, v.imag_frobenius() / std::max(1e-300, v.frobenius()));
        ops.push_back({{"T", inst.spec}, {"f", fs}});
    }
    out.inputs = {{"cases", ops}};
    return out;
}

double component_commutation(const QMat& v) {
    const double scale = v.frobenius() * v.frobenius();
    if (scale == 0) return 0;
    double worst = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const auto& a = v.component(i);
            const auto& b = v.component(j);
            worst = std::max(worst, (a * b - b * a).norm() / scale);
        }
    return worst;
}

CheckOutcome check_commuting_components(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = 1e-9;
    const auto inst = random_poly_family(ctx.rng, 4);
    Json fs;
    const auto f = random_psiq(ctx.rng, fs);
    const auto o = quad_opts(ctx.cfg);
    out.residual = std::max(component_commutation(d_calc(inst.T, f, o).value),
                            component_commutation(s_calc(inst.T, f, o).value));
    out.inputs = {{"T", inst.spec}, {"f", fs}};
    return out;
}

CheckOutcome check_commutant(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = 1e-9;
    const auto inst = random_poly_family(ctx.rng, 4);
    Json fs;
    const auto f = random_psiq(ctx.rng, fs);
    const auto& T = inst.T;
    const Eigen::MatrixXd Bm = uniform(ctx.rng, -1, 1) * Eigen::MatrixXd::Identity(T.dim(), T.dim()) +
                               uniform(ctx.rng, -1, 1) * T.component(1) +
                               uniform(ctx.rng, -1, 1) * T.component(0) * T.component(2) +
                               uniform(ctx.rng, -1, 1) * T.component(3) * T.component(3) +
                               uniform(ctx.rng, -1, 1) * T.component(0);
    const QMat B = QMat::real(Bm);
    const QMat D = d_calc(T, f, quad_opts(ctx.cfg)).value;
    out.residual = commute_gap(B, D);
    out.inputs = {{"T", inst.spec}, {"f", fs}};
    return out;
}

CheckOutcome check_mutual_commutation(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = 1e-9;
    const auto inst = random_poly_family(ctx.rng, 4);
    Json fs, gs;
    const auto f = random_psiq(ctx.rng, fs), g = random_psiq(ctx.rng, gs);
    const auto o = quad_opts(ctx.cfg);
    out.residual = commute_gap(s_calc(inst.T, g, o).value, d_calc(inst.T, f, o).value);
    out.inputs = {{"T", inst.spec}, {"f", fs}, {"g", gs}};
    return out;
}

struct ProductRuleResiduals {
    double form_a{0}, form_b{0}, forms{0};
};

/// D(fg)(T) against Df(T) g(T) + f(T-bar) Dg(T) and Df(T) g(T-bar) + f(T) Dg(T).
ProductRuleResiduals product_rule(const CommutingOperator& T, const CertifiedFunction& f,
                                  const CertifiedFunction& g, double tol) {
    CalcOptions o;
    o.tol = tol;
    const auto fg = product(f.f, g.f, FunctionClass::PsiQ);
    const CommutingOperator Tb = T.conjugate();
    const QMat lhs = d_calc(T, fg, o).value;
    const QMat Df = d_calc(T, f, o).value, Dg = d_calc(T, g, o).value;
    const QMat gT = s_calc(T, g, o).value, gTb = s_calc(Tb, g, o).value;
    const QMat fT = s_calc(T, f, o).value, fTb = s_calc(Tb, f, o).value;
    const QMat a = Df * gT + fTb * Dg;
    const QMat b = Df * gTb + fT * Dg;
    const double scale = std::max(1.0, lhs.frobenius());
    return {(lhs - a).frobenius() / scale, (lhs - b).frobenius() / scale, (a - b).frobenius() / scale};
}

CheckOutcome check_product_rule(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = ctx.cfg.tolerances.quadrature;
    const auto inst = random_operator(ctx.rng);
    Json gs;
    const auto g = random_psiq(ctx.rng, gs);
    const auto e = make_regularizer(3);
    const auto r = product_rule(inst.T, e, g, 1e-3 * ctx.cfg.tolerances.quadrature);

    // regularised version with growing factors: f = s, g = s^2
    const auto s1 = make_rational({Polynomial{0, 1}}, FunctionClass::F);
    const auto s2 = make_rational({Polynomial{0, 0, 1}}, FunctionClass::F);
    const auto s3 = make_rational({Polynomial{0, 0, 0, 1}}, FunctionClass::F);
    HinfOptions h;
    h.calc.tol = ctx.cfg.tolerances.quadrature;
    const QMat lhs = hinf_d(inst.T, s3, h).value;
    const QMat rhs = hinf_d(inst.T, s1, h).value * hinf_s(inst.T, s2, h).value +
                     hinf_s(inst.T.conjugate(), s1, h).value * hinf_d(inst.T, s2, h).value;
    const double hinf_gap = rel_gap(lhs, rhs);

    out.residual = std::max({r.form_a, r.form_b, hinf_gap});
    out.extra_ok = r.forms <= 1e-9;
    out.detail = "form gap " + fmt(r.forms) + ", regularised gap " + fmt(hinf_gap);
    out.inputs = {{"T", inst.spec}, {"g", gs}, {"f", {{"kind", "regularizer"}, {"n", 3}}}};
    return out;
}

CheckOutcome check_regularizer_independence(CheckContext& ctx) {
    const double tol = ctx.cfg.tolerances.quadrature;
    CheckOutcome out;
    out.tolerance = 3 * tol;
    const auto inst = random_operator(ctx.rng);
    const std::vector<IntrinsicRational> fs{{Polynomial{0, 1}}, {Polynomial{0, 0, 1}},
                                            {Polynomial{1, 0, 1}, Polynomial{2, 1}}};
    for (const auto& r : fs) {
        const auto f = make_rational(r, FunctionClass::F);
        HinfOptions h;
        h.calc.tol = tol;
        h.regularizer_n = default_regularizer_power(f.cert);
        const QMat a = hinf_d(inst.T, f, h).value;
        ++h.regularizer_n;
        const QMat b = hinf_d(inst.T, f, h).value;
        out.residual = std::max(out.residual, rel_gap(a, b));
    }
    out.inputs = {{"T", inst.spec}};
    return out;
}

CheckOutcome check_kernel_of_d(CheckContext& ctx) {
    const double tol = ctx.cfg.tolerances.quadrature;
    CheckOutcome out;
    out.tolerance = 3 * tol;
    const auto inst = random_operator(ctx.rng);
    HinfOptions h;
    h.calc.tol = tol;
    const auto f = make_rational({Polynomial{0, 0, 1}}, FunctionClass::F);
    const auto g = make_rational({Polynomial{1, 0, 1}}, FunctionClass::F);
    out.residual = rel_gap(hinf_d(inst.T, f, h).value, hinf_d(inst.T, g, h).value);

    // a constant cannot be added inside PsiQ
    Json fs;
    const auto psi = random_psiq(ctx.rng, fs);
    bool rejected = false;
    try {
        (void)certify(psi.f + StemFunction::polynomial(Polynomial{1.0}), FunctionClass::PsiQ);
    } catch (const HypothesisViolation&) {
        rejected = true;
    }
    out.extra_ok = rejected;
    out.detail = rejected ? "f + 1 rejected from PsiQ" : "f + 1 was accepted into PsiQ";
    out.inputs = {{"T", inst.spec}, {"psiq", fs}};
    return out;
}

CheckOutcome check_rational_vs_quadrature(CheckContext& ctx) {
    const double tol = ctx.cfg.tolerances.quadrature;
    CheckOutcome out;
    out.tolerance = 10 * tol;
    auto ops = catalog_operators(ctx.cfg);
    ops.push_back(random_operator(ctx.rng));
    Json specs = Json::array();
    for (const auto& inst : ops) {
        for (const auto& rc : rational_catalog()) {
            const auto f = make_rational({rc.p, rc.q}, FunctionClass::PsiQ);
            const QMat quad = d_calc(inst.T, f, quad_opts(ctx.cfg)).value;
            const auto cf = rational_d(rc.p, rc.q, inst.T);
            out.residual = std::max({out.residual, rel_gap(quad, cf.form1), rel_gap(quad, cf.form2)});
        }
        specs.push_back(inst.spec);
    }
    // pinned regression points: 0 at diag(2) and -1/2 at diag(e1) for s^2/(1+s)^3
    const auto pc = rational_catalog().front();
    const double pin0 = rational_d(pc.p, pc.q, build_diagonal({Quat(2.0)})).form1.max_abs();
    const double pin1 = (rational_d(pc.p, pc.q, build_diagonal({Quat(0, 1, 0, 0)})).form1(0, 0) - Quat(-0.5)).norm();
    out.extra_ok = pin0 <= 1e-14 && pin1 <= 1e-14;
    out.detail = "pinned residuals " + fmt(pin0) + ", " + fmt(pin1);
    out.inputs = {{"operators", specs}};
    return out;
}

CheckOutcome check_poly_product_rule(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = ctx.cfg.tolerances.linear;
    for (int i = 0; i < 10; ++i) {
        const auto inst = random_operator(ctx.rng);
        std::vector<double> pc(5), qc(4);
        for (auto& c : pc) c = uniform(ctx.rng, -1, 1);
        for (auto& c : qc) c = uniform(ctx.rng, -1, 1);
        const Polynomial p(pc), q(qc);
        const auto& T = inst.T;
        const QMat lhs = d_poly_calc(p * q, T);
        const QMat a = d_poly_calc(p, T) * poly_calc(q, T), b = poly_calc(p, T.conjugate()) * d_poly_calc(q, T);
        const double scale = std::max(1.0, a.frobenius() + b.frobenius());
        out.residual = std::max(out.residual, (lhs - (a + b)).frobenius() / scale);
    }
    out.inputs = {{"samples", 10}};
    return out;
}

CheckOutcome check_hinf_identity(CheckContext& ctx) {
    const double tol = ctx.cfg.tolerances.quadrature;
    CheckOutcome out;
    out.tolerance = tol;
    const auto f = make_rational({Polynomial{0, 1}}, FunctionClass::F);
    double gap = 0;
    Json ops = Json::array();
    for (const auto& inst : catalog_operators(ctx.cfg)) {
        HinfOptions h;
        h.calc.tol = tol;
        const auto r = hinf_d(inst.T, f, h);
        out.residual = std::max(out.residual, (r.value - (-2.0) * QMat::Identity(inst.T.dim())).frobenius());
        gap = std::max(gap, *r.form_gap);
        ops.push_back(inst.spec);
    }
    out.extra_ok = gap <= 1e-8;
    out.detail = "largest form gap " + fmt(gap);
    out.inputs = {{"operators", ops}};
    return out;
}

// ---- harness ----------------------------------------------------------------

CheckOutcome check_determinism(CheckContext& ctx) {
    CheckOutcome out;
    out.tolerance = 0.0;
    const auto inst = random_poly_family(ctx.rng, 4);
    Json fs;
    const auto f = random_psiq(ctx.rng, fs);
    QMat serial, threaded;
    {
        ScopedWorkerLimit one(1);
        serial = d_calc(inst.T, f, quad_opts(ctx.cfg)).value;
    }
    threaded = d_calc(inst.T, f, quad_opts(ctx.cfg)).value;
    out.residual = (serial - threaded).max_abs();
    out.detail = "workers " + std::to_string(worker_count()) + " vs 1";
    out.inputs = {{"T", inst.spec}, {"f", fs}};
    return out;
}

CheckOutcome check_coverage(CheckContext&) {
    std::set<std::string> implemented;
    for (const auto& c : check_registry()) implemented.insert(c.name);
    std::size_t missing = 0;
    std::string names;
    for (const auto& m : invariant_manifest())
        if (!implemented.count(m)) {
            ++missing;
            names += " " + m;
        }
    const bool unique = implemented.size() == check_registry().size();
    CheckOutcome out = tolerance_only(static_cast<double>(missing), 0.0);
    out.extra_ok = unique;
    if (missing) out.detail = "missing:" + names;
    return out;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

std::string fnv1a_hex(const std::string& data) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(data);
    return os.str();
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"algebra", "resolvent", "independence", "product", "rational", "hinf"};
    return names;
}

const std::vector<std::string>& invariant_manifest() {
    static const std::vector<std::string> m{
        "hnum.qmul_assoc_norm",      "hnum.conj_antihom",          "hnum.unit_square",
        "hnum.decompose_roundtrip",  "hnum.sector_axial",          "qop.axial_symmetry",
        "qop.left_right_resolvent",  "qop.resolvent_equation",     "qop.kernel_fd",
        "qop.pencil_conjugate",      "sfun.representation_formula", "sfun.intrinsic_slice",
        "sfun.cauchy_reconstruction", "sfun.cf_derivative_fd",      "contour.quadrature_order",
        "contour.angle_independence", "contour.unit_independence",  "contour.operand_order",
        "calc.linearity",            "calc.conjugation_invariance", "calc.intrinsic_reality",
        "calc.commuting_components", "calc.commutant",             "calc.mutual_commutation",
        "calc.product_rule",         "calc.regularizer_independence", "calc.kernel_of_d",
        "calc.rational_vs_quadrature", "calc.poly_product_rule",    "harness.determinism",
        "harness.coverage"};
    return m;
}

const std::vector<CheckSpec>& check_registry() {
    static const std::vector<CheckSpec> r{
        {"hnum.qmul_assoc_norm", "algebra", "Hamilton product is associative and |ab| = |a||b|", check_qmul_assoc_norm},
        {"hnum.conj_antihom", "algebra", "conj(ab) = conj(b) conj(a)", check_conj_antihom},
        {"hnum.unit_square", "algebra", "J^2 = -1 for J in the unit sphere", check_unit_square},
        {"hnum.decompose_roundtrip", "algebra", "s = u + J v after decomposition", check_decompose_roundtrip},
        {"hnum.sector_axial", "algebra", "sector membership is constant on spheres [s]", check_sector_axial},
        {"sfun.representation_formula", "algebra", "representation formula for slice functions",
         check_representation_formula},
        {"sfun.intrinsic_slice", "algebra", "intrinsic functions map C_J into C_J", check_intrinsic_slice},
        {"sfun.cf_derivative_fd", "algebra", "finite-difference Cauchy-Fueter derivative of rationals",
         check_cf_derivative_fd},
        {"harness.determinism", "algebra", "results independent of the worker count", check_determinism},
        {"harness.coverage", "algebra", "every invariant has a check", check_coverage},
        {"qop.axial_symmetry", "resolvent", "resolvent set is axially symmetric", check_axial_symmetry},
        {"qop.left_right_resolvent", "resolvent", "left and right S-resolvents agree on an aligned slice",
         check_left_right_resolvent},
        {"qop.resolvent_equation", "resolvent", "Q-resolvent equation, both forms and kernel form",
         check_resolvent_equation},
        {"qop.kernel_fd", "resolvent", "D S_L^{-1}(s,q) = -2 Q_{c,s}^{-1}(q)", check_kernel_fd},
        {"qop.pencil_conjugate", "resolvent", "Q_{c,s}^{-1}(T) = Q_{c,s}^{-1}(T-bar)", check_pencil_conjugate},
        {"qop.q_estimate", "resolvent", "|s|^2 ||Q_{c,s}^{-1}(T)|| bounded outside the sector", check_q_estimate},
        {"sfun.cauchy_reconstruction", "resolvent", "slice Cauchy formula on circles", check_cauchy_reconstruction},
        {"contour.quadrature_order", "independence", "panel halving shrinks the error estimate",
         check_quadrature_order},
        {"contour.angle_independence", "independence", "Df(T) does not depend on the angle",
         check_angle_independence},
        {"contour.unit_independence", "independence", "Df(T) does not depend on the imaginary unit",
         check_unit_independence},
        {"contour.operand_order", "independence", "operand order is kept for non-intrinsic functions",
         check_operand_order},
        {"calc.linearity", "product", "D(f+g)(T) = Df(T) + Dg(T)", check_linearity},
        {"calc.conjugation_invariance", "product", "Df(T-bar) = Df(T)", check_conjugation_invariance},
        {"calc.intrinsic_reality", "product", "Df(T) is real for intrinsic f", check_intrinsic_reality},
        {"calc.commuting_components", "product", "outputs have commuting components", check_commuting_components},
        {"calc.commutant", "product", "B Df(T) = Df(T) B for B commuting with T", check_commutant},
        {"calc.mutual_commutation", "product", "g(T) Df(T) = Df(T) g(T)", check_mutual_commutation},
        {"calc.product_rule", "product", "D(fg)(T) = Df(T) g(T) + f(T-bar) Dg(T), both forms", check_product_rule},
        {"calc.rational_vs_quadrature", "rational", "quadrature Df(T) equals the rational closed form",
         check_rational_vs_quadrature},
        {"calc.poly_product_rule", "rational", "D(pq)[T] = Dp[T] q[T] + p[T-bar] Dq[T]", check_poly_product_rule},
        {"calc.regularizer_independence", "hinf", "regularised Df(T) does not depend on the regulariser",
         check_regularizer_independence},
        {"calc.kernel_of_d", "hinf", "Df = Dg implies Df(T) = Dg(T)", check_kernel_of_d},
        {"calc.hinf_identity", "hinf", "regularised D s at T equals -2 I", check_hinf_identity},
    };
    return r;
}

void validate(SuiteConfig& cfg) {
    std::vector<std::string> expanded;
    for (const auto& s : cfg.suites) {
        if (s == "all") {
            expanded = suite_names();
            break;
        }
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            throw ConfigError("unknown suite \"" + s + "\"");
        if (std::find(expanded.begin(), expanded.end(), s) == expanded.end()) expanded.push_back(s);
    }
    if (expanded.empty()) throw ConfigError("no suites selected");
    cfg.suites = std::move(expanded);
    const auto& t = cfg.tolerances;
    if (!(t.linear > 0 && t.quadrature > 0 && t.finite_difference > 0))
        throw ConfigError("tolerances must be positive");
    if (!(t.finite_difference > t.quadrature && t.quadrature > t.linear))
        throw ConfigError("tolerance ladder must descend: finite_difference > quadrature > linear");
    if (cfg.angle_samples < 2 || cfg.unit_samples < 2 || cfg.trials < 1)
        throw ConfigError("sample counts too small");
    for (const auto& j : cfg.operators) (void)operator_from_json(j);
    for (const auto& j : cfg.functions) (void)function_from_json(j);
}

SuiteConfig load_suite_config(const std::string& path) {
    const Json j = read_json_file(path);
    const auto base = std::filesystem::path(path).parent_path();
    SuiteConfig cfg;
    auto load_item = [&](const Json& item) {
        if (item.is_string()) return read_json_file((base / item.get<std::string>()).string());
        return item;
    };
    try {
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("suites")) cfg.suites = j["suites"].get<std::vector<std::string>>();
        if (j.contains("tolerance_ladder")) {
            const auto t = j["tolerance_ladder"].get<std::vector<double>>();
            if (t.size() != 3) throw ConfigError("tolerance_ladder needs [finite_difference, quadrature, linear]");
            cfg.tolerances = {t[0], t[1], t[2]};
        }
        if (j.contains("operators"))
            for (const auto& o : j["operators"]) cfg.operators.push_back(load_item(o));
        if (j.contains("functions"))
            for (const auto& f : j["functions"]) cfg.functions.push_back(load_item(f));
        if (j.contains("angle_samples")) cfg.angle_samples = j["angle_samples"].get<int>();
        if (j.contains("unit_samples")) cfg.unit_samples = j["unit_samples"].get<int>();
        if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    } catch (const Json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    validate(cfg);
    return cfg;
}

bool Report::pass() const { return failed() == 0; }

std::size_t Report::failed() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.pass; }));
}

Json Report::to_json(bool with_timing) const {
    Json cs = Json::array();
    for (const auto& c : checks)
        cs.push_back({{"name", c.name},
                      {"suite", c.suite},
                      {"identity", c.identity},
                      {"inputs_digest", c.inputs_digest},
                      {"residual", std::isfinite(c.residual) ? Json(c.residual) : Json(nullptr)},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass},
                      {"detail", c.detail}});
    Json out{{"schema", kReportSchema},
             {"seed", seed},
             {"suites", suites},
             {"checks", cs},
             {"summary", {{"total", checks.size()}, {"failed", failed()}}},
             {"pass", pass()}};
    if (with_timing) {
        Json per = Json::object();
        for (const auto& c : checks) per[c.name] = c.seconds;
        out["timing"] = {{"total_seconds", total_seconds}, {"checks", per}};
    }
    return out;
}

std::string Report::to_csv() const {
    std::ostringstream os;
    os << std::setprecision(17) << "name,suite,residual,tolerance,pass\n";
    for (const auto& c : checks)
        os << c.name << ',' << c.suite << ',' << c.residual << ',' << c.tolerance << ',' << (c.pass ? 1 : 0) << '\n';
    return os.str();
}

Report run_suite(SuiteConfig cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    std::vector<const CheckSpec*> selected;
    for (const auto& suite : cfg.suites)
        for (const auto& c : check_registry())
            if (c.suite == suite) selected.push_back(&c);

    Report rep;
    rep.seed = cfg.seed;
    rep.suites = cfg.suites;
    rep.checks.resize(selected.size());
    parallel_for(selected.size(), [&](std::size_t i) {
        const CheckSpec& spec = *selected[i];
        CheckRecord& rec = rep.checks[i];
        rec.name = spec.name;
        rec.suite = spec.suite;
        rec.identity = spec.identity;
        CheckContext ctx{std::mt19937_64(cfg.seed ^ fnv1a(spec.name)), cfg};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            CheckOutcome o = spec.run(ctx);
            rec.residual = o.residual;
            rec.tolerance = o.tolerance;
            rec.pass = std::isfinite(o.residual) && o.residual <= o.tolerance && o.extra_ok;
            rec.detail = o.detail;
            rec.inputs_digest = fnv1a_hex(o.inputs.dump());
        } catch (const std::exception& e) {
            rec.residual = std::numeric_limits<double>::infinity();
            rec.pass = false;
            rec.detail = e.what();
            rec.inputs_digest = fnv1a_hex(spec.name);
        }
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });
    rep.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

} // namespace hqcalc
