#include "hqcalc/contour.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "hqcalc/parallel.hpp"

namespace hqcalc {

double kernel_prefactor(KernelKind k) {
    return k == KernelKind::s_resolvent ? 1.0 / (2.0 * std::numbers::pi) : -1.0 / std::numbers::pi;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order) {
    std::vector<double> x(static_cast<std::size_t>(order)), w(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        // Newton on P_n from the Chebyshev-like initial guess
        double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[static_cast<std::size_t>(i)] = -z;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

namespace {

struct Exponents {
    double inner; // integrand ~ t^{inner - 1} near 0
    double outer; // integrand ~ t^{-outer - 1} near infinity
    double scale; // |prefactor| * 2 * K * C
    int kernel_power;
};

Exponents tail_exponents(const DecayCertificate& cert, const SectorCertificate& rc, KernelKind kernel) {
    double a0 = 0, ainf = 0;
    switch (cert.class_tag) {
    case FunctionClass::PsiQ: a0 = 1 + cert.alpha; ainf = cert.alpha; break;
    case FunctionClass::Psi: a0 = cert.alpha; ainf = cert.alpha; break;
    case FunctionClass::F: throw DomainError("F-class functions need regularisation before quadrature");
    }
    const int k = kernel == KernelKind::s_resolvent ? 1 : 2;
    const double K = kernel == KernelKind::s_resolvent ? rc.C_theta : rc.C_theta_Q;
    Exponents e{a0 - k + 1, ainf + k - 1, std::abs(kernel_prefactor(kernel)) * 2.0 * K * cert.C, k};
    if (!(e.inner > 0) || !(e.outer > 0))
        throw DomainError("contour integral does not converge for this kernel and function class");
    return e;
}

/// Smooth majorant of |prefactor kernel f| per unit x = ln t, both rays.
double bound_profile(const Exponents& e, const DecayCertificate& cert, double x) {
    const double t = std::exp(x);
    DecayCertificate unit = cert;
    unit.C = 1.0;
    return e.scale * unit.bound(t) * std::pow(t, 1 - e.kernel_power);
}

double gl_panel(const std::function<double(double)>& g, double a, double b,
                const std::vector<double>& x, const std::vector<double>& w) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * g(mid + half * x[i]);
    return s * half;
}

std::vector<std::pair<double, double>> split_uniform(double a, double b, std::size_t count) {
    std::vector<std::pair<double, double>> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.emplace_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(count),
                         a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(count));
    return out;
}

void append_panel_nodes(std::vector<ContourNode>& out, double phi, const Unit& J, double a, double b,
                        const std::vector<double>& x, const std::vector<double>& w) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const Quat up = J.point(std::cos(phi), std::sin(phi));
    const Quat down = J.point(std::cos(phi), -std::sin(phi));
    const Quat wu = qmul(J.q(), up);
    const Quat wd = -qmul(J.q(), down);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = std::exp(mid + half * x[i]);
        out.push_back({t * up, (t * w[i] * half) * wu});
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = std::exp(mid + half * x[i]);
        out.push_back({t * down, (t * w[i] * half) * wd});
    }
}

/// Per-entry compensated sum of quaternionic matrices.
class KahanAccumulator {
public:
    KahanAccumulator(Eigen::Index rows, Eigen::Index cols) : sum_(rows, cols), comp_(rows, cols) {}

    void add(const QMat& x) {
        for (int i = 0; i < 4; ++i) {
            const Eigen::ArrayXXd y = x.component(i).array() - comp_.component(i).array();
            const Eigen::ArrayXXd t = sum_.component(i).array() + y;
            comp_.component(i) = ((t - sum_.component(i).array()) - y).matrix();
            sum_.component(i) = t.matrix();
        }
    }
    const QMat& value() const { return sum_; }

private:
    QMat sum_, comp_;
};

} // namespace

std::pair<double, double> tail_bounds(const DecayCertificate& cert, const SectorCertificate& rc,
                                      KernelKind kernel, double eps, double R) {
    const auto e = tail_exponents(cert, rc, kernel);
    return {e.scale * std::pow(eps, e.inner) / e.inner, e.scale * std::pow(R, -e.outer) / e.outer};
}

std::vector<ContourNode> ContourPlan::nodes() const {
    const auto [x, w] = gauss_legendre(order);
    std::vector<ContourNode> out;
    out.reserve(panels.size() * 2 * x.size());
    for (const auto& [a, b] : panels) append_panel_nodes(out, phi, J, a, b, x, w);
    return out;
}

ContourPlan plan_contour(const DecayCertificate& cert, const SectorCertificate& rc, double phi,
                         const Unit& J, double tol, KernelKind kernel, PlanOptions opt) {
    if (!(tol > 0)) throw DomainError("tolerance must be positive");
    if (!(phi > 0 && phi < std::numbers::pi)) throw DomainError("phi must lie in (0, pi)");
    if (opt.order < 2) throw DomainError("quadrature order must be at least 2");
    const auto e = tail_exponents(cert, rc, kernel);

    ContourPlan plan;
    plan.phi = phi;
    plan.J = J;
    plan.tol = tol;
    plan.kernel = kernel;
    plan.order = opt.order;
    plan.max_nodes = opt.max_nodes;

    if (e.scale > 0) {
        plan.eps = std::pow(tol * e.inner / (4.0 * e.scale), 1.0 / e.inner);
        plan.R = std::pow(4.0 * e.scale / (tol * e.outer), 1.0 / e.outer);
    } else {
        plan.eps = 1.0;
        plan.R = 1.0;
    }
    // degenerate tolerances still get a nonempty interval around t = 1
    plan.eps = std::min(plan.eps, 0.5);
    plan.R = std::max(plan.R, 2.0);
    const auto [ti, to] = tail_bounds(cert, rc, kernel, plan.eps, plan.R);
    plan.tail_inner = ti;
    plan.tail_outer = to;
    plan.est_tail = ti + to;

    const double xa = std::log(plan.eps), xb = std::log(plan.R);
    const auto [x, w] = gauss_legendre(opt.order);
    auto g = [&](double s) { return bound_profile(e, cert, s); };
    std::size_t count = 1;
    for (;;) {
        if (4 * count * x.size() > opt.max_nodes)
            throw UnreachableTolerance("node budget exhausted while planning the contour");
        double coarse = 0, fine = 0;
        for (const auto& [a, b] : split_uniform(xa, xb, count)) {
            const double m = 0.5 * (a + b);
            coarse += gl_panel(g, a, b, x, w);
            fine += gl_panel(g, a, m, x, w) + gl_panel(g, m, b, x, w);
        }
        if (std::abs(fine - coarse) < tol / 2) break;
        count *= 2;
    }
    plan.panels = split_uniform(xa, xb, count);
    return plan;
}

ContourResult contour_integrate(const ContourPlan& plan, const Kernel& kernel, const StemFunction& f,
                                Side side, double prefactor) {
    const auto [gx, gw] = gauss_legendre(plan.order);
    ContourResult res;
    Eigen::Index rows = -1, cols = -1;

    auto summand = [&](const ContourNode& node) -> QMat {
        QMat k;
        try {
            k = kernel(node.s);
        } catch (const SpectralPoint& e) {
            throw KernelSingular(e.what());
        }
        const auto c = decompose(node.s);
        const Quat fv = f.on_plane({c.u, c.v}, c.J);
        QMat out = side == Side::left ? k * qmul(node.weight, fv) : qmul(fv, node.weight) * k;
        if (!out.all_finite()) throw NonFinite("non-finite integrand on the contour");
        return out;
    };

    // one rule over [a, b] on both rays
    auto rule = [&](double a, double b) -> QMat {
        std::vector<ContourNode> nodes;
        nodes.reserve(2 * gx.size());
        append_panel_nodes(nodes, plan.phi, plan.J, a, b, gx, gw);
        std::vector<QMat> values(nodes.size());
        parallel_for(nodes.size(), [&](std::size_t i) { values[i] = summand(nodes[i]); });
        res.nodes += nodes.size();
        if (res.nodes > plan.max_nodes)
            throw UnreachableTolerance("node budget exhausted during contour refinement");
        QMat total = values.front();
        for (std::size_t i = 1; i < values.size(); ++i) total += values[i];
        if (rows < 0) {
            rows = total.rows();
            cols = total.cols();
        }
        return total;
    };

    const double width = std::log(plan.R) - std::log(plan.eps);
    const double abs_pref = std::abs(prefactor);
    std::optional<KahanAccumulator> acc;

    // depth-first, left to right: the accepted panels are folded in x order
    struct Pending {
        double a, b;
        QMat coarse;
        int depth;
    };
    constexpr int kMaxDepth = 40;
    for (const auto& [pa, pb] : plan.panels) {
        std::vector<Pending> stack;
        stack.push_back({pa, pb, rule(pa, pb), 0});
        while (!stack.empty()) {
            Pending cur = std::move(stack.back());
            stack.pop_back();
            const double m = 0.5 * (cur.a + cur.b);
            QMat left = rule(cur.a, m);
            QMat right = rule(m, cur.b);
            const double err = abs_pref * ((left + right) - cur.coarse).frobenius();
            const double local_tol = 0.5 * plan.tol * (cur.b - cur.a) / width;
            if (err <= local_tol || cur.depth >= kMaxDepth) {
                if (!acc) acc.emplace(rows, cols);
                acc->add(left);
                acc->add(right);
                res.est_quad_err += err;
                ++res.panels;
            } else {
                stack.push_back({m, cur.b, std::move(right), cur.depth + 1});
                stack.push_back({cur.a, m, std::move(left), cur.depth + 1});
            }
        }
    }
    res.value = acc ? acc->value() : QMat();
    res.value *= prefactor;
    res.est_tail = plan.est_tail;
    return res;
}

} // namespace hqcalc
