#include "hqcalc/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hqcalc {

namespace {

double finite_number(const Json& j, const char* what) {
    if (!j.is_number()) throw ConfigError(std::string(what) + ": expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw ConfigError(std::string(what) + ": non-finite value");
    return x;
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::vector<double> number_array(const Json& j, const char* what) {
    if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(finite_number(x, what));
    return out;
}

Polynomial polynomial_from_json(const Json& j, const char* what) {
    auto c = number_array(j, what);
    if (c.empty()) throw ConfigError(std::string(what) + ": empty coefficient list");
    return Polynomial(std::move(c));
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("M: expected a nonempty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto row = number_array(j[static_cast<std::size_t>(r)], "M");
        if (static_cast<Eigen::Index>(row.size()) != n) throw ConfigError("M: matrix must be square");
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
    }
    return m;
}

} // namespace

Json to_json(const Quat& q) { return Json::array({q.s0, q.s1, q.s2, q.s3}); }

Quat quat_from_json(const Json& j) {
    const auto v = number_array(j, "quaternion");
    if (v.size() != 4) throw ConfigError("quaternion: expected [s0, s1, s2, s3]");
    return {v[0], v[1], v[2], v[3]};
}

Json to_json(const Unit& u) { return Json::array({u[0], u[1], u[2]}); }

Unit unit_from_json(const Json& j) {
    const auto v = number_array(j, "unit");
    if (v.size() != 3) throw ConfigError("unit: expected [j1, j2, j3]");
    try {
        return Unit::from(v[0], v[1], v[2]);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

Unit parse_unit(const std::string& s) {
    std::stringstream ss(s);
    std::string item;
    Json arr = Json::array();
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            arr.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--J expects \"j1,j2,j3\"");
        }
    }
    return unit_from_json(arr);
}

CommutingOperator operator_from_json(const Json& j) {
    const std::string kind = field(j, "kind").get<std::string>();
    try {
        if (kind == "diagonal") {
            std::vector<Quat> entries;
            for (const auto& e : field(j, "entries")) entries.push_back(quat_from_json(e));
            if (entries.empty()) throw ConfigError("diagonal operator needs at least one entry");
            return build_diagonal(entries);
        }
        if (kind == "poly_family") {
            const auto M = matrix_from_json(field(j, "M"));
            const auto& p = field(j, "p");
            if (!p.is_array() || p.size() != 4) throw ConfigError("poly_family: \"p\" needs four polynomials");
            std::array<Polynomial, 4> polys;
            for (std::size_t i = 0; i < 4; ++i) polys[i] = polynomial_from_json(p[i], "p");
            return build_poly_family(M, polys);
        }
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("operator: ") + e.what());
    }
    throw ConfigError("operator kind must be \"diagonal\" or \"poly_family\"");
}

CertifiedFunction function_from_json(const Json& j) {
    IntrinsicRational r;
    std::optional<FunctionClass> tag;
    try {
        const std::string kind = field(j, "kind").get<std::string>();
        if (kind == "rational") {
            r.p = polynomial_from_json(field(j, "p"), "p");
            r.q = j.contains("q") ? polynomial_from_json(j["q"], "q") : Polynomial{1.0};
        } else if (kind == "regularizer") {
            const int n = field(j, "n").get<int>();
            if (n < 1) throw ConfigError("regularizer: n must be positive");
            r = {Polynomial::monomial(n), Polynomial::binomial_power(1.0, 1.0, 2 * n - 1)};
        } else if (kind == "monomial") {
            const int k = field(j, "degree").get<int>();
            if (k < 0) throw ConfigError("monomial: degree must be nonnegative");
            r = {Polynomial::monomial(k), Polynomial{1.0}};
        } else {
            throw ConfigError("function kind must be rational, regularizer or monomial");
        }
        if (j.contains("class")) tag = function_class_from_string(j["class"].get<std::string>());
        const double theta = j.contains("theta") ? finite_number(j["theta"], "theta") : kDefaultTheta;
        const Quat coeff = j.contains("coeff") ? quat_from_json(j["coeff"]) : Quat(1.0);
        Side side = Side::left;
        if (j.contains("side")) {
            const auto s = j["side"].get<std::string>();
            if (s == "right") side = Side::right;
            else if (s != "left") throw ConfigError("side must be left or right");
        }
        StemFunction f(r, theta, side, coeff);
        if (tag) return {f, certify(f, *tag)};
        for (auto c : {FunctionClass::PsiQ, FunctionClass::Psi, FunctionClass::F}) {
            try {
                return {f, certify(f, c)};
            } catch (const HypothesisViolation&) {
            }
        }
        throw HypothesisViolation("function fits none of PsiQ, Psi, F");
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("function: ") + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("function: ") + e.what());
    }
}

Json to_json(const QMat& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

QMat qmat_from_json(const Json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw ConfigError("matrix: expected rows of quaternions");
    const auto n = static_cast<Eigen::Index>(j.size());
    const auto m = static_cast<Eigen::Index>(j[0].size());
    QMat out(n, m);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (static_cast<Eigen::Index>(row.size()) != m) throw ConfigError("matrix: ragged rows");
        for (Eigen::Index c = 0; c < m; ++c) out.set(r, c, quat_from_json(row[static_cast<std::size_t>(c)]));
    }
    return out;
}

Json to_json(const DecayCertificate& c) {
    return {{"class", to_string(c.class_tag)}, {"alpha", c.alpha}, {"C", c.C}};
}

Json to_json(const CalculusResult& r) {
    Json out{{"value", to_json(r.value)}, {"est_error", r.est_error}, {"nodes", r.nodes}};
    out["form_gap"] = r.form_gap ? Json(*r.form_gap) : Json(nullptr);
    if (r.plan) {
        const auto& p = *r.plan;
        auto diag = [&](const char* k) {
            const auto it = r.diagnostics.find(k);
            return it == r.diagnostics.end() ? Json(nullptr) : Json(it->second);
        };
        out["plan"] = {{"phi", p.phi},   {"J", to_json(p.J)},          {"eps", p.eps},
                       {"R", p.R},       {"tol", p.tol},               {"nodes", r.nodes},
                       {"est_tail", p.est_tail}, {"est_quad_err", diag("est_quad_err")}};
    }
    Json d = Json::object();
    for (const auto& [k, v] : r.diagnostics) d[k] = v;
    out["diagnostics"] = d;
    return out;
}

Json to_json(const SpectrumReport& s) {
    Json spheres = Json::array();
    for (const auto& sp : s.spheres) spheres.push_back({{"center", sp.center}, {"radius", sp.radius}});
    Json out{{"spheres", spheres}, {"max_arg", s.max_arg}};
    if (s.rho_margin) out["rho_margin"] = *s.rho_margin;
    if (s.inside) out["inside"] = *s.inside;
    return out;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace hqcalc
