// hqcalc: S-spectrum, functional calculi and verification suites from the
// command line. Exit status: 0 ok, 1 numerical failure, 2 usage error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"

#include "hqcalc/harness.hpp"

using namespace hqcalc;

namespace {

constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct Common {
    bool json{false};
};

void print_matrix(std::ostream& os, const QMat& m) {
    os << std::setprecision(12);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "  " : "") << m(i, j);
        os << '\n';
    }
}

int cmd_spectrum(const Common& c, const std::string& op_path, std::optional<double> theta) {
    const auto T = operator_from_json(read_json_file(op_path));
    std::optional<Sector<double>> sector;
    if (theta) sector.emplace(*theta);
    const auto rep = s_spectrum(T, sector);
    if (c.json) {
        std::cout << to_json(rep).dump() << '\n';
        return 0;
    }
    std::cout << "S-spectrum (" << rep.spheres.size() << " spheres), max |Arg| = " << rep.max_arg << '\n';
    for (const auto& s : rep.spheres) std::cout << "  center " << s.center << "  radius " << s.radius << '\n';
    if (rep.inside) std::cout << "inside sector: " << (*rep.inside ? "yes" : "no") << '\n';
    return 0;
}

struct ApplyArgs {
    std::string op_path, fun_path, calculus{"s"}, side, J;
    int regularizer_n{0};
    std::optional<double> phi;
    double tol{1e-7};
    std::size_t max_nodes{std::size_t{1} << 20};
};

int cmd_apply(const Common& c, const ApplyArgs& a) {
    const auto T = operator_from_json(read_json_file(a.op_path));
    const auto f = function_from_json(read_json_file(a.fun_path));
    CalcOptions opt;
    opt.phi = a.phi;
    opt.tol = a.tol;
    opt.max_nodes = a.max_nodes;
    if (!a.J.empty()) opt.J = parse_unit(a.J);
    if (!a.side.empty()) opt.side = a.side == "right" ? Side::right : Side::left;

    CalculusResult r;
    if (a.calculus == "s") {
        r = s_calc(T, f, opt);
    } else if (a.calculus == "harmonic") {
        r = d_calc(T, f, opt);
    } else {
        HinfOptions h;
        h.calc = opt;
        h.regularizer_n = a.regularizer_n;
        r = a.calculus == "hinf-s" ? hinf_s(T, f, h) : hinf_d(T, f, h);
    }
    if (c.json) {
        Json out = to_json(r);
        out["certificate"] = to_json(f.cert);
        out["calculus"] = a.calculus;
        std::cout << out.dump() << '\n';
        return 0;
    }
    std::cout << "calculus " << a.calculus << ", f in " << to_string(f.cert.class_tag) << " (alpha "
              << f.cert.alpha << ", C " << f.cert.C << ")\n";
    print_matrix(std::cout, r.value);
    std::cout << "est_error " << r.est_error << ", nodes " << r.nodes;
    if (r.form_gap) std::cout << ", form_gap " << *r.form_gap;
    std::cout << '\n';
    return 0;
}

struct VerifyArgs {
    std::vector<std::string> suites;
    std::optional<std::uint64_t> seed;
    std::string config, report, csv;
};

int cmd_verify(const Common& c, const VerifyArgs& a) {
    SuiteConfig cfg = a.config.empty() ? SuiteConfig{} : load_suite_config(a.config);
    if (!a.suites.empty()) cfg.suites = a.suites;
    if (a.seed) cfg.seed = *a.seed;
    validate(cfg);
    const Report rep = run_suite(cfg);
    const Json j = rep.to_json();
    if (!a.report.empty()) {
        std::ofstream out(a.report);
        if (!out) throw ConfigError("cannot write " + a.report);
        out << j.dump(2) << '\n';
    }
    if (!a.csv.empty()) {
        std::ofstream out(a.csv);
        if (!out) throw ConfigError("cannot write " + a.csv);
        out << rep.to_csv();
    }
    if (c.json) {
        std::cout << j.dump() << '\n';
    } else {
        for (const auto& r : rep.checks)
            std::cout << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(34) << r.name << " residual "
                      << std::setw(12) << r.residual << " tol " << r.tolerance
                      << (r.detail.empty() ? "" : "  [" + r.detail + "]") << '\n';
        std::cout << rep.checks.size() - rep.failed() << "/" << rep.checks.size() << " checks passed in "
                  << std::setprecision(3) << rep.total_seconds << " s\n";
    }
    return rep.pass() ? 0 : kExitNumerical;
}

struct PlotArgs {
    std::string op_path, J;
    std::optional<double> theta;
    double rmin{1e-4}, rmax{1e4};
    int per_decade{10};
};

int cmd_plot(const Common& c, const PlotArgs& a) {
    const auto T = operator_from_json(read_json_file(a.op_path));
    const double theta = a.theta.value_or(0.5 * (s_spectrum(T).max_arg + std::numbers::pi));
    const Unit J = a.J.empty() ? Unit::e1() : parse_unit(a.J);
    if (!(a.rmin > 0 && a.rmax > a.rmin) || a.per_decade < 1) throw ConfigError("bad radius range");
    const auto prof = ray_profile(T, theta, J, a.rmin, a.rmax, a.per_decade);
    if (c.json) {
        Json rows = Json::array();
        for (const auto& r : prof)
            rows.push_back({{"radius", r.radius},
                            {"q_norm", r.q_scaled / (r.radius * r.radius)},
                            {"q_scaled", r.q_scaled},
                            {"s_scaled", r.s_scaled}});
        std::cout << Json{{"theta", theta}, {"samples", rows}}.dump() << '\n';
        return 0;
    }
    std::cout << std::setprecision(12) << "radius,q_norm,q_scaled,s_scaled\n";
    for (const auto& r : prof)
        std::cout << r.radius << ',' << r.q_scaled / (r.radius * r.radius) << ',' << r.q_scaled << ','
                  << r.s_scaled << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quaternionic S-functional and harmonic functional calculus"};
    app.require_subcommand(1);
    Common common;
    app.add_flag("--json", common.json, "Machine-readable JSON on stdout");

    std::string spec_op;
    std::optional<double> spec_theta;
    auto* spectrum = app.add_subcommand("spectrum", "S-spectrum of an operator as a list of spheres");
    spectrum->add_option("-T,--operator", spec_op, "Operator JSON file")->required()->check(CLI::ExistingFile);
    spectrum->add_option("--theta", spec_theta, "Report whether the spectrum lies in S_theta");

    ApplyArgs aa;
    auto* apply = app.add_subcommand("apply", "Apply a functional calculus");
    apply->add_option("-T,--operator", aa.op_path, "Operator JSON file")->required()->check(CLI::ExistingFile);
    apply->add_option("-f,--function", aa.fun_path, "Function JSON file")->required()->check(CLI::ExistingFile);
    apply->add_option("--calculus", aa.calculus, "s | harmonic | hinf-s | hinf-harmonic")
        ->check(CLI::IsMember({"s", "harmonic", "hinf-s", "hinf-harmonic"}));
    apply->add_option("--side", aa.side, "Assembly side (intrinsic functions only)")
        ->check(CLI::IsMember({"left", "right"}));
    apply->add_option("--regularizer-n", aa.regularizer_n, "Regulariser power for hinf-* (0: automatic)")
        ->check(CLI::NonNegativeNumber);
    apply->add_option("--phi", aa.phi, "Contour angle (default: midway between spectrum and theta)");
    apply->add_option("--J", aa.J, "Imaginary unit of the integration slice, \"j1,j2,j3\"");
    apply->add_option("--tol", aa.tol, "Absolute tolerance of each contour integral")->check(CLI::PositiveNumber);
    apply->add_option("--max-nodes", aa.max_nodes, "Node budget per integral")->check(CLI::PositiveNumber);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run verification suites");
    verify->add_option("--suite", va.suites, "algebra | resolvent | independence | product | rational | hinf | all")
        ->check(CLI::IsMember({"all", "algebra", "resolvent", "independence", "product", "rational", "hinf"}));
    verify->add_option("--seed", va.seed, "Seed for instance generation");
    verify->add_option("--config", va.config, "Suite configuration JSON")->check(CLI::ExistingFile);
    verify->add_option("--report", va.report, "Write the JSON report here");
    verify->add_option("--csv", va.csv, "Write a CSV residual table here");

    PlotArgs pa;
    auto* plot = app.add_subcommand("plot-data", "CSV of |s| against ||Q_{c,s}^{-1}(T)|| along the rays |Arg s| = theta");
    plot->add_option("-T,--operator", pa.op_path, "Operator JSON file")->required()->check(CLI::ExistingFile);
    plot->add_option("--theta", pa.theta, "Ray angle (default: midway between spectrum and pi)");
    plot->add_option("--J", pa.J, "Imaginary unit, \"j1,j2,j3\"");
    plot->add_option("--rmin", pa.rmin, "Smallest radius");
    plot->add_option("--rmax", pa.rmax, "Largest radius");
    plot->add_option("--per-decade", pa.per_decade, "Samples per decade");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*spectrum) return cmd_spectrum(common, spec_op, spec_theta);
        if (*apply) return cmd_apply(common, aa);
        if (*verify) return cmd_verify(common, va);
        if (*plot) return cmd_plot(common, pa);
    } catch (const ConfigError& e) {
        std::cerr << "hqcalc: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        if (common.json) std::cout << Json{{"error", e.kind()}, {"message", e.what()}}.dump() << '\n';
        std::cerr << "hqcalc: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
