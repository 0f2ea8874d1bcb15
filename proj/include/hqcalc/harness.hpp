#pragma once

/**
 * @file harness.hpp
 * @brief Verification suites and their reports.
 *
 * Every check draws its instances from its own generator, seeded from the
 * run seed and the check name, so reports do not depend on scheduling or
 * on the thread count. Report layout ("schema": "hqcalc-report/1"):
 *   {"schema", "seed", "suites", "checks": [{"name", "suite", "identity",
 *    "inputs_digest", "residual", "tolerance", "pass", "detail"}],
 *    "summary": {"total", "failed"}, "pass", "timing": {...}}
 */

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hqcalc/io.hpp"

namespace hqcalc {

inline constexpr const char* kReportSchema = "hqcalc-report/1";

struct ToleranceLadder {
    double finite_difference{1e-5};
    double quadrature{1e-7};
    double linear{1e-10};
};

struct SuiteConfig {
    std::uint64_t seed{42};
    std::vector<std::string> suites{"algebra", "resolvent", "independence", "product", "rational", "hinf"};
    ToleranceLadder tolerances{};
    /// Extra operators and functions appended to the built-in catalogs.
    std::vector<Json> operators;
    std::vector<Json> functions;
    int angle_samples{3};
    int unit_samples{3};
    /// Random instances per linear-algebra property check.
    int trials{50};
};

/// Known suite names, in run order.
const std::vector<std::string>& suite_names();

/// Reads a configuration file; relative operator/function paths are taken
/// relative to the file. Throws ConfigError.
SuiteConfig load_suite_config(const std::string& path);
/// Throws ConfigError for unknown suites, non-positive or non-descending
/// tolerances and non-positive sample counts. Expands "all".
void validate(SuiteConfig& cfg);

struct CheckRecord {
    std::string name;
    std::string suite;
    std::string identity;
    std::string inputs_digest;
    double residual{0};
    double tolerance{0};
    bool pass{false};
    std::string detail;
    double seconds{0};
};

struct Report {
    std::uint64_t seed{0};
    std::vector<std::string> suites;
    std::vector<CheckRecord> checks;
    double total_seconds{0};

    bool pass() const;
    std::size_t failed() const;
    /// Full report; `with_timing = false` drops the timing block.
    Json to_json(bool with_timing = true) const;
    /// name,suite,residual,tolerance,pass
    std::string to_csv() const;
};

/// What a check function hands back.
struct CheckOutcome {
    double residual{0};
    double tolerance{0};
    /// Extra conditions (negative tests, convergence orders); all must hold.
    bool extra_ok{true};
    std::string detail;
    Json inputs = Json::object();
};

struct CheckContext {
    std::mt19937_64 rng;
    const SuiteConfig& cfg;
};

struct CheckSpec {
    std::string name;
    std::string suite;
    std::string identity;
    std::function<CheckOutcome(CheckContext&)> run;
};

/// Every invariant the suites are required to cover.
const std::vector<std::string>& invariant_manifest();
/// All implemented checks, in report order.
const std::vector<CheckSpec>& check_registry();

/// Runs the selected suites; checks execute concurrently, records are merged
/// in registry order. Failures are recorded, never thrown.
Report run_suite(SuiteConfig cfg);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& data);

} // namespace hqcalc
