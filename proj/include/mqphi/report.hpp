#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eval_config.hpp"

namespace mqphi {

// One comparison between a production value and an oracle value. The pass
// flag is always equivalent to abs_error <= tolerance; inequality checks
// encode their slack the same way (violation against allowance).
struct CheckRecord {
    std::string name;
    nlohmann::json inputs = nlohmann::json::object();
    double production = 0.0;
    double oracle = 0.0;
    double abs_error = 0.0;
    double rel_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ReportSummary {
    std::int64_t checks = 0;
    std::int64_t passed = 0;
    std::int64_t failed = 0;
};

struct Report {
    int schema_version = 1;
    std::string suite;
    nlohmann::json config = nlohmann::json::object();
    std::vector<CheckRecord> checks;

    ReportSummary summary() const {
        ReportSummary s;
        s.checks = static_cast<std::int64_t>(checks.size());
        for (const auto& c : checks) (c.pass ? s.passed : s.failed)++;
        return s;
    }

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Relative-with-floor comparison used by every equality check: pass when
// |lhs - rhs| <= max(rel_tol * max(|lhs|, |rhs|), abs_floor). The recorded
// tolerance is the evaluated right-hand side, so pass <=> abs_error <= tol
// holds literally in the serialized record.
inline CheckRecord make_check(std::string name, nlohmann::json inputs, double production,
                              double oracle, double rel_tol, double abs_floor) {
    CheckRecord c;
    c.name = std::move(name);
    c.inputs = std::move(inputs);
    c.production = production;
    c.oracle = oracle;
    c.abs_error = std::fabs(production - oracle);
    double scale = std::max(std::fabs(production), std::fabs(oracle));
    c.rel_error = scale > 0.0 ? c.abs_error / scale : 0.0;
    c.tolerance = std::max(rel_tol * scale, abs_floor);
    c.pass = c.abs_error <= c.tolerance;
    return c;
}

// Inequality check: value must not fall below lower - allowance. Recorded
// as violation-against-allowance so the pass invariant stays uniform.
inline CheckRecord make_bound_check(std::string name, nlohmann::json inputs,
                                    double value, double lower, double allowance) {
    CheckRecord c;
    c.name = std::move(name);
    c.inputs = std::move(inputs);
    c.production = value;
    c.oracle = lower;
    c.abs_error = std::max(0.0, lower - value);
    double scale = std::max(std::fabs(value), std::fabs(lower));
    c.rel_error = scale > 0.0 ? c.abs_error / scale : 0.0;
    c.tolerance = allowance;
    c.pass = c.abs_error <= c.tolerance;
    return c;
}

inline void to_json(nlohmann::json& j, const CheckRecord& c) {
    j = nlohmann::json{{"name", c.name},           {"inputs", c.inputs},
                       {"production", c.production}, {"oracle", c.oracle},
                       {"abs_error", c.abs_error},   {"rel_error", c.rel_error},
                       {"tolerance", c.tolerance},   {"pass", c.pass}};
}

inline void from_json(const nlohmann::json& j, CheckRecord& c) {
    j.at("name").get_to(c.name);
    c.inputs = j.at("inputs");
    j.at("production").get_to(c.production);
    j.at("oracle").get_to(c.oracle);
    j.at("abs_error").get_to(c.abs_error);
    j.at("rel_error").get_to(c.rel_error);
    j.at("tolerance").get_to(c.tolerance);
    j.at("pass").get_to(c.pass);
}

inline void to_json(nlohmann::json& j, const Report& r) {
    ReportSummary s = r.summary();
    j = nlohmann::json{{"schema_version", r.schema_version},
                       {"suite", r.suite},
                       {"config", r.config},
                       {"checks", r.checks},
                       {"summary",
                        {{"checks", s.checks}, {"passed", s.passed}, {"failed", s.failed}}}};
}

inline void from_json(const nlohmann::json& j, Report& r) {
    j.at("schema_version").get_to(r.schema_version);
    j.at("suite").get_to(r.suite);
    r.config = j.at("config");
    r.checks = j.at("checks").get<std::vector<CheckRecord>>();
}

inline std::string report_to_json(const Report& r) {
    nlohmann::json j = r;
    return j.dump(2) + "\n";
}

inline Report report_from_json(const std::string& text) {
    return nlohmann::json::parse(text).get<Report>();
}

namespace detail {

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

}  // namespace detail

// Flat check table; inputs are folded into one k=v;k=v field so the column
// set is fixed across suites.
inline std::string report_to_csv(const Report& r) {
    std::string out = "suite,check,inputs,production,oracle,abs_error,rel_error,tolerance,pass\r\n";
    for (const auto& c : r.checks) {
        std::string inputs;
        for (auto it = c.inputs.begin(); it != c.inputs.end(); ++it) {
            if (!inputs.empty()) inputs += ';';
            inputs += it.key();
            inputs += '=';
            if (it->is_number_float())
                inputs += detail::format_g17(it->get<double>());
            else
                inputs += it->dump();
        }
        out += detail::csv_escape(r.suite);
        out += ',';
        out += detail::csv_escape(c.name);
        out += ',';
        out += detail::csv_escape(inputs);
        out += ',';
        out += detail::format_g17(c.production);
        out += ',';
        out += detail::format_g17(c.oracle);
        out += ',';
        out += detail::format_g17(c.abs_error);
        out += ',';
        out += detail::format_g17(c.rel_error);
        out += ',';
        out += detail::format_g17(c.tolerance);
        out += ',';
        out += c.pass ? "true" : "false";
        out += "\r\n";
    }
    return out;
}

}  // namespace mqphi
