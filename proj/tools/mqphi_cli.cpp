// Command line front end: single evaluations, parameter sweeps, and the
// cross-validation suites, with CSV or JSON output.
//
// Exit codes: 0 success, 1 verification check failure, 2 usage error,
// 3 domain error, 4 convergence failure.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mqphi/mqphi.hpp"

namespace {

struct ParamSpec {
    std::string name;
    double def = 0.0;
    bool integer = false;
};

struct FunctionSpec {
    std::string name;
    std::vector<ParamSpec> params;
};

const std::vector<FunctionSpec>& function_table() {
    static const std::vector<FunctionSpec> table = {
        {"marcum", {{"m", 1, true}, {"a", 1, false}, {"b", 0, false}}},
        {"phi3",
         {{"b", 1, false}, {"c", 1, false}, {"w", 0, false}, {"z", 0, false}}},
        {"phi3-tilde",
         {{"b", 1, false}, {"c", 1, false}, {"w", 0, false}, {"z", 0, false}}},
        {"nakagami-cdf",
         {{"m", 1, true},
          {"omega1", 1, false},
          {"omega2", 1, false},
          {"rho", 0, false},
          {"r1", 0, false},
          {"r2", 0, false}}},
        {"rayleigh-cdf", {{"rho", 0, false}, {"r1", 0, false}, {"r2", 0, false}}},
        {"wishart-cdf",
         {{"m", 2, true},
          {"eta", 0, false},
          {"mu", 0, false},
          {"trsiginv", 2, false},
          {"lambda", 0, false}}}};
    return table;
}

class usage_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

const FunctionSpec& lookup_function(const std::string& name) {
    for (const auto& f : function_table())
        if (f.name == name) return f;
    throw usage_error("unknown function '" + name + "'");
}

double parse_number(const std::string& text) {
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw usage_error("malformed number '" + text + "'");
    }
    if (used != text.size()) throw usage_error("malformed number '" + text + "'");
    return v;
}

std::pair<std::string, std::string> split_assignment(const std::string& arg) {
    auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0)
        throw usage_error("expected name=value, got '" + arg + "'");
    return {arg.substr(0, eq), arg.substr(eq + 1)};
}

const ParamSpec& lookup_param(const FunctionSpec& fn, const std::string& name) {
    for (const auto& p : fn.params)
        if (p.name == name) return p;
    throw usage_error("function '" + fn.name + "' has no parameter '" + name + "'");
}

void check_integer(const ParamSpec& spec, double v) {
    if (spec.integer && v != std::floor(v))
        throw usage_error("parameter '" + spec.name + "' must be an integer");
}

double evaluate_function(const FunctionSpec& fn,
                         const std::map<std::string, double>& vals,
                         const mqphi::EvalConfig& cfg) {
    auto get = [&](const char* name) { return vals.at(name); };
    if (fn.name == "marcum")
        return mqphi::marcum_q(static_cast<int>(get("m")), get("a"), get("b"), cfg);
    if (fn.name == "phi3")
        return mqphi::phi3_series({get("b"), get("c"), get("w"), get("z")}, cfg);
    if (fn.name == "phi3-tilde")
        return mqphi::phi3_tilde_series({get("b"), get("c"), get("w"), get("z")}, cfg);
    if (fn.name == "nakagami-cdf") {
        mqphi::NakagamiBivariate model(static_cast<int>(get("m")), get("omega1"),
                                       get("omega2"), get("rho"));
        return mqphi::bivariate_nakagami_cdf(model, get("r1"), get("r2"), cfg);
    }
    if (fn.name == "rayleigh-cdf")
        return mqphi::bivariate_rayleigh_cdf(get("rho"), get("r1"), get("r2"), cfg);
    auto model = mqphi::WishartModel::from_invariants(
        static_cast<int>(get("m")), get("eta"), get("mu"), get("trsiginv"));
    return mqphi::wishart_min_eig_cdf_phi3(model, get("lambda"), cfg);
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

// Fixed parameters stay single-valued; swept parameters expand lo:hi:n
// inclusively. Row order is the nested iteration of the function's own
// parameter order, so reruns are byte-identical.
std::vector<SweepAxis> build_axes(const FunctionSpec& fn,
                                  const std::vector<std::string>& args) {
    std::map<std::string, std::vector<double>> given;
    for (const auto& arg : args) {
        auto [name, value] = split_assignment(arg);
        const ParamSpec& spec = lookup_param(fn, name);
        std::vector<double> vals;
        auto c1 = value.find(':');
        if (c1 == std::string::npos) {
            double v = parse_number(value);
            check_integer(spec, v);
            vals.push_back(v);
        } else {
            auto c2 = value.find(':', c1 + 1);
            if (c2 == std::string::npos)
                throw usage_error("sweep must be lo:hi:count, got '" + value + "'");
            double lo = parse_number(value.substr(0, c1));
            double hi = parse_number(value.substr(c1 + 1, c2 - c1 - 1));
            double cnt = parse_number(value.substr(c2 + 1));
            if (cnt < 1 || cnt != std::floor(cnt) || cnt > 100000)
                throw usage_error("sweep count must be a positive integer");
            int n = static_cast<int>(cnt);
            for (int i = 0; i < n; ++i) {
                double v = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
                check_integer(spec, v);
                vals.push_back(v);
            }
        }
        if (!given.emplace(name, std::move(vals)).second)
            throw usage_error("parameter '" + name + "' given twice");
    }
    std::vector<SweepAxis> axes;
    for (const auto& p : fn.params) {
        auto it = given.find(p.name);
        if (it != given.end())
            axes.push_back({p.name, it->second});
        else
            axes.push_back({p.name, {p.def}});
    }
    return axes;
}

struct GlobalOptions {
    std::optional<double> tol;
    std::optional<int> max_terms;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> samples;
    std::string out;
    std::string format;
};

mqphi::EvalConfig make_config(const GlobalOptions& g) {
    mqphi::EvalConfig cfg;
    if (g.tol) cfg.rel_tol = *g.tol;
    if (g.max_terms) cfg.max_terms = *g.max_terms;
    if (g.seed) cfg.seed = *g.seed;
    if (g.samples) cfg.mc_samples = *g.samples;
    return cfg;
}

void write_output(const GlobalOptions& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw usage_error("cannot open output file '" + g.out + "'");
    f << text;
}

int cmd_eval(const std::string& fname, const std::vector<std::string>& args,
             const GlobalOptions& g) {
    const FunctionSpec& fn = lookup_function(fname);
    std::map<std::string, double> vals;
    for (const auto& p : fn.params) vals[p.name] = p.def;
    for (const auto& arg : args) {
        auto [name, value] = split_assignment(arg);
        const ParamSpec& spec = lookup_param(fn, name);
        double v = parse_number(value);
        check_integer(spec, v);
        vals[name] = v;
    }
    double result = evaluate_function(fn, vals, make_config(g));
    write_output(g, format_g17(result) + "\n");
    return 0;
}

int cmd_table(const std::string& fname, const std::vector<std::string>& args,
              const GlobalOptions& g) {
    const FunctionSpec& fn = lookup_function(fname);
    auto axes = build_axes(fn, args);
    mqphi::EvalConfig cfg = make_config(g);

    struct Row {
        std::vector<double> params;
        std::optional<double> value;
        std::string error;
    };
    std::vector<Row> rows;
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
        Row row;
        std::map<std::string, double> vals;
        for (std::size_t k = 0; k < axes.size(); ++k) {
            row.params.push_back(axes[k].values[idx[k]]);
            vals[axes[k].name] = axes[k].values[idx[k]];
        }
        try {
            row.value = evaluate_function(fn, vals, cfg);
        } catch (const mqphi::domain_error& e) {
            row.error = e.what();
        } catch (const mqphi::convergence_error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
        std::size_t k = axes.size();
        while (k > 0) {
            --k;
            if (++idx[k] < axes[k].values.size()) break;
            idx[k] = 0;
            if (k == 0) goto done;
        }
    }
done:
    std::string format = g.format.empty() ? "csv" : g.format;
    if (format == "csv") {
        std::string out;
        for (const auto& ax : axes) {
            out += ax.name;
            out += ',';
        }
        out += "value,error\r\n";
        for (const auto& row : rows) {
            for (double p : row.params) {
                out += format_g17(p);
                out += ',';
            }
            out += row.value ? format_g17(*row.value) : std::string();
            out += ',';
            std::string err = row.error;
            if (err.find_first_of(",\"\n") != std::string::npos) {
                std::string q = "\"";
                for (char ch : err) {
                    if (ch == '"') q += '"';
                    q += ch;
                }
                q += '"';
                err = q;
            }
            out += err;
            out += "\r\n";
        }
        write_output(g, out);
    } else {
        nlohmann::json jrows = nlohmann::json::array();
        for (const auto& row : rows) {
            nlohmann::json jr;
            for (std::size_t k = 0; k < axes.size(); ++k)
                jr[axes[k].name] = row.params[k];
            if (row.value)
                jr["value"] = *row.value;
            else
                jr["error"] = row.error;
            jrows.push_back(std::move(jr));
        }
        nlohmann::json doc{
            {"schema_version", 1}, {"function", fn.name}, {"rows", jrows}};
        write_output(g, doc.dump(2) + "\n");
    }
    return 0;
}

int cmd_verify(const std::vector<std::string>& suites, const GlobalOptions& g,
               int grid) {
    std::vector<std::string> names = suites;
    if (names.empty()) names = mqphi::verify_suite_names();
    for (const auto& n : names) {
        bool known = false;
        for (const auto& k : mqphi::verify_suite_names()) known |= (k == n);
        if (!known) throw usage_error("unknown suite '" + n + "'");
    }

    mqphi::VerifyOptions opt;
    opt.tol = g.tol;
    if (g.seed) opt.seed = *g.seed;
    if (g.samples) opt.samples = *g.samples;
    if (g.max_terms) opt.max_terms = *g.max_terms;
    opt.grid = grid;

    mqphi::Report combined;
    combined.suite = names.size() == 1 ? names[0] : "all";
    bool failed = false;
    for (const auto& name : names) {
        mqphi::Report rep = mqphi::run_verify_suite(name, opt);
        auto s = rep.summary();
        std::fprintf(stderr, "%-14s %5lld checks  %5lld passed  %5lld failed\n",
                     name.c_str(), static_cast<long long>(s.checks),
                     static_cast<long long>(s.passed), static_cast<long long>(s.failed));
        failed |= !rep.all_passed();
        if (names.size() == 1) {
            combined = std::move(rep);
        } else {
            combined.config = rep.config;
            for (auto& c : rep.checks) {
                c.name = name + "/" + c.name;
                combined.checks.push_back(std::move(c));
            }
        }
    }
    std::string format = g.format.empty() ? "json" : g.format;
    write_output(g, format == "csv" ? mqphi::report_to_csv(combined)
                                    : mqphi::report_to_json(combined));
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Marcum tail and confluent series cross-validation tool"};
    app.require_subcommand(1);
    // global options may appear after the subcommand name; let them fall
    // through to the parent parser (inherited by subcommands created below)
    app.fallthrough();

    GlobalOptions g;
    double tol_val = 0.0;
    std::uint64_t seed_val = 0;
    std::int64_t samples_val = 0;
    int max_terms_val = 0;
    auto* tol_opt = app.add_option("--tol", tol_val, "relative tolerance override");
    auto* mt_opt = app.add_option("--max-terms", max_terms_val, "series term budget");
    auto* seed_opt = app.add_option("--seed", seed_val, "Monte Carlo base seed");
    auto* samp_opt = app.add_option("--samples", samples_val, "Monte Carlo sample count");
    app.add_option("--out", g.out, "write output to this path instead of stdout");
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string fname;
    std::vector<std::string> fargs;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate one function value");
    eval_cmd->add_option("function", fname)->required();
    eval_cmd->add_option("params", fargs, "name=value parameters");

    std::string tname;
    std::vector<std::string> targs;
    auto* table_cmd = app.add_subcommand("table", "sweep parameters into a table");
    table_cmd->add_option("function", tname)->required();
    table_cmd->add_option("params", targs, "name=value or name=lo:hi:count");

    std::vector<std::string> suites;
    int grid = 0;
    auto* verify_cmd = app.add_subcommand("verify", "run cross-validation suites");
    verify_cmd->add_option("suites", suites, "suites to run (default: all)");
    verify_cmd->add_option("--grid", grid, "grid points per axis where scalable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        g.tol = tol_opt->count() ? std::optional<double>(tol_val) : std::nullopt;
        g.max_terms = mt_opt->count() ? std::optional<int>(max_terms_val) : std::nullopt;
        g.seed = seed_opt->count() ? std::optional<std::uint64_t>(seed_val) : std::nullopt;
        g.samples =
            samp_opt->count() ? std::optional<std::int64_t>(samples_val) : std::nullopt;
        if (eval_cmd->parsed()) return cmd_eval(fname, fargs, g);
        if (table_cmd->parsed()) return cmd_table(tname, targs, g);
        return cmd_verify(suites, g, grid);
    } catch (const usage_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const mqphi::domain_error& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 3;
    } catch (const mqphi::convergence_error& e) {
        std::fprintf(stderr, "convergence error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
