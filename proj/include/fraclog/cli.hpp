#pragma once

// Command-line front end. Kept in a header so tests can drive `run` in-process.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraclog/conformal.hpp"
#include "fraclog/constants.hpp"
#include "fraclog/euclid_radial.hpp"
#include "fraclog/inequalities.hpp"
#include "fraclog/report.hpp"
#include "fraclog/spectral.hpp"
#include "fraclog/sphere_kernel.hpp"

namespace fraclog::cli {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

enum class Format { json, csv };

struct RunConfig {
    std::string subcommand;
    std::vector<Params> params;
    double tol_scale = 1.0;
    std::string out = "-";
    Format format = Format::json;
    bool seedless = true;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------------ parsing

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    for (const auto& t : out)
        if (t.empty()) throw UsageError("malformed list '" + s + "'");
    return out;
}

inline double parse_double(const std::string& t, const std::string& flag) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw UsageError(flag + ": cannot parse '" + t + "' as a number");
    }
    if (pos != t.size() || !std::isfinite(v)) throw UsageError(flag + ": cannot parse '" + t + "' as a number");
    return v;
}

inline int parse_int(const std::string& t, const std::string& flag) {
    const double v = parse_double(t, flag);
    if (v != std::floor(v) || std::fabs(v) > 1e6) throw UsageError(flag + ": '" + t + "' is not an integer");
    return int(v);
}

inline std::vector<double> parse_doubles(const std::string& s, const std::string& flag) {
    std::set<double> seen;
    for (const auto& t : split_list(s)) seen.insert(parse_double(t, flag));
    return {seen.begin(), seen.end()};
}

inline std::vector<int> parse_ints(const std::string& s, const std::string& flag) {
    std::set<int> seen;
    for (const auto& t : split_list(s)) seen.insert(parse_int(t, flag));
    return {seen.begin(), seen.end()};
}

/// Cartesian product of dimension and order lists, sorted and duplicate-free.
/// With skip_supercritical, pairs with N <= 2s are dropped rather than rejected.
inline std::vector<Params> expand_grid(const std::string& dims, const std::string& orders, bool skip_supercritical = false) {
    std::vector<Params> out;
    for (int N : parse_ints(dims, "--dim"))
        for (double s : parse_doubles(orders, "--order")) {
            if (skip_supercritical && s > 0.0 && s < 1.0 && N >= 1 && !(N > 2.0 * s)) continue;
            try {
                out.emplace_back(N, s);
            } catch (const DomainError& e) {
                throw UsageError(e.what());
            }
        }
    if (out.empty()) throw UsageError("no (N, s) pair with N > 2s in the requested grid");
    std::sort(out.begin(), out.end());
    return out;
}

// ------------------------------------------------------------------ output

inline json to_json(const AuditReport& r) {
    json j;
    j["name"] = r.name;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["residual"] = r.residual;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["relation"] = to_string(r.relation);
    j["inputs"] = r.inputs;
    j["tags"] = r.tags;
    json d = json::array();
    for (const auto& [k, v] : r.details) d.push_back(json{{"key", k}, {"value", v}});
    j["details"] = d;
    json c = json::array();
    for (const auto& k : r.children) c.push_back(to_json(k));
    j["children"] = c;
    return j;
}

inline json to_json(const ConstantSet& c) {
    return json{{"c_Ns", c.c_Ns},   {"A_Ns", c.A_Ns},   {"b_Ns", c.b_Ns},       {"Aprime_Ns", c.Aprime_Ns},
                {"c_N", c.c_N},     {"A_N", c.A_N},     {"rho_N", c.rho_N},     {"kappa_Ns", c.kappa_Ns},
                {"kappaprime_Ns", c.kappaprime_Ns},     {"a_N", c.a_N},         {"B_N", c.B_N},
                {"C_N", c.C_N},     {"sphere_area", c.sphere_area}};
}

inline json to_json(const ThresholdReport& t) {
    return json{{"name", t.name},         {"value", t.value}, {"lo", t.lo}, {"hi", t.hi}, {"residual", t.residual},
                {"defining_equation", t.defining_equation}};
}

inline std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream o;
    o.imbue(std::locale::classic());
    o << std::setprecision(17) << v;
    return o.str();
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string str() const {
        std::string s;
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
            s += "\n";
        };
        line(header);
        for (const auto& r : rows) line(r);
        return s;
    }
};

/// Multiply every leaf tolerance by t and recompute pass flags.
inline void rescale(AuditReport& r, double t) {
    if (r.children.empty()) {
        if (r.tags.count("verdict")) return; // dini reports carry a verdict, not a tolerance
        r.tolerance *= t;
        r.reevaluate();
        return;
    }
    bool ok = true;
    for (auto& c : r.children) {
        rescale(c, t);
        ok = ok && c.pass;
    }
    r.pass = ok;
}

struct Outcome {
    std::string text;
    int status = 0;
};

inline Outcome reports_doc(const std::string& cmd, std::vector<AuditReport> reps, double tol_scale, json extra = {}) {
    json arr = json::array();
    bool ok = true;
    for (auto& r : reps) {
        if (tol_scale != 1.0) rescale(r, tol_scale);
        ok = ok && r.pass;
        arr.push_back(to_json(r));
    }
    json doc{{"schema_version", schema_version}, {"command", cmd}, {"pass", ok}, {"reports", arr},
             {"tol_scale", tol_scale}};
    if (!extra.is_null())
        for (auto& [k, v] : extra.items()) doc[k] = v;
    return {doc.dump(2) + "\n", ok ? 0 : 1};
}

inline Outcome data_doc(const std::string& cmd, const std::string& key, json data) {
    json doc{{"schema_version", schema_version}, {"command", cmd}, {key, std::move(data)}};
    return {doc.dump(2) + "\n", 0};
}

// ------------------------------------------------------------------ commands

inline Outcome cmd_constants(const RunConfig& c) {
    json arr = json::array();
    for (const auto& p : c.params) {
        json j = to_json(eval_constants(p));
        j["N"] = p.N;
        j["s"] = p.s;
        arr.push_back(j);
    }
    if (c.format == Format::csv) {
        Csv t;
        t.header = {"N", "s"};
        for (auto& [k, v] : to_json(ConstantSet{}).items()) t.header.push_back(k);
        for (const auto& j : arr) {
            std::vector<std::string> row{std::to_string(j["N"].get<int>()), fmt17(j["s"].get<double>())};
            for (std::size_t i = 2; i < t.header.size(); ++i) row.push_back(fmt17(j[t.header[i]].get<double>()));
            t.rows.push_back(row);
        }
        return {t.str(), 0};
    }
    return data_doc("constants", "constants", arr);
}

inline Outcome cmd_eigentable(const RunConfig& c, int kmax) {
    if (kmax < 0) throw UsageError("--kmax must be >= 0");
    Csv t;
    t.header = {"N", "s", "k", "lambda_k", "d_k", "phi_s", "phi_slog", "phi_log"};
    json arr = json::array();
    for (const auto& p : c.params)
        for (int k = 0; k <= kmax; ++k) {
            const SpectrumPoint sp = spectral::spectrum_point(p, k);
            t.rows.push_back({std::to_string(p.N), fmt17(p.s), std::to_string(k), fmt17(sp.lambda_k),
                              std::to_string(sp.d_k), fmt17(sp.phi_s), fmt17(sp.phi_slog), fmt17(sp.phi_log)});
            arr.push_back(json{{"N", p.N},
                               {"s", p.s},
                               {"k", k},
                               {"lambda_k", sp.lambda_k},
                               {"d_k", sp.d_k},
                               {"phi_s", sp.phi_s},
                               {"phi_slog", sp.phi_slog},
                               {"phi_log", sp.phi_log}});
        }
    if (c.format == Format::csv) return {t.str(), 0};
    return data_doc("eigentable", "rows", arr);
}

inline Outcome cmd_thresholds(const RunConfig&) {
    json arr = json::array();
    for (const auto& t : spectral::thresholds()) arr.push_back(to_json(t));
    return data_doc("thresholds", "thresholds", arr);
}

inline Outcome cmd_kernel_vs_spectral(const RunConfig& c, int kmax, const std::string& ops) {
    std::vector<Op> op_list;
    for (const auto& o : split_list(ops)) {
        if (o == "P_s") op_list.push_back(Op::P_s);
        else if (o == "P_slog") op_list.push_back(Op::P_slog);
        else if (o == "P_log") op_list.push_back(Op::P_log);
        else throw UsageError("--ops: unknown operator '" + o + "'");
    }
    const double tol = 1e-6 * c.tol_scale;
    Csv t;
    t.header = {"N", "s", "k", "op", "kernel", "spectral", "rel_error", "error_estimate"};
    std::vector<AuditReport> reps;
    for (const auto& p : c.params)
        for (int k = 0; k <= kmax; ++k)
            for (Op op : op_list) {
                const ZonalExpansion u = ZonalExpansion::basis(p.N, k);
                const QuadResult q = sphere_kernel::apply_kernel_at_pole(op, p, ZonalFunction::from_expansion(u));
                const double sp = sphere_kernel::spectral_at_pole(op, p, u);
                const double rel = std::fabs(q.value - sp) / std::max(std::fabs(sp), 1e-300);
                t.rows.push_back({std::to_string(p.N), fmt17(p.s), std::to_string(k), to_string(op), fmt17(q.value),
                                  fmt17(sp), fmt17(rel), fmt17(q.abs_error_estimate)});
                AuditReport r = AuditReport::relative("kernel_vs_spectral", q.value, sp, tol);
                r.with("N", p.N).with("s", p.s).with("k", k).tag("op", to_string(op));
                reps.push_back(r);
            }
    if (c.format == Format::csv) {
        const bool ok = all_pass(reps);
        return {t.str(), ok ? 0 : 1};
    }
    return reports_doc("kernel-vs-spectral", reps, 1.0);
}

inline Outcome cmd_bubble(const RunConfig& c, double C, bool fourier, const std::string& conv, double rmax, int points) {
    if (c.params.size() != 1) throw UsageError("bubble: give a single --dim and --order");
    if (points < 2) throw UsageError("--points must be >= 2");
    if (!(rmax > 0.0)) throw UsageError("--rmax must be positive");
    const Params& p = c.params[0];
    BubbleConvention bc;
    if (conv == "u_s") bc = BubbleConvention::u_s;
    else if (conv == "v_sC") bc = BubbleConvention::v_sC;
    else throw UsageError("--convention must be u_s or v_sC");
    RadialProfile f;
    try {
        f = euclid::bubble_profile(p, C, bc);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    Csv t;
    t.header = {"r", "profile"};
    if (fourier) t.header.push_back("transform");
    json arr = json::array();
    const double h = rmax / points;
    for (int i = 0; i < points; ++i) {
        // the transform is evaluated at rho > 0 only, so the grid starts at h
        const double x = fourier ? (i + 1) * h : i * rmax / (points - 1);
        std::vector<std::string> row{fmt17(x), fmt17(f(x))};
        json j{{"r", x}, {"profile", f(x)}};
        if (fourier) {
            const double g = f.exact_fourier(x);
            row.push_back(fmt17(g));
            j["transform"] = g;
        }
        t.rows.push_back(row);
        arr.push_back(j);
    }
    if (c.format == Format::csv) return {t.str(), 0};
    return data_doc("bubble", "rows", json{{"N", p.N}, {"s", p.s}, {"C", C}, {"convention", conv}, {"table", arr}});
}

inline Outcome cmd_bubble_residual(const RunConfig& c, double C, const std::vector<double>& radii) {
    std::vector<AuditReport> reps;
    for (const auto& p : c.params) {
        reps.push_back(conformal::yamabe_residual_sphere(p, C));
        reps.push_back(conformal::yamabe_residual_euclid(p, C, radii));
    }
    return reports_doc("bubble-residual", reps, c.tol_scale);
}

inline Outcome cmd_intertwine(const RunConfig& c, int degree, const std::vector<double>& radii) {
    std::vector<AuditReport> reps;
    for (const auto& p : c.params) {
        const ZonalExpansion u = degree == 0 ? ZonalExpansion::constant(p.N, 1.0) : ZonalExpansion::basis(p.N, degree);
        AuditReport r = conformal::intertwining_residual(p, u, radii);
        r.with("degree", degree);
        reps.push_back(r);
        // the identity must not survive deleting the ln(phi) terms
        const AuditReport broken = conformal::intertwining_residual(p, u, radii, 1e-4, true);
        AuditReport guard = AuditReport::inequality("intertwining.guard", broken.residual, 10.0 * r.tolerance, 0.0);
        guard.with("N", p.N).with("s", p.s).with("degree", degree);
        reps.push_back(guard);
    }
    return reports_doc("intertwine", reps, c.tol_scale);
}

inline Outcome cmd_identity(const RunConfig& c) {
    std::vector<AuditReport> reps;
    for (const auto& p : c.params) {
        reps.push_back(ineq::sharp_fraclog_identity(p));
        reps.push_back(ineq::sphere_identity_check(p));
    }
    return reports_doc("identity", reps, c.tol_scale);
}

inline Outcome cmd_failure(const RunConfig& c, double s0, int grid) {
    if (c.params.empty()) throw UsageError("failure: missing --dim");
    std::vector<AuditReport> reps;
    json curves = json::array();
    Csv t;
    t.header = {"N", "s0", "s", "F", "F_error", "Fprime_fd", "Fprime_budget", "Fprime_exact"};
    for (const auto& p : c.params) {
        ineq::FailureDemo d;
        try {
            d = ineq::failure_demo(p.N, s0, grid, c.tol_scale);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
        reps.push_back(d.report);
        json cv{{"v_tag", d.curve.v_tag},        {"N", d.curve.N},
                {"s_grid", d.curve.s_grid},      {"F_values", d.curve.F_values},
                {"Fprime_fd", d.curve.Fprime_fd}, {"Fprime_budget", d.curve.Fprime_budget},
                {"scale", d.curve.scale}};
        curves.push_back(cv);
        for (std::size_t i = 0; i < d.curve.s_grid.size(); ++i)
            t.rows.push_back({std::to_string(p.N), fmt17(s0), fmt17(d.curve.s_grid[i]), fmt17(d.curve.F_values[i]),
                              fmt17(d.curve.F_errors[i]), fmt17(d.curve.Fprime_fd[i]), fmt17(d.curve.Fprime_budget[i]),
                              fmt17(d.curve.Fprime_exact[i])});
    }
    if (c.format == Format::csv) return {t.str(), all_pass(reps) ? 0 : 1};
    json extra{{"curves", curves}};
    if (reps.size() == 1) extra["min_Fprime"] = reps[0].detail_value("min_Fprime");
    return reports_doc("failure", reps, 1.0, extra);
}

/// A divergent right-hand side (-infinity) makes the inequality trivially true.
inline AuditReport divergent_rhs(const std::string& name, const std::string& why) {
    AuditReport r = AuditReport::inequality(name, 0.0, -std::numeric_limits<double>::infinity(), 0.0);
    r.pass = true;
    r.residual = std::numeric_limits<double>::infinity();
    r.tag("status", "rhs_divergent").tag("reason", why);
    return r;
}

inline Outcome cmd_beckner(const RunConfig& c, const std::string& profile, double q) {
    ineq::BecknerProfile kind;
    if (profile == "extremal") kind = ineq::BecknerProfile::extremal;
    else if (profile == "gaussian") kind = ineq::BecknerProfile::gaussian;
    else throw UsageError("--profile must be extremal or gaussian");
    std::vector<AuditReport> reps;
    // convention self-test: classical equality case at N = 1
    reps.push_back(ineq::beckner_classical_check(ineq::beckner_profile(1, ineq::BecknerProfile::extremal), true));
    for (const auto& p : c.params) {
        if (p.N != 1 && p.N != 3) throw UsageError("beckner: --dim must be 1 or 3");
        try {
            reps.push_back(ineq::beckner_fraclog_check(p.N, p.s, kind));
        } catch (const DivergenceError& e) {
            throw UsageError(e.what());
        }
        const RadialProfile f = ineq::beckner_profile(p.N, kind);
        try {
            reps.push_back(ineq::moment_check(f, p.s));
        } catch (const DivergenceError& e) {
            reps.push_back(divergent_rhs("moment", e.what()).with("N", p.N).with("s", p.s));
        }
        try {
            reps.push_back(ineq::lq_check(f, p.s, q));
        } catch (const DivergenceError& e) {
            reps.push_back(divergent_rhs("lq", e.what()).with("N", p.N).with("s", p.s).with("q", q));
        }
    }
    return reports_doc("beckner", reps, c.tol_scale);
}

inline Outcome cmd_confcore(const RunConfig& c, int degree, double coef) {
    std::vector<AuditReport> reps;
    std::set<int> dims;
    for (const auto& p : c.params) dims.insert(p.N);
    for (int N : dims) {
        ZonalExpansion u = ZonalExpansion::basis(N, 0);
        if (degree > 0 && coef != 0.0) u = u + ZonalExpansion::basis(N, degree, coef);
        reps.push_back(conformal::confcore_checks(u));
        reps.push_back(ineq::correction_cancellation(N));
    }
    return reports_doc("confcore", reps, c.tol_scale);
}

inline Outcome cmd_dini(double s, const std::string& omega) {
    const auto colon = omega.find(':');
    const std::string kind = omega.substr(0, colon);
    const double a = colon == std::string::npos ? 1.0 : parse_double(omega.substr(colon + 1), "--omega");
    std::function<double(double)> w;
    if (kind == "holder") w = [a](double r) { return std::pow(r, a); };
    else if (kind == "log") w = [a](double r) { return std::pow(1.0 + std::fabs(std::log(r)), -a); };
    else if (kind == "zero") w = [](double) { return 0.0; };
    else throw UsageError("--omega must be holder:ALPHA, log:ALPHA or zero");
    AuditReport r;
    try {
        r = sphere_kernel::dini_test(s, w);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    r.tag("omega", omega);
    return reports_doc("dini", {r}, 1.0);
}

// ------------------------------------------------------------------ driver

inline std::filesystem::path fixtures_dir() {
    if (const char* e = std::getenv("FRACLOG_FIXTURES"); e && *e) return e;
    return "fixtures";
}

inline int emit(const std::string& text, const std::string& out, std::ostream& os, std::ostream& es) {
    if (out == "-") {
        os << text;
        return 0;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        es << "fraclog: cannot write '" << out << "'\n";
        return 2;
    }
    f << text;
    return f ? 0 : 2;
}

/// Parse and execute. Exit status: 0 all audits pass, 1 an audit failed,
/// 2 usage or configuration error.
inline int run(int argc, const char* const* argv, std::ostream& os = std::cout, std::ostream& es = std::cerr) {
    CLI::App app{"fraclog: conformal fractional-logarithmic Laplacian toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "fraclog schema " + std::to_string(schema_version));

    std::string out = "-", dims, orders, fixture;
    double tol_scale = 1.0;
    bool csv = false;
    std::string format;

    auto common = [&](CLI::App* sc, const std::string& def_dim, const std::string& def_order) {
        sc->add_option("--out,-o", out, "output path, '-' for standard output")->capture_default_str();
        sc->add_option("--tol-scale", tol_scale, "multiply all default tolerances")->capture_default_str();
        sc->add_flag("--csv", csv, "emit CSV instead of JSON");
        sc->add_option("--format", format, "json or csv");
        sc->add_option("--save-fixture", fixture, "also write the output to $FRACLOG_FIXTURES/<name>");
        if (!def_dim.empty()) {
            dims = def_dim;
            sc->add_option("--dim,-N", dims, "dimension list, e.g. 1,3")->capture_default_str();
        }
        if (!def_order.empty()) {
            orders = def_order;
            sc->add_option("--order,-s", orders, "order list in (0,1), e.g. 0.25,0.5")->capture_default_str();
        }
    };

    int kmax = 5, kvs_kmax = 6, degree = 0, grid = 40, points = 21;
    double C = 1.0, s0 = 0.5, q = 1.5, coef = 0.3, rmax = 5.0, dini_s = 0.25;
    bool fourier = false;
    std::string ops = "P_s,P_slog,P_log", radii = "0,0.5,1,2", profile = "extremal", conv = "u_s", omega = "holder:1";

    auto* c_const = app.add_subcommand("constants", "named constants as JSON");
    auto* c_eig = app.add_subcommand("eigentable", "eigenvalue table (CSV by default)");
    auto* c_thr = app.add_subcommand("thresholds", "the four sign thresholds");
    auto* c_kvs = app.add_subcommand("kernel-vs-spectral", "pole kernel against spectral values (CSV by default)");
    auto* c_bub = app.add_subcommand("bubble", "bubble profile and transform table (CSV by default)");
    auto* c_res = app.add_subcommand("bubble-residual", "Yamabe residuals of the bubble family");
    auto* c_int = app.add_subcommand("intertwine", "intertwining identity at sample radii");
    auto* c_id = app.add_subcommand("identity", "sharp fractional-logarithmic identities");
    auto* c_fail = app.add_subcommand("failure", "failure of the naive inequality");
    auto* c_beck = app.add_subcommand("beckner", "Beckner-type inequalities");
    auto* c_cc = app.add_subcommand("confcore", "transfer laws under the endpoint pullback");
    auto* c_dini = app.add_subcommand("dini", "Dini integral finiteness test");

    // each subcommand registers its own defaults when selected; set them via callbacks
    struct Defaults {
        CLI::App* app;
        std::string dim, order;
    };
    const std::vector<Defaults> defs = {{c_const, "3", "0.5"},       {c_eig, "3", "0.5"},       {c_thr, "", ""},
                                        {c_kvs, "1,2,3,4", "0.25,0.75"}, {c_bub, "3", "0.5"},   {c_res, "3", "0.4"},
                                        {c_int, "3", "0.4"},       {c_id, "3", "0.5"},        {c_fail, "3", ""},
                                        {c_beck, "1", "0.25"},     {c_cc, "3", ""},           {c_dini, "", ""}};
    for (const auto& d : defs) common(d.app, d.dim, d.order);
    dims.clear();
    orders.clear();

    c_eig->add_option("--kmax", kmax, "largest degree")->capture_default_str();
    c_kvs->add_option("--kmax", kvs_kmax, "largest degree")->capture_default_str();
    c_kvs->add_option("--ops", ops, "operators")->capture_default_str();
    c_bub->add_option("--scale,-C", C, "scale C")->capture_default_str();
    c_bub->add_flag("--fourier", fourier, "add the exact transform column");
    c_bub->add_option("--convention", conv, "u_s or v_sC")->capture_default_str();
    c_bub->add_option("--rmax", rmax, "largest radius")->capture_default_str();
    c_bub->add_option("--points", points, "number of rows")->capture_default_str();
    c_res->add_option("--scale,-C", C, "scale C")->capture_default_str();
    c_res->add_option("--radii", radii, "sample radii")->capture_default_str();
    c_int->add_option("--degree", degree, "zonal degree of the test function (0 = constant)")->capture_default_str();
    c_int->add_option("--radii", radii, "sample radii")->capture_default_str();
    c_fail->add_option("--order0", s0, "order of the fixed extremal")->capture_default_str();
    c_fail->add_option("--grid", grid, "number of grid points")->capture_default_str();
    c_beck->add_option("--profile", profile, "extremal or gaussian")->capture_default_str();
    c_beck->add_option("--q", q, "exponent for the L^q bound")->capture_default_str();
    c_cc->add_option("--degree", degree, "degree of the added zonal mode")->capture_default_str();
    c_cc->add_option("--coef", coef, "coefficient of the added mode")->capture_default_str();
    c_dini->add_option("--order,-s", dini_s, "order s")->capture_default_str();
    c_dini->add_option("--omega", omega, "holder:ALPHA, log:ALPHA or zero")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        os << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        os << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion& e) {
        os << e.what() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        es << "fraclog: " << e.what() << "\n";
        return 2;
    }

    CLI::App* sel = app.get_subcommands().front();
    const std::string name = sel->get_name();
    // fill defaults for list options that were not given
    for (const auto& d : defs)
        if (d.app == sel) {
            if (dims.empty()) dims = d.dim;
            if (orders.empty()) orders = d.order;
        }

    RunConfig cfg;
    cfg.subcommand = name;
    cfg.out = out;
    cfg.tol_scale = tol_scale;
    const bool csv_default = name == "eigentable" || name == "kernel-vs-spectral" || name == "bubble";
    cfg.format = csv_default ? Format::csv : Format::json;
    if (csv) cfg.format = Format::csv;
    if (!format.empty()) {
        if (format == "csv") cfg.format = Format::csv;
        else if (format == "json") cfg.format = Format::json;
        else {
            es << "fraclog: --format must be json or csv\n";
            return 2;
        }
    }
    const std::set<std::string> csv_capable = {"constants", "eigentable", "kernel-vs-spectral", "bubble", "failure"};
    if (cfg.format == Format::csv && !csv_capable.count(name)) {
        es << "fraclog: '" << name << "' has no CSV output\n";
        return 2;
    }
    if (!(tol_scale > 0.0)) {
        es << "fraclog: --tol-scale must be positive\n";
        return 2;
    }

    Outcome res;
    try {
        if (!dims.empty() && !orders.empty()) cfg.params = expand_grid(dims, orders, name == "kernel-vs-spectral");
        if (name == "failure" || name == "confcore")
            for (int N : parse_ints(dims, "--dim")) cfg.params.emplace_back(N, 0.5, false);
        if (name == "constants") res = cmd_constants(cfg);
        else if (name == "eigentable") res = cmd_eigentable(cfg, kmax);
        else if (name == "thresholds") res = cmd_thresholds(cfg);
        else if (name == "kernel-vs-spectral") res = cmd_kernel_vs_spectral(cfg, kvs_kmax, ops);
        else if (name == "bubble") res = cmd_bubble(cfg, C, fourier, conv, rmax, points);
        else if (name == "bubble-residual") res = cmd_bubble_residual(cfg, C, parse_doubles(radii, "--radii"));
        else if (name == "intertwine") res = cmd_intertwine(cfg, degree, parse_doubles(radii, "--radii"));
        else if (name == "identity") res = cmd_identity(cfg);
        else if (name == "failure") res = cmd_failure(cfg, s0, grid);
        else if (name == "beckner") res = cmd_beckner(cfg, profile, q);
        else if (name == "confcore") res = cmd_confcore(cfg, degree, coef);
        else if (name == "dini") res = cmd_dini(dini_s, omega);
    } catch (const UsageError& e) {
        es << "fraclog " << name << ": " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        es << "fraclog " << name << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        es << "fraclog " << name << ": " << e.what() << "\n";
        return 1;
    }

    if (const int st = emit(res.text, cfg.out, os, es); st != 0) return st;
    if (!fixture.empty()) {
        const auto path = fixtures_dir() / fixture;
        if (const int st = emit(res.text, path.string(), os, es); st != 0) return st;
    }
    return res.status;
}

} // namespace fraclog::cli
