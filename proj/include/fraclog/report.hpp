#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fraclog {

enum class Relation {
    equal,         ///< |residual| <= tolerance
    greater,       ///< lhs - rhs > tolerance (margin beyond the error budget)
    greater_equal, ///< lhs - rhs >= -tolerance
};

inline const char* to_string(Relation r) {
    switch (r) {
    case Relation::equal: return "equal";
    case Relation::greater: return "greater";
    case Relation::greater_equal: return "greater_equal";
    }
    return "?";
}

/// Record of one identity or inequality check.
///
/// For equalities `residual = (lhs - rhs) / scale`; for inequalities it is
/// the margin lhs - rhs and `tolerance` is the numerical error budget.
struct AuditReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    Relation relation = Relation::equal;
    std::map<std::string, double> inputs;
    std::map<std::string, std::string> tags;
    std::vector<std::pair<std::string, double>> details;
    std::vector<AuditReport> children;

    static AuditReport equality(std::string name, double lhs, double rhs, double tol, double scale = 1.0) {
        AuditReport r;
        r.name = std::move(name);
        r.lhs = lhs;
        r.rhs = rhs;
        r.tolerance = tol;
        r.relation = Relation::equal;
        r.residual = scale != 0.0 ? (lhs - rhs) / scale : lhs - rhs;
        r.tags["scale"] = scale == 1.0 ? "absolute" : "relative";
        r.details.emplace_back("scale", scale);
        r.reevaluate();
        return r;
    }

    /// Relative equality with scale max(|rhs|, floor).
    static AuditReport relative(std::string name, double lhs, double rhs, double tol, double floor = 1e-300) {
        return equality(std::move(name), lhs, rhs, tol, std::max(std::fabs(rhs), floor));
    }

    static AuditReport inequality(std::string name, double lhs, double rhs, double budget, bool strict = true) {
        AuditReport r;
        r.name = std::move(name);
        r.lhs = lhs;
        r.rhs = rhs;
        r.tolerance = budget;
        r.relation = strict ? Relation::greater : Relation::greater_equal;
        r.residual = lhs - rhs;
        r.reevaluate();
        return r;
    }

    /// Composite report: passes iff every child passes. `residual` holds the
    /// largest child |residual|/tolerance ratio for equalities.
    static AuditReport composite(std::string name, std::vector<AuditReport> kids) {
        AuditReport r;
        r.name = std::move(name);
        r.relation = Relation::equal;
        r.tolerance = 1.0;
        double worst = 0.0;
        bool ok = true;
        for (const auto& k : kids) {
            ok = ok && k.pass;
            if (k.relation == Relation::equal && k.tolerance > 0.0)
                worst = std::max(worst, std::fabs(k.residual) / k.tolerance);
        }
        r.residual = worst;
        r.lhs = worst;
        r.rhs = 0.0;
        r.children = std::move(kids);
        r.pass = ok;
        return r;
    }

    void reevaluate() {
        if (!children.empty()) return;
        switch (relation) {
        case Relation::equal: pass = std::isfinite(residual) && std::fabs(residual) <= tolerance; break;
        case Relation::greater: pass = std::isfinite(residual) && residual > tolerance; break;
        case Relation::greater_equal: pass = std::isfinite(residual) && residual >= -tolerance; break;
        }
    }

    /// The same data with the asserted direction reversed.
    AuditReport flipped() const {
        AuditReport r = *this;
        if (relation == Relation::equal) return r;
        std::swap(r.lhs, r.rhs);
        r.residual = r.lhs - r.rhs;
        r.name += ".flipped";
        r.reevaluate();
        return r;
    }

    AuditReport& with(const std::string& key, double v) {
        inputs[key] = v;
        return *this;
    }
    AuditReport& tag(const std::string& key, std::string v) {
        tags[key] = std::move(v);
        return *this;
    }
    AuditReport& detail(const std::string& key, double v) {
        details.emplace_back(key, v);
        return *this;
    }

    double detail_value(const std::string& key) const {
        for (const auto& [k, v] : details)
            if (k == key) return v;
        return std::nan("");
    }
};

inline bool all_pass(const std::vector<AuditReport>& v) {
    return std::all_of(v.begin(), v.end(), [](const AuditReport& r) { return r.pass; });
}

} // namespace fraclog
