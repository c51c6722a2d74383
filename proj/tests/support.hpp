#pragma once

// Test-only helpers: fixture loading and oracles that do not share code with
// the library (std::lgamma, double-exponential quadrature, elementary K_{1/2}).

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace oracle {

inline std::filesystem::path fixture_dir() {
    if (const char* e = std::getenv("FRACLOG_FIXTURES"); e && *e) return e;
#ifdef FRACLOG_FIXTURE_DIR
    return FRACLOG_FIXTURE_DIR;
#else
    return "tests/fixtures";
#endif
}

inline nlohmann::json load_fixture(const std::string& name) {
    std::ifstream f(fixture_dir() / name);
    if (!f) throw std::runtime_error("missing fixture " + name);
    return nlohmann::json::parse(f);
}

inline double num(const nlohmann::json& v) { return v.is_string() ? std::stod(v.get<std::string>()) : v.get<double>(); }

inline constexpr double pi = std::numbers::pi;

/// Tanh-sinh on [a,b]; tolerant of integrable endpoint singularities.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b, int levels = 9) {
    const double d = 0.5 * (b - a);
    double h = 1.0, sum = 0.0;
    for (int lvl = 0; lvl < levels; ++lvl) {
        double part = 0.0;
        const int step = lvl == 0 ? 1 : 2;
        const int start = lvl == 0 ? 0 : 1;
        for (int k = start;; k += step) {
            const double t = k * h;
            const double u = 0.5 * pi * std::sinh(t);
            const double ch = std::cosh(u);
            const double w = 0.5 * pi * std::cosh(t) / (ch * ch);
            if (w < 1e-300 || t > 6.5) break;
            // distance to the endpoints computed without cancellation
            const double gap = 1.0 / (std::exp(u) * ch);
            const double xl = a + d * gap, xr = b - d * gap;
            double v = 0.0;
            if (xr > a && xr < b) v += f(xr);
            if (k != 0 && xl > a && xl < b) v += f(xl);
            part += w * v;
        }
        sum = lvl == 0 ? part : sum + part;
        h *= 0.5;
    }
    return sum * d * (2.0 * h);
}

/// Integral over [0, inf) split at 1 with the tail mapped by x = 1/v.
inline double half_line(const std::function<double(double)>& f, int levels = 9) {
    const double head = tanh_sinh(f, 0.0, 1.0, levels);
    const double tail = tanh_sinh(
        [&](double v) {
            const double y = f(1.0 / v) / (v * v);
            return std::isfinite(y) ? y : 0.0;
        },
        0.0, 1.0, levels);
    return head + tail;
}

/// int_0^inf g(r) dr for g = smooth * sin or cos of frequency omega: one
/// tanh-sinh panel per half period, then iterated averaging of the partial
/// sums (the half-period integrals alternate in sign).
inline double oscillatory_half_line(const std::function<double(double)>& g, double omega, int periods = 80) {
    const double L = pi / omega;
    std::vector<double> partial;
    double acc = 0.0;
    for (int k = 0; k < periods; ++k) {
        acc += tanh_sinh(g, k * L, (k + 1) * L, 7);
        partial.push_back(acc);
    }
    std::vector<double> v(partial.end() - 30, partial.end());
    while (v.size() > 1) {
        std::vector<double> w;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) w.push_back(0.5 * (v[i] + v[i + 1]));
        v.swap(w);
    }
    return v[0];
}

inline double lbeta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }
inline double beta_fn(double a, double b) { return std::exp(lbeta(a, b)); }

/// |S^n| from std::tgamma.
inline double sphere_area(int n) { return 2.0 * std::pow(pi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1)); }

/// int_0^inf t^{a-1} K_nu(t)^2 dt in closed form.
inline double mellin_k2(double a, double nu) {
    return std::sqrt(pi) * std::tgamma(0.5 * a) * std::tgamma(0.5 * a + nu) * std::tgamma(0.5 * a - nu) /
           (4.0 * std::tgamma(0.5 * (a + 1.0)));
}

inline double k_half(double x) { return std::sqrt(pi / (2.0 * x)) * std::exp(-x); }

/// Central-difference digamma from std::lgamma, accurate to about 1e-9.
inline double psi(double x) {
    const double h = 1e-5 * std::max(1.0, x);
    return (std::lgamma(x + h) - std::lgamma(x - h)) / (2.0 * h);
}

inline double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

} // namespace oracle
