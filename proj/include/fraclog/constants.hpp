#pragma once

// Named constants as functions of (N, s), evaluated in log space.

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>
#include <utility>

#include "fraclog/errors.hpp"
#include "fraclog/specfun.hpp"

namespace fraclog {

/// Validated (N, s) pair.
struct Params {
    int N = 1;
    double s = 0.5;
    bool require_subcritical = true;

    Params() = default;
    Params(int n, double order, bool subcritical = true) : N(n), s(order), require_subcritical(subcritical) {
        validate();
    }

    void validate() const {
        if (N < 1) throw DomainError("Params: dimension must be >= 1, got " + std::to_string(N));
        if (!(s > 0.0 && s < 1.0)) throw DomainError("Params: order must lie in (0,1), got " + std::to_string(s));
        if (require_subcritical && !(N > 2.0 * s))
            throw DomainError("Params: need N > 2s (N=" + std::to_string(N) + ", s=" + std::to_string(s) + ")");
    }

    /// Critical Sobolev exponent p(s) = 2N/(N-2s).
    double p_exponent() const { return 2.0 * N / (N - 2.0 * s); }
    /// Bubble exponent beta = (N-2s)/2.
    double beta() const { return 0.5 * (N - 2.0 * s); }

    friend bool operator==(const Params& a, const Params& b) { return a.N == b.N && a.s == b.s; }
    friend bool operator<(const Params& a, const Params& b) { return a.N != b.N ? a.N < b.N : a.s < b.s; }
};

struct ConstantSet {
    double c_Ns = 0;          ///< kernel constant of P_s
    double A_Ns = 0;          ///< Gamma(N/2+s)/Gamma(N/2-s)
    double b_Ns = 0;          ///< log-kernel shift
    double Aprime_Ns = 0;     ///< d/ds A_{N,s}
    double c_N = 0;           ///< kernel constant of P_log
    double A_N = 0;           ///< 2 psi(N/2)
    double rho_N = 0;         ///< Euclidean log-Laplacian constant
    double kappa_Ns = 0;      ///< sharp fractional Sobolev constant
    double kappaprime_Ns = 0; ///< d/ds kappa_{N,s}
    double a_N = 0;           ///< first-order coefficient of kappa at s = 0
    double B_N = 0;           ///< Beckner constant
    double C_N = 0;           ///< (4/N) pi^{N/2} / Gamma(N/2)
    double sphere_area = 0;   ///< |S^N|
};

namespace constants {

using specfun::digamma;
using specfun::ln_gamma;

inline double lg(double x) { return ln_gamma(x).value; }
inline double dg(double x) { return digamma(x).value; }

/// |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2); |S^0| = 2.
inline double sphere_area(int n) {
    if (n < 0) throw DomainError("sphere_area: dimension must be >= 0");
    const double h = 0.5 * (n + 1);
    return std::exp(std::log(2.0) + h * std::log(std::numbers::pi) - lg(h));
}

/// ln(Gamma(N)/Gamma(N/2)).
inline double ln_gamma_ratio_N(int N) { return lg(N) - lg(0.5 * N); }

inline double c_N(int N) { return std::exp(-0.5 * N * std::log(std::numbers::pi) + lg(0.5 * N)); }
inline double A_N(int N) { return 2.0 * dg(0.5 * N); }
inline double rho_N(int N) { return 2.0 * std::numbers::ln2 + dg(0.5 * N) - specfun::euler_gamma; }

inline double a_N(int N) {
    return (2.0 / N) * ln_gamma_ratio_N(N) - std::log(4.0 * std::numbers::pi) - 2.0 * dg(0.5 * N);
}

inline double B_N(int N) {
    const double h = 0.5 * N;
    return h * dg(h) - 0.25 * N * std::log(std::numbers::pi) - 0.5 * ln_gamma_ratio_N(N) +
           h * std::log(2.0 * std::numbers::pi);
}

inline double C_N(int N) {
    return (4.0 / N) * std::exp(0.5 * N * std::log(std::numbers::pi) - lg(0.5 * N));
}

/// c_{N,s} = 4^s pi^{-N/2} s(1-s) Gamma(N/2+s)/Gamma(2-s).
inline double c_Ns(int N, double s) {
    return s * (1.0 - s) *
           std::exp(s * std::log(4.0) - 0.5 * N * std::log(std::numbers::pi) + lg(0.5 * N + s) - lg(2.0 - s));
}

/// Equivalent form 4^s pi^{-N/2} s Gamma(N/2+s)/Gamma(1-s).
inline double c_Ns_alt(int N, double s) {
    return s * std::exp(s * std::log(4.0) - 0.5 * N * std::log(std::numbers::pi) + lg(0.5 * N + s) - lg(1.0 - s));
}

inline double A_Ns(int N, double s) { return std::exp(lg(0.5 * N + s) - lg(0.5 * N - s)); }

inline double Aprime_Ns(int N, double s) { return A_Ns(N, s) * (dg(0.5 * N + s) + dg(0.5 * N - s)); }

inline double b_Ns(int N, double s) {
    return std::log(4.0) + dg(0.5 * N + s) + dg(2.0 - s) + 1.0 / s - 1.0 / (1.0 - s);
}

inline double ln_kappa(int N, double s) {
    return -2.0 * s * std::numbers::ln2 - s * std::log(std::numbers::pi) + lg(0.5 * N - s) - lg(0.5 * N + s) +
           (2.0 * s / N) * ln_gamma_ratio_N(N);
}

inline double kappa_Ns(int N, double s) { return std::exp(ln_kappa(N, s)); }

/// d/ds ln kappa_{N,s}.
inline double dln_kappa(int N, double s) {
    return -2.0 * std::numbers::ln2 - std::log(std::numbers::pi) - dg(0.5 * N - s) - dg(0.5 * N + s) +
           (2.0 / N) * ln_gamma_ratio_N(N);
}

inline double kappaprime_Ns(int N, double s) { return kappa_Ns(N, s) * dln_kappa(N, s); }

inline ConstantSet compute(const Params& p) {
    const int N = p.N;
    const double s = p.s;
    ConstantSet c;
    c.c_Ns = c_Ns(N, s);
    c.A_Ns = A_Ns(N, s);
    c.b_Ns = b_Ns(N, s);
    c.Aprime_Ns = Aprime_Ns(N, s);
    c.c_N = c_N(N);
    c.A_N = A_N(N);
    c.rho_N = rho_N(N);
    c.kappa_Ns = kappa_Ns(N, s);
    c.kappaprime_Ns = kappaprime_Ns(N, s);
    c.a_N = a_N(N);
    c.B_N = B_N(N);
    c.C_N = C_N(N);
    c.sphere_area = sphere_area(N);
    return c;
}

namespace detail {
struct Cache {
    std::shared_mutex mu;
    std::map<std::pair<int, std::uint64_t>, ConstantSet> table;
};
inline Cache& cache() {
    static Cache c;
    return c;
}
} // namespace detail

} // namespace constants

/// All named constants for (N, s). Requires N > 2s. Results are memoised by
/// the exact bit pattern of s, so a cached value is identical to a fresh one.
inline ConstantSet eval_constants(const Params& p) {
    Params q = p;
    q.require_subcritical = true;
    q.validate();
    const auto key = std::make_pair(q.N, std::bit_cast<std::uint64_t>(q.s));
    auto& c = constants::detail::cache();
    {
        std::shared_lock lock(c.mu);
        auto it = c.table.find(key);
        if (it != c.table.end()) return it->second;
    }
    const ConstantSet v = constants::compute(q);
    std::unique_lock lock(c.mu);
    return c.table.emplace(key, v).first->second;
}

/// mu = C^{-4s/(N-2s)} (A'_{N,s} - 4/(N-2s) A_{N,s} ln C).
inline double bubble_mu(const Params& p, double C) {
    if (!(C > 0.0)) throw DomainError("bubble_mu: scale C must be positive");
    const ConstantSet k = eval_constants(p);
    const double d = p.N - 2.0 * p.s;
    return std::exp(-4.0 * p.s / d * std::log(C)) * (k.Aprime_Ns - 4.0 / d * k.A_Ns * std::log(C));
}

/// C_{N,s} = 2^{1-(N-2s)/2} / Gamma((N-2s)/2), the Bessel-side bubble coefficient.
inline double bessel_bubble_coeff(const Params& p) {
    Params q = p;
    q.require_subcritical = true;
    q.validate();
    const double b = q.beta();
    return std::exp((1.0 - b) * std::numbers::ln2 - constants::lg(b));
}

/// Same coefficient for an arbitrary exponent beta > 0: the transform of
/// (1+r^2)^{-beta} is coeff * rho^{beta-N/2} K_{N/2-beta}(rho).
inline double bessel_pair_coeff(double beta) {
    if (!(beta > 0.0)) throw DomainError("bessel_pair_coeff: exponent must be positive");
    return std::exp((1.0 - beta) * std::numbers::ln2 - constants::lg(beta));
}

} // namespace fraclog
