#pragma once

// Spectrum of the conformal operators on S^N: eigenvalues, multiplicities,
// symbols, sign thresholds and the orthonormal zonal basis.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fraclog/constants.hpp"
#include "fraclog/errors.hpp"
#include "fraclog/quadrature.hpp"
#include "fraclog/report.hpp"
#include "fraclog/specfun.hpp"

namespace fraclog {

enum class Op { P_s, P_slog, P_log };

inline const char* to_string(Op op) {
    switch (op) {
    case Op::P_s: return "P_s";
    case Op::P_slog: return "P_slog";
    case Op::P_log: return "P_log";
    }
    return "?";
}

struct SpectrumPoint {
    int k = 0;
    double lambda_k = 0.0;
    std::uint64_t d_k = 0;
    double phi_s = 0.0;
    double phi_slog = 0.0;
    double phi_log = 0.0;
};

struct ThresholdReport {
    std::string name;
    double value = 0.0;
    double lo = 0.0, hi = 0.0; ///< bracket handed to the root finder
    double residual = 0.0;
    std::string defining_equation;
};

namespace spectral {

inline double lambda_k(int N, int k) { return double(k) * double(k + N - 1); }

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max())
            throw DomainError("multiplicity overflows 64 bits");
    }
    return static_cast<std::uint64_t>(r);
}

/// Dimension of the degree-k spherical harmonics on S^N.
inline std::uint64_t multiplicity(int N, int k) {
    if (k < 0) throw DomainError("multiplicity: k must be >= 0");
    if (k == 0) return 1;
    if (k == 1) return static_cast<std::uint64_t>(N) + 1;
    return binomial(N + k, N) - binomial(N + k - 2, N);
}

inline double a_of(int N, double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("spectral: lambda must be >= 0");
    return std::sqrt(lambda + 0.25 * (N - 1.0) * (N - 1.0));
}

inline void guard(const Params& p, double a) {
    p.validate();
    if (!(0.5 - p.s + a > 0.0))
        throw DomainError("spectral: 1/2 - s + a must be positive (N=" + std::to_string(p.N) +
                          ", s=" + std::to_string(p.s) + ")");
}

/// phi_{N,s}(lambda) = Gamma(1/2+s+a)/Gamma(1/2-s+a).
inline double symbol_s(const Params& p, double lambda) {
    const double a = a_of(p.N, lambda);
    guard(p, a);
    return std::exp(specfun::ln_gamma(0.5 + p.s + a).value - specfun::ln_gamma(0.5 - p.s + a).value);
}

/// psi(1/2+s+a) + psi(1/2-s+a).
inline double phi0(const Params& p, double lambda) {
    const double a = a_of(p.N, lambda);
    guard(p, a);
    return specfun::digamma(0.5 + p.s + a).value + specfun::digamma(0.5 - p.s + a).value;
}

inline double symbol_slog(const Params& p, double lambda) { return symbol_s(p, lambda) * phi0(p, lambda); }

/// 2 psi(1/2 + a).
inline double symbol_log(int N, double lambda) {
    if (N < 1) throw DomainError("symbol_log: N must be >= 1");
    return 2.0 * specfun::digamma(0.5 + a_of(N, lambda)).value;
}

inline double symbol(Op op, const Params& p, double lambda) {
    switch (op) {
    case Op::P_s: return symbol_s(p, lambda);
    case Op::P_slog: return symbol_slog(p, lambda);
    case Op::P_log: return symbol_log(p.N, lambda);
    }
    return std::nan("");
}

inline SpectrumPoint spectrum_point(const Params& p, int k) {
    SpectrumPoint sp;
    sp.k = k;
    sp.lambda_k = lambda_k(p.N, k);
    sp.d_k = multiplicity(p.N, k);
    sp.phi_s = symbol_s(p, sp.lambda_k);
    sp.phi_slog = symbol_slog(p, sp.lambda_k);
    sp.phi_log = symbol_log(p.N, sp.lambda_k);
    return sp;
}

/// Strict increase of k -> phi^{s+ln}(lambda_k) for 0 <= k <= k_max.
inline AuditReport monotonicity_audit(const Params& p, int k_max) {
    if (p.N == 1 && !(p.s < 0.5)) throw DomainError("monotonicity_audit: N=1 requires s < 1/2");
    double min_gap = std::numeric_limits<double>::infinity();
    int at = -1;
    double prev = symbol_slog(p, 0.0);
    for (int k = 0; k < k_max; ++k) {
        const double next = symbol_slog(p, lambda_k(p.N, k + 1));
        // Compare against the rounding level of the symbol values.
        const double gap = next - prev;
        if (gap < min_gap) {
            min_gap = gap;
            at = k;
        }
        prev = next;
    }
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::fabs(prev);
    AuditReport r = AuditReport::inequality("spectral.monotonicity", min_gap, 0.0, noise, true);
    r.with("N", p.N).with("s", p.s).with("k_max", k_max);
    r.detail("min_gap_at_k", at);
    r.detail("phi_slog_0", symbol_slog(p, 0.0));
    r.detail("phi_slog_1", symbol_slog(p, lambda_k(p.N, 1)));
    r.detail("phi_slog_2", symbol_slog(p, lambda_k(p.N, 2)));
    return r;
}

/// The four sign thresholds.
inline std::vector<ThresholdReport> thresholds() {
    std::vector<ThresholdReport> out;
    const double tol = 1e-15;
    auto psi = [](double x) { return specfun::digamma(x).value; };
    {
        auto g = [&](double a) { return psi(a + 1.0) + psi(a - 1.0); };
        const RootResult r = quad::find_root(g, 1.5, 2.0, tol);
        out.push_back({"a0", r.root, 1.5, 2.0, g(r.root), "psi(a+1) + psi(a-1) = 0"});
    }
    {
        auto g = [&](double a) { return psi(a + 0.5) + psi(a - 0.5); };
        const RootResult r = quad::find_root(g, 1.0, 2.0, tol);
        out.push_back({"a1", r.root, 1.0, 2.0, g(r.root), "psi(a+1/2) + psi(a-1/2) = 0"});
    }
    {
        auto g = [&](double s) { return phi0(Params(3, s), 0.0); };
        const double lo = 1e-6, hi = 1.0 - 1e-6;
        const RootResult r = quad::find_root(g, lo, hi, tol);
        out.push_back({"s0_N3", r.root, lo, hi, g(r.root), "phi0(s, N=3; lambda_0) = 0"});
    }
    {
        auto g = [&](double s) { return phi0(Params(1, s), 1.0); };
        const double lo = 1e-6, hi = 0.5 - 1e-6;
        const RootResult r = quad::find_root(g, lo, hi, tol);
        out.push_back({"s1_N1", r.root, lo, hi, g(r.root), "phi0(s, N=1; lambda_1) = 0"});
    }
    return out;
}

/// Sign claims for phi^{s+ln}(lambda_k) on a fixed (N, s, k) grid:
/// positivity for N >= 4 (all k), N in {2,3} (k >= 1), N = 1 with s < 1/2
/// (k >= 2); sign change of phi^{s+ln}_3(lambda_0) at s0; negativity of
/// phi^{s+ln}_2(lambda_0); sign change of phi^{s+ln}_1(lambda_1) at s1 and
/// negativity of phi^{s+ln}_1(lambda_0).
inline std::vector<AuditReport> sign_table(int k_max = 50) {
    const auto th = thresholds();
    const double s0 = th[2].value, s1 = th[3].value;
    std::vector<double> grid;
    for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
    std::vector<AuditReport> out;

    auto min_over = [&](auto&& pred_range, const std::string& name) {
        double worst = std::numeric_limits<double>::infinity();
        int cnt = 0;
        pred_range([&](double v) {
            worst = std::min(worst, v);
            ++cnt;
        });
        AuditReport r = AuditReport::inequality(name, worst, 0.0, 0.0, true);
        r.detail("cases", cnt);
        return r;
    };

    out.push_back(min_over(
        [&](auto&& sink) {
            for (int N = 4; N <= 8; ++N)
                for (double s : grid)
                    for (int k = 0; k <= k_max; ++k) sink(symbol_slog(Params(N, s), lambda_k(N, k)));
        },
        "sign.a.N>=4.positive"));
    out.push_back(min_over(
        [&](auto&& sink) {
            for (int N = 2; N <= 3; ++N)
                for (double s : grid)
                    for (int k = 1; k <= k_max; ++k) sink(symbol_slog(Params(N, s), lambda_k(N, k)));
        },
        "sign.a.N23.k>=1.positive"));
    out.push_back(min_over(
        [&](auto&& sink) {
            for (double s : grid)
                if (s < 0.5)
                    for (int k = 2; k <= k_max; ++k) sink(symbol_slog(Params(1, s), lambda_k(1, k)));
        },
        "sign.a.N1.k>=2.positive"));
    out.push_back(min_over(
        [&](auto&& sink) {
            for (double s : grid)
                if (s < s0) sink(symbol_slog(Params(3, s), 0.0));
        },
        "sign.b.N3.k0.positive_below_s0"));
    out.push_back(min_over(
        [&](auto&& sink) {
            for (double s : grid)
                if (s > s0) sink(-symbol_slog(Params(3, s), 0.0));
        },
        "sign.b.N3.k0.negative_above_s0"));
    out.push_back(min_over(
        [&](auto&& sink) {
            for (double s : grid) sink(-symbol_slog(Params(2, s), 0.0));
        },
        "sign.c.N2.k0.negative"));
    out.push_back(min_over(
        [&](auto&& sink) {
            for (double s : grid)
                if (s < s1) sink(symbol_slog(Params(1, s), 1.0));
        },
        "sign.d.N1.k1.positive_below_s1"));
    out.push_back(min_over(
        [&](auto&& sink) {
            for (double s : grid)
                if (s > s1 && s < 0.5) sink(-symbol_slog(Params(1, s), 1.0));
        },
        "sign.d.N1.k1.negative_above_s1"));
    out.push_back(min_over(
        [&](auto&& sink) {
            for (double s : grid)
                if (s < 0.5) sink(-symbol_slog(Params(1, s), 0.0));
        },
        "sign.d.N1.k0.negative"));
    return out;
}

// ---------------------------------------------------------------------------
// Zonal basis: Z_k is proportional to the Jacobi polynomial P_k^{(al,al)}
// with al = (N-2)/2 (Chebyshev for N=1, Legendre for N=2).

inline double jacobi_alpha(int N) { return 0.5 * (N - 2.0); }

/// P_k^{(al,al)}(t) by the three-term recurrence.
inline double jacobi_p(int k, double al, double t) {
    if (k == 0) return 1.0;
    double pm2 = 1.0, pm1 = (al + 1.0) * t;
    for (int n = 2; n <= k; ++n) {
        const double two = 2.0 * n + 2.0 * al;
        const double p = ((two - 1.0) * two * (two - 2.0) * t * pm1 - 2.0 * (n + al - 1.0) * (n + al - 1.0) * two * pm2) /
                         (2.0 * n * (n + 2.0 * al) * (two - 2.0));
        pm2 = pm1;
        pm1 = p;
    }
    return pm1;
}

/// ln of the weighted norm h_k = int_{-1}^{1} (1-t^2)^al P_k^2 dt.
inline double ln_jacobi_h(int k, double al) {
    if (k == 0) return (2.0 * al + 1.0) * std::numbers::ln2 + specfun::ln_beta(al + 1.0, al + 1.0).value;
    using specfun::ln_gamma;
    return (2.0 * al + 1.0) * std::numbers::ln2 + 2.0 * ln_gamma(k + al + 1.0).value -
           std::log(2.0 * k + 2.0 * al + 1.0) - ln_gamma(k + 1.0).value - ln_gamma(k + 2.0 * al + 1.0).value;
}

/// Factor n_k with Z_k = n_k P_k^{(al,al)} orthonormal in L^2(S^N).
inline double zonal_norm(int N, int k) {
    const double al = jacobi_alpha(N);
    return std::exp(-0.5 * (std::log(constants::sphere_area(N - 1)) + ln_jacobi_h(k, al)));
}

inline double zonal_basis_eval(int N, int k, double t) {
    if (k < 0) throw DomainError("zonal_basis_eval: k must be >= 0");
    return zonal_norm(N, k) * jacobi_p(k, jacobi_alpha(N), t);
}

/// Coefficients c_j with P_k^{(al,al)}(t) = sum_j c_j ((t-1)/2)^j.
inline std::vector<double> jacobi_taylor_at_one(int k, double al) {
    std::vector<double> c(k + 1);
    if (k == 0) {
        c[0] = 1.0;
        return c;
    }
    using specfun::ln_gamma;
    const double lead = ln_gamma(al + k + 1.0).value - ln_gamma(k + 1.0).value - ln_gamma(2.0 * al + k + 1.0).value;
    for (int j = 0; j <= k; ++j) {
        const double lc = ln_gamma(k + 1.0).value - ln_gamma(j + 1.0).value - ln_gamma(k - j + 1.0).value;
        c[j] = std::exp(lead + lc + ln_gamma(2.0 * al + k + j + 1.0).value - ln_gamma(al + j + 1.0).value);
    }
    return c;
}

} // namespace spectral

/// Rotation-symmetric function on S^N in the orthonormal zonal basis.
struct ZonalExpansion {
    int N = 2;
    std::vector<double> coeffs;

    ZonalExpansion() = default;
    ZonalExpansion(int n, std::vector<double> c) : N(n), coeffs(std::move(c)) {
        if (N < 1) throw DomainError("ZonalExpansion: N must be >= 1");
    }

    static constexpr int default_degree_max = 32;

    static ZonalExpansion basis(int N, int k, double scale = 1.0) {
        std::vector<double> c(k + 1, 0.0);
        c[k] = scale;
        return ZonalExpansion(N, c);
    }
    static ZonalExpansion constant(int N, double value) {
        return ZonalExpansion(N, {value * std::sqrt(constants::sphere_area(N))});
    }

    int degree_max() const { return static_cast<int>(coeffs.size()) - 1; }

    double eval(double t) const {
        double v = 0.0;
        const double al = spectral::jacobi_alpha(N);
        for (int k = 0; k <= degree_max(); ++k)
            if (coeffs[k] != 0.0) v += coeffs[k] * spectral::zonal_norm(N, k) * spectral::jacobi_p(k, al, t);
        return v;
    }

    /// u(1) - u(1-w), without cancellation for small w.
    double drop(double w) const {
        if (w > 0.5) return eval(1.0) - eval(1.0 - w);
        const double al = spectral::jacobi_alpha(N);
        double v = 0.0;
        for (int k = 1; k <= degree_max(); ++k) {
            if (coeffs[k] == 0.0) continue;
            const auto c = spectral::jacobi_taylor_at_one(k, al);
            double acc = 0.0, x = -0.5 * w, xp = x;
            for (int j = 1; j <= k; ++j) {
                acc += c[j] * xp;
                xp *= x;
            }
            v -= coeffs[k] * spectral::zonal_norm(N, k) * acc;
        }
        return v;
    }

    /// ||u||^2 by Parseval.
    double norm2() const {
        double s = 0.0;
        for (double c : coeffs) s += c * c;
        return s;
    }

    /// Powers of (1+t): u(t) = sum_j e_j (1+t)^j, used for exact pullbacks.
    std::vector<double> powers_of_one_plus_t() const {
        const double al = spectral::jacobi_alpha(N);
        std::vector<double> e(std::max(1, degree_max() + 1), 0.0);
        for (int k = 0; k <= degree_max(); ++k) {
            if (coeffs[k] == 0.0) continue;
            const auto c = spectral::jacobi_taylor_at_one(k, al);
            const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            double f = 1.0;
            for (int j = 0; j <= k; ++j) {
                e[j] += coeffs[k] * spectral::zonal_norm(N, k) * sgn * c[j] * f;
                f *= -0.5;
            }
        }
        return e;
    }

    ZonalExpansion operator+(const ZonalExpansion& o) const {
        if (o.N != N) throw DomainError("ZonalExpansion: dimension mismatch");
        std::vector<double> c(std::max(coeffs.size(), o.coeffs.size()), 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] += coeffs[i];
        for (std::size_t i = 0; i < o.coeffs.size(); ++i) c[i] += o.coeffs[i];
        return ZonalExpansion(N, c);
    }
    ZonalExpansion operator*(double a) const {
        ZonalExpansion r = *this;
        for (double& c : r.coeffs) c *= a;
        return r;
    }
};

namespace spectral {

/// Coefficient-wise multiplication by the symbol at lambda_k.
inline ZonalExpansion apply_spectral(Op op, const Params& p, const ZonalExpansion& u) {
    if (u.N != p.N) throw DomainError("apply_spectral: dimension mismatch");
    ZonalExpansion r = u;
    for (int k = 0; k <= u.degree_max(); ++k) r.coeffs[k] *= symbol(op, p, lambda_k(p.N, k));
    return r;
}

/// <u, P u> = sum_k symbol(lambda_k) c_k^2.
inline double energy_spectral(Op op, const Params& p, const ZonalExpansion& u) {
    double e = 0.0;
    for (int k = 0; k <= u.degree_max(); ++k) e += symbol(op, p, lambda_k(p.N, k)) * u.coeffs[k] * u.coeffs[k];
    return e;
}

/// Point on [-1,1] with both distances to the ends kept exactly.
struct PolarPoint {
    double t;
    double one_minus_t;
    double one_plus_t;
};

/// int_{S^N} g dV for a zonal integrand, i.e.
/// |S^{N-1}| int_{-1}^{1} g(t) (1-t^2)^{(N-2)/2} dt, split at t = 0 with both
/// endpoint weights handled by power substitution.
template <class G>
QuadResult zonal_integral(int N, const G& g, double abs_tol, double rel_tol) {
    const double al = jacobi_alpha(N);
    const double area = constants::sphere_area(N - 1);
    auto near_north = [&](double w) { return g(PolarPoint{1.0 - w, w, 2.0 - w}) * std::pow(w * (2.0 - w), al); };
    auto near_south = [&](double v) { return g(PolarPoint{v - 1.0, 2.0 - v, v}) * std::pow(v * (2.0 - v), al); };
    const double ex = std::min(al, 0.0);
    QuadResult a = quad::endpoint_singular(near_north, 1.0, ex, 0.5 * abs_tol / area, rel_tol);
    QuadResult b = quad::endpoint_singular(near_south, 1.0, ex, 0.5 * abs_tol / area, rel_tol);
    return area * (a + b);
}

} // namespace spectral
} // namespace fraclog
