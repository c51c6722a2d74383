#pragma once

// Radial functions on R^N and their Fourier transforms, normalised with
// (2 pi)^{-N/2}. Exact pairs for sums of powers of (1+r^2) (with optional
// ln(1+r^2) factors) and for Gaussians; numeric transforms for N in {1, 3}.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fraclog/constants.hpp"
#include "fraclog/errors.hpp"
#include "fraclog/quadrature.hpp"
#include "fraclog/specfun.hpp"

namespace fraclog {

enum class ProfileKind { bubble, gaussian, tabulated, composite };

inline const char* to_string(ProfileKind k) {
    switch (k) {
    case ProfileKind::bubble: return "bubble";
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::tabulated: return "tabulated";
    case ProfileKind::composite: return "composite";
    }
    return "?";
}

/// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n) throw DomainError("CubicSpline: need >= 2 matching points");
        m_.assign(n, 0.0);
        if (n == 2) return;
        std::vector<double> c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            const double a = h0 / 6.0, b = (h0 + h1) / 3.0, cc = h1 / 6.0;
            const double r = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
            const double den = b - a * c[i - 1];
            c[i] = cc / den;
            d[i] = (r - a * d[i - 1]) / den;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = d[i] - c[i] * m_[i + 1];
            if (i == 1) break;
        }
    }

    double operator()(double x) const {
        if (x <= x_.front()) return y_.front();
        if (x >= x_.back()) return y_.back();
        const std::size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin() - 1;
        const double h = x_[i + 1] - x_[i];
        const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
        return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    }

private:
    std::vector<double> x_, y_, m_;
};

/// Sum of terms (c + d ln(1+r^2)) (1+r^2)^{-beta} on R^N.
struct BubbleSeries {
    struct Term {
        double coef = 0.0;
        double log_coef = 0.0;
        double beta = 1.0;
    };
    int N = 1;
    std::vector<Term> terms;

    double eval(double r) const {
        const double q = std::log1p(r * r);
        double v = 0.0;
        for (const auto& t : terms) v += (t.coef + t.log_coef * q) * std::exp(-t.beta * q);
        return v;
    }

    double min_beta() const {
        double b = std::numeric_limits<double>::infinity();
        for (const auto& t : terms)
            if (t.coef != 0.0 || t.log_coef != 0.0) b = std::min(b, t.beta);
        return b;
    }

    bool has_log() const {
        for (const auto& t : terms)
            if (t.log_coef != 0.0) return true;
        return false;
    }

    /// Transform of (1+r^2)^{-beta}: 2^{1-beta}/Gamma(beta) rho^{beta-N/2} K_{N/2-beta}(rho).
    static double pair(int N, double beta, double rho) {
        const double nu = std::fabs(0.5 * N - beta);
        const double k = specfun::bessel_k_scaled(nu, rho).value;
        return std::exp((1.0 - beta) * std::numbers::ln2 - specfun::ln_gamma(beta).value +
                        (beta - 0.5 * N) * std::log(rho) - rho) *
               k;
    }

    /// Transform of (1+r^2)^{-beta} ln(1+r^2), i.e. -d/dbeta of `pair`.
    static double log_pair(int N, double beta, double rho) {
        const double nu = 0.5 * N - beta;
        const double g = pair(N, beta, rho);
        const double pre = std::exp((1.0 - beta) * std::numbers::ln2 - specfun::ln_gamma(beta).value +
                                    (beta - 0.5 * N) * std::log(rho));
        const double dk = nu == 0.0 ? 0.0 : specfun::bessel_k_dnu(std::fabs(nu), rho).value;
        const double sgn = nu > 0 ? 1.0 : -1.0;
        return g * (std::numbers::ln2 + specfun::digamma(beta).value - std::log(rho)) + pre * sgn * dk;
    }

    double fourier(double rho) const {
        if (!(rho > 0.0)) throw DomainError("BubbleSeries::fourier: rho must be positive");
        double v = 0.0;
        for (const auto& t : terms) {
            if (t.coef != 0.0) v += t.coef * pair(N, t.beta, rho);
            if (t.log_coef != 0.0) v += t.log_coef * log_pair(N, t.beta, rho);
        }
        return v;
    }

    /// Exponent gamma with |transform| = O(rho^gamma (1 + |ln rho|)) as rho -> 0.
    double fourier_origin_exponent() const { return std::min(0.0, 2.0 * min_beta() - N); }

    BubbleSeries scaled(double a) const {
        BubbleSeries r = *this;
        for (auto& t : r.terms) {
            t.coef *= a;
            t.log_coef *= a;
        }
        return r;
    }

    BubbleSeries operator+(const BubbleSeries& o) const {
        if (o.N != N) throw DomainError("BubbleSeries: dimension mismatch");
        BubbleSeries r = *this;
        r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
        return r;
    }

    /// Multiply by ln phi = ln 2 - ln(1+r^2); requires log-free terms.
    BubbleSeries times_log_phi() const {
        BubbleSeries r{N, {}};
        for (const auto& t : terms) {
            if (t.log_coef != 0.0) throw DomainError("BubbleSeries::times_log_phi: term already has a log factor");
            r.terms.push_back({t.coef * std::numbers::ln2, -t.coef, t.beta});
        }
        return r;
    }
};

/// Radial function on R^N with decay metadata.
struct RadialProfile {
    int N = 1;
    std::function<double(double)> evaluator;
    double decay_exponent = 0.0; ///< f = O(r^{-p}); +inf for Gaussian decay
    ProfileKind kind = ProfileKind::composite;
    std::string tag;
    std::optional<BubbleSeries> series;
    double gaussian_sigma = 0.0;
    double gaussian_amp = 0.0;
    std::vector<double> grid, values, errors; ///< filled for tabulated profiles

    double operator()(double r) const { return evaluator(r); }

    bool has_exact_transform() const { return series.has_value() || kind == ProfileKind::gaussian; }

    double exact_fourier(double rho) const {
        if (kind == ProfileKind::gaussian) {
            const double s = gaussian_sigma;
            return gaussian_amp * std::pow(s, N) * std::exp(-0.5 * s * s * rho * rho);
        }
        if (series) return series->fourier(rho);
        throw DomainError("profile '" + tag + "' has no exact Fourier pair");
    }

    bool gaussian_decay() const { return std::isinf(decay_exponent); }
};

/// Radial function on the Fourier side.
struct SpectralDensity {
    int N = 1;
    std::function<double(double)> evaluator;
    double origin_exponent = 0.0; ///< |g| = O(rho^gamma (1+|ln rho|)^j) near 0
    bool origin_log = false;
    double decay_rate = 1.0; ///< |g| = O(e^{-rate rho}) at infinity; 0 if only algebraic
    double decay_exponent = 0.0; ///< used when decay_rate == 0
    std::string tag;
    std::vector<double> grid, values, errors; ///< filled for sampled densities

    double operator()(double rho) const { return evaluator(rho); }
};

enum class BubbleConvention {
    u_s, ///< (1+r^2)^{-(N-2s)/2}
    v_sC ///< C 2^{(N-2s)/2} (1+r^2)^{-(N-2s)/2} = C phi^{(N-2s)/2}
};

namespace euclid {

inline constexpr double tol_abs = 1e-12;
inline constexpr double tol_rel = 1e-11;

/// Power profile coef * (1+r^2)^{-beta}.
inline RadialProfile power_profile(int N, double beta, double coef, std::string tag) {
    RadialProfile f;
    f.N = N;
    f.series = BubbleSeries{N, {{coef, 0.0, beta}}};
    f.evaluator = [coef, beta](double r) { return coef * std::exp(-beta * std::log1p(r * r)); };
    f.decay_exponent = 2.0 * beta;
    f.kind = ProfileKind::bubble;
    f.tag = std::move(tag);
    return f;
}

inline RadialProfile from_series(const BubbleSeries& s, std::string tag) {
    RadialProfile f;
    f.N = s.N;
    f.series = s;
    f.evaluator = [s](double r) { return s.eval(r); };
    f.decay_exponent = 2.0 * s.min_beta() - (s.has_log() ? 1e-3 : 0.0);
    f.kind = ProfileKind::composite;
    f.tag = std::move(tag);
    return f;
}

/// The bubble u_s, or v_{s,C} = C 2^{(N-2s)/2} u_s.
inline RadialProfile bubble_profile(const Params& p, double C = 1.0, BubbleConvention conv = BubbleConvention::u_s) {
    if (!(C > 0.0)) throw DomainError("bubble_profile: C must be positive");
    Params q = p;
    q.require_subcritical = true;
    q.validate();
    const double b = q.beta();
    const double coef = conv == BubbleConvention::u_s ? 1.0 : C * std::exp(b * std::numbers::ln2);
    RadialProfile f = power_profile(q.N, b, coef,
                                    conv == BubbleConvention::u_s ? "u_s(N=" + std::to_string(q.N) + ",s=" + std::to_string(q.s) + ")"
                                                                  : "v_sC(N=" + std::to_string(q.N) + ",s=" + std::to_string(q.s) +
                                                                        ",C=" + std::to_string(C) + ")");
    return f;
}

/// amp * exp(-r^2 / (2 sigma^2)); transform amp sigma^N exp(-sigma^2 rho^2 / 2).
inline RadialProfile gaussian_profile(int N, double sigma = 1.0, double amp = 1.0) {
    if (!(sigma > 0.0)) throw DomainError("gaussian_profile: sigma must be positive");
    RadialProfile f;
    f.N = N;
    f.evaluator = [sigma, amp](double r) { return amp * std::exp(-0.5 * r * r / (sigma * sigma)); };
    f.decay_exponent = std::numeric_limits<double>::infinity();
    f.kind = ProfileKind::gaussian;
    f.gaussian_sigma = sigma;
    f.gaussian_amp = amp;
    f.tag = "gaussian(sigma=" + std::to_string(sigma) + ")";
    return f;
}

/// Exact transform of a profile as a density.
inline SpectralDensity exact_density(const RadialProfile& f) {
    SpectralDensity g;
    g.N = f.N;
    g.tag = "F[" + f.tag + "]";
    if (f.kind == ProfileKind::gaussian) {
        const RadialProfile fc = f;
        g.evaluator = [fc](double rho) { return fc.exact_fourier(rho); };
        g.origin_exponent = 0.0;
        g.decay_rate = 1.0; // faster than any exponential
        return g;
    }
    if (!f.series) throw DomainError("profile '" + f.tag + "' has no exact Fourier pair");
    const BubbleSeries s = *f.series;
    g.evaluator = [s](double rho) { return s.fourier(rho); };
    g.origin_exponent = s.fourier_origin_exponent();
    g.origin_log = true;
    g.decay_rate = 1.0;
    return g;
}

inline double sqrt_2_over_pi() { return std::sqrt(2.0 / std::numbers::pi); }

namespace detail {

/// int_0^inf h(x) k(x) dx where h has the given origin exponent and either
/// exponential decay (rate > 0) or algebraic decay, and k is the radial
/// kernel of the N = 1 or N = 3 transform at frequency w.
inline QuadResult hankel_like(int N, const std::function<double(double)>& h, double w, double origin_exponent,
                              double rate, double decay_exponent, const std::string& tag) {
    if (N != 1 && N != 3) throw DomainError("numeric radial transforms support N = 1 or 3 only");
    // weight exponent at the origin and decay of h times the kernel
    const double w_origin = origin_exponent + (N == 3 ? 2.0 : 0.0);
    if (!(w_origin > -1.0))
        throw DivergenceError("radial transform of '" + tag + "': not integrable at the origin");
    auto kernel = [N, w](double x) {
        if (w == 0.0) return N == 3 ? x * x : 1.0;
        if (N == 1) return std::cos(w * x);
        const double y = w * x;
        return y < 1e-4 ? x * x * (1.0 - y * y / 6.0) : x * std::sin(y) / w;
    };
    auto integrand = [&](double x) { return x == 0.0 && w_origin > 0.0 ? 0.0 : h(x) * kernel(x); };
    if (rate > 0.0) {
        Integrand I;
        I.evaluator = integrand;
        I.a = 0.0;
        I.b = std::numeric_limits<double>::infinity();
        if (w_origin < 1.0) I.singularities.push_back({Endpoint::left, std::min(w_origin, 0.0), true});
        I.tail_rate = rate;
        return quad::integrate(I, tol_abs, tol_rel);
    }
    const double p = decay_exponent;
    if (w == 0.0) {
        if (!(p > N))
            throw DivergenceError("radial transform of '" + tag + "' at 0: decay exponent " + std::to_string(p) +
                                  " does not exceed N");
        Integrand I;
        I.evaluator = integrand;
        I.b = std::numeric_limits<double>::infinity();
        I.decay_exponent = p - (N - 1);
        if (w_origin < 1.0) I.singularities.push_back({Endpoint::left, std::min(w_origin, 0.0), true});
        return quad::integrate(I, tol_abs, tol_rel);
    }
    if (!(p > (N == 3 ? 1.0 : 0.0)))
        throw DivergenceError("radial transform of '" + tag + "': insufficient decay (exponent " + std::to_string(p) + ")");
    auto amp = [&](double x) {
        if (N == 1) return h(x);
        return x == 0.0 ? 0.0 : h(x) * x / w;
    };
    return quad::oscillatory(amp, 0.0, w, N == 1 ? quad::Trig::cos : quad::Trig::sin, tol_abs, 1e-10,
                             std::min(origin_exponent + (N == 3 ? 1.0 : 0.0), 0.0));
}

} // namespace detail

/// Numeric transform on a grid, with a spline through the samples.
inline SpectralDensity radial_fourier(int N, const RadialProfile& f, const std::vector<double>& rho_grid) {
    SpectralDensity g;
    g.N = N;
    g.tag = "numF[" + f.tag + "]";
    const double rate = f.gaussian_decay() ? 1.0 : 0.0;
    const std::function<double(double)> h = f.evaluator;
    for (double rho : rho_grid) {
        const QuadResult q = detail::hankel_like(N, h, rho, 0.0, rate, f.decay_exponent, f.tag);
        g.grid.push_back(rho);
        g.values.push_back(sqrt_2_over_pi() * q.value);
        g.errors.push_back(sqrt_2_over_pi() * q.abs_error_estimate);
    }
    if (g.grid.size() >= 2) {
        const CubicSpline sp(g.grid, g.values);
        g.evaluator = sp;
    } else if (!g.grid.empty()) {
        const double v = g.values[0];
        g.evaluator = [v](double) { return v; };
    }
    g.decay_rate = f.gaussian_decay() ? 1.0 : 0.0;
    return g;
}

/// Inverse transform at a single radius.
inline QuadResult inverse_at(int N, const SpectralDensity& g, double r) {
    const std::function<double(double)> h = g.evaluator;
    QuadResult q = detail::hankel_like(N, h, r, g.origin_exponent, g.decay_rate, g.decay_exponent, g.tag);
    return sqrt_2_over_pi() * q;
}

/// Numeric inverse transform on a grid, returned as a tabulated profile.
inline RadialProfile radial_inverse_fourier(int N, const SpectralDensity& g, const std::vector<double>& r_grid) {
    RadialProfile f;
    f.N = N;
    f.kind = ProfileKind::tabulated;
    f.tag = "invF[" + g.tag + "]";
    for (double r : r_grid) {
        const QuadResult q = inverse_at(N, g, r);
        f.grid.push_back(r);
        f.values.push_back(q.value);
        f.errors.push_back(q.abs_error_estimate);
    }
    if (f.grid.size() >= 2) {
        const CubicSpline sp(f.grid, f.values);
        f.evaluator = sp;
    } else if (!f.grid.empty()) {
        const double v = f.values[0];
        f.evaluator = [v](double) { return v; };
    }
    f.decay_exponent = 0.0;
    return f;
}

enum class Multiplier { frac, fraclog, log };

/// rho^{2s} g, rho^{2s} ln(rho^2) g, or ln(rho^2) g.
inline SpectralDensity apply_multiplier(Multiplier kind, double s, const SpectralDensity& g) {
    SpectralDensity r = g;
    const std::function<double(double)> base = g.evaluator;
    const double t = kind == Multiplier::log ? 0.0 : s;
    if (kind == Multiplier::frac) {
        if (t == 0.0) return r;
        r.evaluator = [base, t](double rho) { return std::pow(rho, 2.0 * t) * base(rho); };
    } else {
        r.evaluator = [base, t](double rho) {
            if (rho == 1.0) return 0.0;
            return std::pow(rho, 2.0 * t) * 2.0 * std::log(rho) * base(rho);
        };
        r.origin_log = true;
    }
    r.origin_exponent += 2.0 * t;
    r.tag = std::string(kind == Multiplier::frac ? "frac" : kind == Multiplier::fraclog ? "fraclog" : "log") + "(" +
            std::to_string(s) + ")" + g.tag;
    r.grid.clear();
    r.values.clear();
    r.errors.clear();
    return r;
}

/// |S^{N-1}| int_0^inf rho^{N-1} m(rho) |g(rho)|^2 d rho.
inline QuadResult energy(Multiplier kind, double s, const SpectralDensity& g, int N, double abs_tol = 1e-13,
                         double rel_tol = 1e-12) {
    const double t = kind == Multiplier::log ? 0.0 : s;
    const double ex = N - 1.0 + 2.0 * g.origin_exponent + 2.0 * t;
    if (!(ex > -1.0)) throw DivergenceError("energy of '" + g.tag + "': not integrable at the origin");
    const std::function<double(double)> base = g.evaluator;
    auto h = [&](double rho) {
        if (rho == 0.0) return 0.0;
        const double v = base(rho);
        double m = std::pow(rho, 2.0 * t);
        if (kind != Multiplier::frac) m *= 2.0 * std::log(rho);
        return std::pow(rho, N - 1.0) * m * v * v;
    };
    Integrand I;
    I.evaluator = h;
    I.b = std::numeric_limits<double>::infinity();
    if (ex < 1.0) I.singularities.push_back({Endpoint::left, std::min(ex, 0.0), true});
    if (g.decay_rate > 0.0) {
        I.tail_rate = 2.0 * g.decay_rate;
    } else {
        I.decay_exponent = 2.0 * g.decay_exponent - 2.0 * t - (N - 1.0);
        if (!(I.decay_exponent > 1.0)) throw DivergenceError("energy of '" + g.tag + "': insufficient decay");
    }
    const double area = constants::sphere_area(N - 1);
    return area * quad::integrate(I, abs_tol / area, rel_tol);
}

/// int_0^inf r^{N-1} (1+r^2)^{-beta} dr = B(N/2, beta - N/2)/2.
inline double radial_beta(int N, double beta) {
    if (!(beta > 0.5 * N)) throw DivergenceError("radial_beta: need beta > N/2");
    return 0.5 * std::exp(specfun::ln_beta(0.5 * N, beta - 0.5 * N).value);
}

/// int_0^inf r^{N-1} (1+r^2)^{-beta} ln(1+r^2) dr = radial_beta * (psi(beta) - psi(beta - N/2)).
inline double radial_beta_log(int N, double beta) {
    return radial_beta(N, beta) * (specfun::digamma(beta).value - specfun::digamma(beta - 0.5 * N).value);
}

/// ||u_s||_q^q = |S^{N-1}| B(N/2, q(N-2s)/2 - N/2)/2.
inline double lp_norm_bubble(const Params& p, double q) {
    Params r = p;
    r.require_subcritical = true;
    r.validate();
    if (!(q * (p.N - 2.0 * p.s) > p.N))
        throw DivergenceError("lp_norm_bubble: q(N-2s) <= N, the integral diverges");
    return constants::sphere_area(p.N - 1) * radial_beta(p.N, 0.5 * q * (p.N - 2.0 * p.s));
}

/// Ent_{p(s)}(u_s) = -N (psi(N) - psi(N/2)) - ln I with I = |S^{N-1}| B(N/2,N/2)/2;
/// independent of s.
inline double bubble_entropy_closed_form(int N) {
    const double I = constants::sphere_area(N - 1) * radial_beta(N, N);
    return -N * (specfun::digamma(N).value - specfun::digamma(0.5 * N).value) - std::log(I);
}

/// |S^{N-1}| int_0^inf r^{N-1} h(r) dr for a radial integrand with the given
/// decay (algebraic exponent of h, or Gaussian-type decay).
inline QuadResult radial_integral(int N, const std::function<double(double)>& h, double decay, double abs_tol = 1e-13,
                                  double rel_tol = 1e-12) {
    Integrand I;
    I.evaluator = [&](double r) { return r == 0.0 && N > 1 ? 0.0 : std::pow(r, N - 1.0) * h(r); };
    I.b = std::numeric_limits<double>::infinity();
    if (std::isinf(decay)) {
        I.tail_rate = 1.0;
    } else {
        I.decay_exponent = decay - (N - 1.0);
        if (!(I.decay_exponent > 1.0))
            throw DivergenceError("radial_integral: decay exponent " + std::to_string(decay) + " too small for N = " +
                                  std::to_string(N));
    }
    const double area = constants::sphere_area(N - 1);
    return area * quad::integrate(I, abs_tol / area, rel_tol);
}

/// int |f|^q over R^N.
inline QuadResult lq_norm_q(const RadialProfile& f, double q) {
    const double d = q * f.decay_exponent;
    if (!std::isinf(d) && !(d > f.N))
        throw DivergenceError("L^" + std::to_string(q) + " norm of '" + f.tag + "' diverges");
    return radial_integral(f.N, [&](double r) { return std::pow(std::fabs(f(r)), q); }, d);
}

/// Ent_p(f) = int (|f|^p/M) ln(|f|^p/M), M = int |f|^p.
inline QuadResult entropy(double p_exp, const RadialProfile& f) {
    const int N = f.N;
    const double d = p_exp * f.decay_exponent;
    if (!std::isinf(d) && !(d > N)) throw DivergenceError("entropy of '" + f.tag + "': |f|^p not integrable");
    const QuadResult M = radial_integral(N, [&](double r) { return std::pow(std::fabs(f(r)), p_exp); }, d);
    if (!(M.value > 0.0)) throw DomainError("entropy: profile '" + f.tag + "' has zero norm");
    // t ln t -> 0 as t -> 0; slightly weaker decay because of the log
    const QuadResult A = radial_integral(
        N,
        [&](double r) {
            const double t = std::pow(std::fabs(f(r)), p_exp);
            return t > 0.0 ? t * std::log(t) : 0.0;
        },
        std::isinf(d) ? d : d - 1e-3);
    QuadResult e;
    e.value = A.value / M.value - std::log(M.value);
    e.abs_error_estimate = A.abs_error_estimate / M.value +
                           (std::fabs(A.value) / (M.value * M.value) + 1.0 / M.value) * M.abs_error_estimate;
    e.evaluations = A.evaluations + M.evaluations;
    return e;
}

/// int |f|^2 ln|f| over R^N (unnormalised).
inline QuadResult shannon_term(const RadialProfile& f) {
    const double d = 2.0 * f.decay_exponent;
    return radial_integral(
        f.N,
        [&](double r) {
            const double v = std::fabs(f(r));
            return v > 0.0 ? v * v * std::log(v) : 0.0;
        },
        std::isinf(d) ? d : d - 1e-3);
}

/// int |x|^2 |f|^2 over R^N.
inline QuadResult second_moment(const RadialProfile& f) {
    const double d = 2.0 * f.decay_exponent - 2.0;
    if (!std::isinf(d) && !(d > f.N)) throw DivergenceError("second moment of '" + f.tag + "' diverges");
    return radial_integral(
        f.N,
        [&](double r) {
            const double v = f(r);
            return r * r * v * v;
        },
        d);
}

} // namespace euclid
} // namespace fraclog
