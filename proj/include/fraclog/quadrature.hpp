#pragma once

// One-dimensional quadrature with error estimates, Brent root finding and
// Ridders' numerical derivative.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "fraclog/errors.hpp"

namespace fraclog {

struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        abs_error_estimate += o.abs_error_estimate;
        evaluations += o.evaluations;
        return *this;
    }
    friend QuadResult operator+(QuadResult a, const QuadResult& b) { return a += b; }
    friend QuadResult operator*(double c, QuadResult a) {
        a.value *= c;
        a.abs_error_estimate *= std::fabs(c);
        return a;
    }
};

enum class Endpoint { left, right };

struct SingularitySpec {
    Endpoint endpoint = Endpoint::left;
    double algebraic_exponent = 0.0; ///< f ~ |x - e|^alpha near the endpoint, alpha > -1
    bool has_log_factor = false;
};

/// Integrand on [a, b]; b may be +infinity. For infinite b, `decay_exponent`
/// p means f(x) = O(x^{-p}) and must exceed 1, unless `tail_rate` > 0, in
/// which case |f| is assumed to decay at least like e^{-tail_rate x} beyond
/// the truncation point.
struct Integrand {
    std::function<double(double)> evaluator;
    double a = 0.0;
    double b = 1.0;
    std::vector<SingularitySpec> singularities;
    double decay_exponent = std::numeric_limits<double>::quiet_NaN();
    double tail_rate = 0.0;
};

struct RootResult {
    double root = 0.0;
    double lo = 0.0, hi = 0.0; ///< final bracket
    double residual = 0.0;
    int iterations = 0;
};

struct Derivative {
    double value = 0.0;
    double error = 0.0;
};

namespace quad {

inline constexpr int default_max_subdivisions = 4000;

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights.
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    double floor; ///< rounding-error floor of this panel
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
inline Segment gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = fc * wg[3], resk = fc * wgk[7], resabs = std::fabs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 3; ++j) {
        const int jj = 2 * j + 1;
        const double dx = h * xgk[jj];
        const double f1 = f(c - dx), f2 = f(c + dx);
        fv1[jj] = f1;
        fv2[jj] = f2;
        resg += wg[j] * (f1 + f2);
        resk += wgk[jj] * (f1 + f2);
        resabs += wgk[jj] * (std::fabs(f1) + std::fabs(f2));
    }
    for (int j = 0; j < 4; ++j) {
        const int jj = 2 * j;
        const double dx = h * xgk[jj];
        const double f1 = f(c - dx), f2 = f(c + dx);
        fv1[jj] = f1;
        fv2[jj] = f2;
        resk += wgk[jj] * (f1 + f2);
        resabs += wgk[jj] * (std::fabs(f1) + std::fabs(f2));
    }
    const double reskh = resk * 0.5;
    double resasc = wgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
    const double ah = std::fabs(h);
    const double result = resk * h;
    resabs *= ah;
    resasc *= ah;
    double err = std::fabs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double floor = 8.0 * eps * resabs;
    err = std::max(floor, err);
    if (!std::isfinite(result))
        throw DomainError("quadrature: integrand is not finite on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
    return Segment{a, b, result, err, floor};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 on a finite interval for an integrand
/// that is smooth up to the endpoints. The error estimate is QUADPACK's
/// scaled |K15 - G7|.
template <class F>
QuadResult adaptive(const F& f, double a, double b, double abs_tol, double rel_tol,
                    int max_subdivisions = default_max_subdivisions) {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("quadrature: tolerances must be positive");
    if (a == b) return QuadResult{0.0, 0.0, 1};
    long evals = 0;
    auto counted = [&](double x) {
        ++evals;
        return f(x);
    };
    std::priority_queue<detail::Segment> work;
    std::vector<detail::Segment> done;
    work.push(detail::gk15(counted, a, b));
    double total = work.top().value, err = work.top().error;
    int nsub = 1;
    const double width_floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(a), std::fabs(b));
    while (!work.empty() && err > std::max(abs_tol, rel_tol * std::fabs(total))) {
        if (nsub >= max_subdivisions) break;
        detail::Segment s = work.top();
        work.pop();
        const double m = 0.5 * (s.a + s.b);
        if (std::fabs(s.b - s.a) <= width_floor || m == s.a || m == s.b || s.error <= s.floor) {
            done.push_back(s);
            continue;
        }
        const detail::Segment l = detail::gk15(counted, s.a, m);
        const detail::Segment r = detail::gk15(counted, m, s.b);
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        work.push(l);
        work.push(r);
        ++nsub;
    }
    // Re-sum from scratch to avoid drift in the running totals.
    double v = 0.0, e = 0.0;
    bool refinable = false;
    for (const auto& s : done) {
        v += s.value;
        e += s.error;
    }
    while (!work.empty()) {
        v += work.top().value;
        e += work.top().error;
        refinable = true;
        work.pop();
    }
    QuadResult r{v, e, evals};
    // Panels that hit their rounding floor are accepted: the estimate is then
    // limited by floating point, not by the rule.
    if (refinable && e > std::max(abs_tol, rel_tol * std::fabs(v)))
        throw ConvergenceError("quadrature: tolerance not reached after " + std::to_string(nsub) +
                                   " subdivisions (estimate " + std::to_string(v) + ", error " +
                                   std::to_string(e) + ")",
                               v, e);
    return r;
}

/// Adaptive integration that never throws on budget exhaustion; returns the
/// best estimate and its (unmet) error estimate.
template <class F>
QuadResult adaptive_best(const F& f, double a, double b, double abs_tol, double rel_tol, int max_subdivisions) {
    try {
        return adaptive(f, a, b, abs_tol, rel_tol, max_subdivisions);
    } catch (const ConvergenceError& e) {
        return QuadResult{e.best_estimate, e.error_estimate, 0};
    }
}

/// \f$\int_0^L g(d)\,dd\f$ where g ~ d^alpha (possibly times ln d) at d = 0.
/// Uses d = L u^m with m = 2/(1+alpha), so the transformed integrand
/// vanishes linearly at u = 0. `g` receives the distance d from the endpoint.
template <class G>
QuadResult endpoint_singular(const G& g, double L, double alpha, double abs_tol, double rel_tol,
                             int max_subdivisions = default_max_subdivisions) {
    if (!(alpha > -1.0)) throw DomainError("quadrature: algebraic exponent must exceed -1");
    if (L == 0.0) return QuadResult{0.0, 0.0, 1};
    const double m = alpha < 1.0 ? 2.0 / (1.0 + alpha) : 1.0;
    auto h = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double d = L * std::pow(u, m);
        if (d <= 0.0) return 0.0;
        return g(d) * L * m * std::pow(u, m - 1.0);
    };
    return adaptive(h, 0.0, 1.0, abs_tol, rel_tol, max_subdivisions);
}

/// General entry point. Endpoint singularities are handled by the power
/// substitution above; a singularity at both ends splits the interval at its
/// midpoint. Semi-infinite domains are split at a+1 and the tail is mapped
/// by x = a + 1/v (equivalently r = t/(1-t) written in v = 1-t), or truncated
/// with a tail bound when `tail_rate` > 0.
inline QuadResult integrate(const Integrand& f, double abs_tol, double rel_tol,
                            int max_subdivisions = default_max_subdivisions) {
    if (!f.evaluator) throw DomainError("quadrature: empty integrand");
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("quadrature: tolerances must be positive");
    const SingularitySpec* left = nullptr;
    const SingularitySpec* right = nullptr;
    for (const auto& s : f.singularities) {
        if (!(s.algebraic_exponent > -1.0))
            throw DomainError("quadrature: singularity exponent must exceed -1, got " +
                              std::to_string(s.algebraic_exponent));
        (s.endpoint == Endpoint::left ? left : right) = &s;
    }
    const auto& ev = f.evaluator;
    const double a = f.a;

    auto left_part = [&](double lo, double hi, double at, double ar) {
        if (left)
            return endpoint_singular([&](double d) { return ev(lo + d); }, hi - lo, left->algebraic_exponent, at, ar,
                                     max_subdivisions);
        return adaptive(ev, lo, hi, at, ar, max_subdivisions);
    };

    if (std::isinf(f.b)) {
        if (f.b < 0) throw DomainError("quadrature: only [a, +inf) is supported");
        QuadResult head = left_part(a, a + 1.0, 0.5 * abs_tol, rel_tol);
        if (f.tail_rate > 0.0) {
            // Truncate where the envelope bound |f(R)|/rate drops below abs_tol/10.
            double R = a + 1.0, step = 1.0;
            auto local_max = [&](double x) {
                double m = 0.0;
                for (int i = 0; i <= 8; ++i) m = std::max(m, std::fabs(ev(x + i * 0.125 / f.tail_rate)));
                return m;
            };
            double fr = local_max(R);
            while (fr / f.tail_rate > 0.1 * abs_tol && R < 1e6) {
                R += step;
                step *= 1.5;
                fr = local_max(R);
            }
            const double tail_bound = 2.0 * fr / f.tail_rate;
            QuadResult body = adaptive(ev, a + 1.0, R, 0.5 * abs_tol, rel_tol, max_subdivisions);
            QuadResult r = head + body;
            r.abs_error_estimate += tail_bound;
            return r;
        }
        const double p = f.decay_exponent;
        if (!(p > 1.0))
            throw DivergenceError("quadrature: semi-infinite integrand needs decay exponent > 1 (got " +
                                  std::to_string(p) + ")");
        const double alpha = std::min(p - 2.0, 0.0);
        auto g = [&](double v) { return ev(a + 1.0 / v) / (v * v); };
        QuadResult tail = endpoint_singular(g, 1.0, alpha, 0.5 * abs_tol, rel_tol, max_subdivisions);
        return head + tail;
    }

    const double b = f.b;
    if (left && right) {
        const double m = 0.5 * (a + b);
        QuadResult l = endpoint_singular([&](double d) { return ev(a + d); }, m - a, left->algebraic_exponent,
                                         0.5 * abs_tol, rel_tol, max_subdivisions);
        QuadResult r = endpoint_singular([&](double d) { return ev(b - d); }, b - m, right->algebraic_exponent,
                                         0.5 * abs_tol, rel_tol, max_subdivisions);
        return l + r;
    }
    if (left) return left_part(a, b, abs_tol, rel_tol);
    if (right)
        return endpoint_singular([&](double d) { return ev(b - d); }, b - a, right->algebraic_exponent, abs_tol,
                                 rel_tol, max_subdivisions);
    return adaptive(ev, a, b, abs_tol, rel_tol, max_subdivisions);
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums. Returns
/// the extrapolated limit from the highest even column available.
inline double wynn_epsilon(const std::vector<double>& s) {
    const std::size_t n = s.size();
    if (n < 3) return s.empty() ? 0.0 : s.back();
    std::vector<double> prev(n + 1, 0.0), cur(s.begin(), s.end());
    double best = s.back();
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<double> next(n - k);
        bool ok = true;
        for (std::size_t i = 0; i + k < n; ++i) {
            const double diff = cur[i + 1] - cur[i];
            if (diff == 0.0) {
                ok = false;
                break;
            }
            next[i] = prev[i + 1] + 1.0 / diff;
        }
        if (!ok) break;
        prev = cur;
        cur = next;
        if (k % 2 == 0) best = cur.back();
    }
    return best;
}

enum class Trig { cos, sin };

/// \f$\int_a^\infty f(x)\,w(\omega x)\,dx\f$ with w = cos or sin, for f decaying
/// algebraically. Integrates between consecutive zeros of w and extrapolates
/// the partial sums with the epsilon algorithm. `left_alpha` describes an
/// algebraic singularity of f at x = a (use 0 when f is regular there).
template <class F>
QuadResult oscillatory(const F& f, double a, double omega, Trig kind, double abs_tol, double rel_tol,
                       double left_alpha = 0.0, int max_cycles = 400) {
    if (!(omega > 0.0)) throw DomainError("oscillatory quadrature: frequency must be positive");
    auto w = [&](double x) { return kind == Trig::cos ? std::cos(omega * x) : std::sin(omega * x); };
    auto fw = [&](double x) { return f(x) * w(x); };
    const double half = std::numbers::pi / omega;
    // first zero of w strictly beyond a
    const double phase = kind == Trig::cos ? 0.5 : 0.0;
    double k0 = std::floor(a / half - phase) + 1.0;
    double x0 = (k0 + phase) * half;
    if (x0 <= a) x0 += half;
    QuadResult total;
    const double tol_piece = 0.1 * abs_tol;
    if (left_alpha != 0.0) {
        total += endpoint_singular([&](double d) { return fw(a + d); }, x0 - a, left_alpha, tol_piece, rel_tol);
    } else {
        total += adaptive(fw, a, x0, tol_piece, rel_tol);
    }
    std::vector<double> sums{total.value};
    double last = total.value, prev_est = std::numeric_limits<double>::quiet_NaN();
    double est = total.value, err = std::numeric_limits<double>::infinity();
    double lo = x0;
    for (int k = 0; k < max_cycles; ++k) {
        const QuadResult piece = adaptive(fw, lo, lo + half, tol_piece, rel_tol);
        lo += half;
        total.evaluations += piece.evaluations;
        total.abs_error_estimate += piece.abs_error_estimate;
        last += piece.value;
        sums.push_back(last);
        if (sums.size() > 60) sums.erase(sums.begin());
        if (sums.size() >= 6) {
            const double e = wynn_epsilon(sums);
            if (std::isfinite(prev_est)) {
                err = std::fabs(e - prev_est);
                est = e;
                if (err <= std::max(abs_tol, rel_tol * std::fabs(est)) && k >= 10) {
                    total.value = est;
                    total.abs_error_estimate += err;
                    return total;
                }
            }
            prev_est = e;
        }
    }
    throw ConvergenceError("oscillatory quadrature: extrapolation did not settle", est, err);
}

/// Brent's method on a sign-changing bracket.
template <class G>
RootResult find_root(const G& g, double lo, double hi, double tol, int max_iter = 300) {
    double a = lo, b = hi, fa = g(a), fb = g(b);
    if (std::isnan(fa) || std::isnan(fb)) throw DomainError("find_root: function is NaN at bracket end");
    if (fa == 0.0) return RootResult{a, a, a, 0.0, 0};
    if (fb == 0.0) return RootResult{b, b, b, 0.0, 0};
    if ((fa > 0) == (fb > 0))
        throw DomainError("find_root: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    double c = a, fc = fa, d = b - a, e = d;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int it = 1; it <= max_iter; ++it) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) {
            RootResult r;
            r.root = b;
            r.lo = std::min(b, c);
            r.hi = std::max(b, c);
            r.residual = fb;
            r.iterations = it;
            return r;
        }
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::fabs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = g(b);
    }
    throw ConvergenceError("find_root: iteration limit reached", b, std::fabs(c - b));
}

/// Ridders' extrapolated central difference.
template <class F>
Derivative derivative_ridders(const F& f, double x, double h0) {
    constexpr int ntab = 12;
    constexpr double con = 1.4, con2 = con * con, safe = 2.0;
    double a[ntab][ntab];
    double hh = h0;
    a[0][0] = (f(x + hh) - f(x - hh)) / (2.0 * hh);
    Derivative best{a[0][0], std::numeric_limits<double>::max()};
    for (int i = 1; i < ntab; ++i) {
        hh /= con;
        a[0][i] = (f(x + hh) - f(x - hh)) / (2.0 * hh);
        double fac = con2;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= con2;
            const double errt = std::max(std::fabs(a[j][i] - a[j - 1][i]), std::fabs(a[j][i] - a[j - 1][i - 1]));
            if (errt <= best.error) {
                best.error = errt;
                best.value = a[j][i];
            }
        }
        if (std::fabs(a[i][i] - a[i - 1][i - 1]) >= safe * best.error) break;
    }
    return best;
}

} // namespace quad

/// Convenience wrappers with the names used throughout the library.
inline QuadResult integrate(const Integrand& f, double abs_tol, double rel_tol) {
    return quad::integrate(f, abs_tol, rel_tol);
}

template <class G>
RootResult find_root(const G& g, double lo, double hi, double tol) {
    return quad::find_root(g, lo, hi, tol);
}

} // namespace fraclog
