#pragma once

// Singular-integral form of P_s, P_slog and P_log at the north pole for
// zonal functions, and the convergence experiments built on it.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fraclog/constants.hpp"
#include "fraclog/quadrature.hpp"
#include "fraclog/report.hpp"
#include "fraclog/spectral.hpp"

namespace fraclog {

enum class Smoothness { bounded, holder, c2, analytic };

/// Zonal function u(zeta) = f(z . zeta) on S^N.
struct ZonalFunction {
    int N = 2;
    std::function<double(double)> profile;
    /// Optional accurate u(1) - u(1-w); defaults to the direct difference.
    std::function<double(double)> drop_fn;
    Smoothness smoothness = Smoothness::c2;
    std::optional<ZonalExpansion> expansion;

    double operator()(double t) const { return profile(t); }

    double drop(double w) const { return drop_fn ? drop_fn(w) : profile(1.0) - profile(1.0 - w); }

    static ZonalFunction from_expansion(const ZonalExpansion& u) {
        ZonalFunction f;
        f.N = u.N;
        f.smoothness = Smoothness::analytic;
        f.expansion = u;
        f.profile = [u](double t) { return u.eval(t); };
        f.drop_fn = [u](double w) { return u.drop(w); };
        return f;
    }

    static ZonalFunction constant(int N, double c) { return from_expansion(ZonalExpansion::constant(N, c)); }

    static ZonalFunction from_profile(int N, std::function<double(double)> f, Smoothness sm = Smoothness::c2) {
        ZonalFunction z;
        z.N = N;
        z.profile = std::move(f);
        z.smoothness = sm;
        return z;
    }
};

namespace sphere_kernel {

struct KernelTolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
};

/// Operator value at the pole:
///   const * |S^{N-1}| * int_0^2 (u(1) - u(1-w)) (2w)^{-e} (w(2-w))^{(N-2)/2} W(w) dw
///   + zero_order * u(1),
/// with e = (N+2s)/2 and W = 1 (P_s), W = -ln(2w) + b_{N,s} (P_slog); for
/// P_log e = N/2, W = 1 and the constants are c_N, A_N. Here w = 1 - t.
inline QuadResult apply_kernel_at_pole(Op op, const Params& p, const ZonalFunction& u, KernelTolerance tol = {}) {
    if (u.N != p.N) throw DomainError("apply_kernel_at_pole: dimension mismatch");
    if (u.smoothness == Smoothness::bounded || u.smoothness == Smoothness::holder)
        throw DomainError("apply_kernel_at_pole: profile must be C^2 near the pole");
    const int N = p.N;
    double e, cst, zero, b = 0.0, sing;
    if (op == Op::P_log) {
        e = 0.5 * N;
        cst = constants::c_N(N);
        zero = constants::A_N(N);
        sing = 0.0;
    } else {
        const ConstantSet k = eval_constants(p);
        e = 0.5 * N + p.s;
        cst = k.c_Ns;
        zero = op == Op::P_s ? k.A_Ns : k.Aprime_Ns;
        b = k.b_Ns;
        sing = -p.s;
    }
    const double al = 0.5 * (N - 2.0);
    // wc = 2 - w is passed separately so the far endpoint keeps its precision
    auto weight = [&](double w, double wc) {
        double k = std::pow(2.0 * w, -e) * std::pow(w * wc, al);
        if (op == Op::P_slog) k *= -std::log(2.0 * w) + b;
        return k;
    };
    auto near = [&](double w) { return u.drop(w) * weight(w, 2.0 - w); };
    auto far = [&](double v) { return u.drop(2.0 - v) * weight(2.0 - v, v); };
    const double area = constants::sphere_area(N - 1);
    const double scale = cst * area;
    const double at = 0.5 * tol.abs_tol / scale;
    QuadResult r = quad::endpoint_singular(near, 1.0, sing, at, tol.rel_tol);
    r += quad::endpoint_singular(far, 1.0, std::min(al, 0.0), at, tol.rel_tol);
    r = scale * r;
    r.value += zero * u(1.0);
    return r;
}

/// Same for P_log, which does not depend on s.
inline QuadResult apply_log_kernel_at_pole(const ZonalFunction& u, KernelTolerance tol = {}) {
    return apply_kernel_at_pole(Op::P_log, Params(u.N, 0.25, false), u, tol);
}

/// Value at the pole of the spectrally applied operator.
inline double spectral_at_pole(Op op, const Params& p, const ZonalExpansion& u) {
    return spectral::apply_spectral(op, p, u).eval(1.0);
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// |(P^{s+h}u - P^s u)/h - P^{s+ln}u| at the pole for each h, spectrally,
/// with the fitted order; the kernel-route quotient is compared with the
/// spectral one at `kernel_h` (skipped when kernel_h <= 0).
inline AuditReport difference_quotient_check(const Params& p, const ZonalExpansion& u, const std::vector<double>& h_list,
                                             double kernel_h = 1e-3, double tol_scale = 1.0) {
    for (double h : h_list)
        if (!(p.s + h < 1.0 && p.s - h > 0.0)) throw DomainError("difference_quotient_check: s +- h must lie in (0,1)");
    const double target = spectral_at_pole(Op::P_slog, p, u);
    const double base = spectral_at_pole(Op::P_s, p, u);
    std::vector<double> errs;
    std::vector<AuditReport> kids;
    AuditReport table = AuditReport::inequality("dq.errors_positive", 1.0, 0.0, 0.0, true);
    for (double h : h_list) {
        const double up = spectral_at_pole(Op::P_s, Params(p.N, p.s + h), u);
        const double err = std::fabs((up - base) / h - target);
        errs.push_back(err);
        table.detail("h=" + std::to_string(h), err);
    }
    double slope = std::nan("");
    bool nonzero = true;
    for (double e : errs) nonzero = nonzero && e > 0.0;
    if (nonzero && errs.size() >= 2) slope = loglog_slope(h_list, errs);
    AuditReport order = AuditReport::equality("dq.order", slope, 1.0, 0.2 * tol_scale);
    order.with("N", p.N).with("s", p.s);
    kids.push_back(order);
    if (kernel_h > 0.0) {
        const ZonalFunction f = ZonalFunction::from_expansion(u);
        const KernelTolerance tight{1e-13, 1e-13};
        const QuadResult k0 = apply_kernel_at_pole(Op::P_s, p, f, tight);
        const QuadResult k1 = apply_kernel_at_pole(Op::P_s, Params(p.N, p.s + kernel_h), f, tight);
        const double dq_kernel = (k1.value - k0.value) / kernel_h;
        const double dq_spec = (spectral_at_pole(Op::P_s, Params(p.N, p.s + kernel_h), u) - base) / kernel_h;
        AuditReport agree = AuditReport::equality("dq.kernel_vs_spectral", dq_kernel, dq_spec, 1e-6 * tol_scale,
                                                  std::max(1.0, std::fabs(dq_spec)));
        agree.detail("h", kernel_h);
        agree.detail("kernel_error_budget", (k0.abs_error_estimate + k1.abs_error_estimate) / kernel_h);
        kids.push_back(agree);
    }
    AuditReport r = AuditReport::composite("sphere_kernel.difference_quotient", kids);
    r.with("N", p.N).with("s", p.s);
    r.detail("order", slope);
    for (std::size_t i = 0; i < h_list.size(); ++i) r.detail("err_h" + std::to_string(i), errs[i]);
    return r;
}

/// |P^{s+ln}u - P^{ln}u| at the pole along a decreasing list of orders, by the
/// spectral route and the kernel route; both must decrease with fitted order
/// close to 1.
inline AuditReport slimit_check(int N, const ZonalExpansion& u, const std::vector<double>& s_list,
                                bool kernel_route = true, double tol_scale = 1.0) {
    for (std::size_t i = 1; i < s_list.size(); ++i)
        if (!(s_list[i] < s_list[i - 1])) throw DomainError("slimit_check: orders must be decreasing");
    const double ref = spectral_at_pole(Op::P_log, Params(N, s_list.front()), u);
    const ZonalFunction f = ZonalFunction::from_expansion(u);
    const KernelTolerance tight{1e-13, 1e-12};
    const double ref_k = kernel_route ? apply_log_kernel_at_pole(f, tight).value : 0.0;
    std::vector<double> gaps, gaps_k;
    for (double s : s_list) {
        gaps.push_back(std::fabs(spectral_at_pole(Op::P_slog, Params(N, s), u) - ref));
        if (kernel_route) gaps_k.push_back(std::fabs(apply_kernel_at_pole(Op::P_slog, Params(N, s), f, tight).value - ref_k));
    }
    auto monotone = [](const std::vector<double>& g) {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < g.size(); ++i) worst = std::min(worst, g[i - 1] - g[i]);
        return worst;
    };
    const double order = loglog_slope(s_list, gaps);
    const double order_k = kernel_route ? loglog_slope(s_list, gaps_k) : std::nan("");
    std::vector<AuditReport> kids;
    kids.push_back(AuditReport::inequality("slimit.spectral.decreasing", monotone(gaps), 0.0, 0.0, true));
    kids.push_back(AuditReport::equality("slimit.spectral.order", order, 1.0, 0.2 * tol_scale));
    if (kernel_route) {
        kids.push_back(AuditReport::inequality("slimit.kernel.decreasing", monotone(gaps_k), 0.0, 0.0, true));
        kids.push_back(AuditReport::equality("slimit.kernel.order", order_k, 1.0, 0.2 * tol_scale));
    }
    AuditReport r = AuditReport::composite("sphere_kernel.slimit", kids);
    r.with("N", N);
    r.detail("order", order);
    if (kernel_route) r.detail("order_kernel", order_k);
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        r.detail("s" + std::to_string(i), s_list[i]);
        r.detail("gap_spectral" + std::to_string(i), gaps[i]);
        if (kernel_route) r.detail("gap_kernel" + std::to_string(i), gaps_k[i]);
    }
    return r;
}

/// Finiteness test for int_0^1 omega(r) r^{-1-2s} (1 + |ln r|) dr from partial
/// integrals over [eps, 1], eps in {1e-2, 1e-4, 1e-6}. With d1, d2 the two
/// increments, q = d2/d1 < 1/2 reads as finite (value extrapolated with the
/// geometric tail d2 q/(1-q)), q >= 1 as divergent, anything else inconclusive.
inline AuditReport dini_test(double s, const std::function<double(double)>& omega) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("dini_test: s must lie in (0,1)");
    // r = e^{-x}: integrand omega(e^{-x}) e^{2 s x} (1 + x), smooth in x
    auto g = [&](double x) {
        const double r = std::exp(-x);
        const double w = omega(r);
        if (w == 0.0) return 0.0;
        return w * std::exp(2.0 * s * x) * (1.0 + x);
    };
    const double eps[3] = {1e-2, 1e-4, 1e-6};
    double partial[3];
    double lo = 0.0, acc = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double hi = -std::log(eps[i]);
        acc += quad::adaptive(g, lo, hi, 1e-14, 1e-12).value;
        partial[i] = acc;
        lo = hi;
    }
    const double d1 = partial[1] - partial[0], d2 = partial[2] - partial[1];
    std::string verdict;
    double value = partial[2];
    double q = std::nan("");
    if (d1 == 0.0 && d2 == 0.0) {
        verdict = "finite";
    } else {
        q = d1 != 0.0 ? d2 / d1 : std::numeric_limits<double>::infinity();
        if (q < 0.5) {
            verdict = "finite";
            value = partial[2] + d2 * q / (1.0 - q);
        } else if (q >= 1.0) {
            verdict = "divergent";
            value = std::numeric_limits<double>::infinity();
        } else {
            verdict = "inconclusive";
        }
    }
    AuditReport r = AuditReport::equality("sphere_kernel.dini", partial[2], value, 0.0);
    r.pass = verdict != "inconclusive";
    r.residual = std::isfinite(value) ? partial[2] - value : std::numeric_limits<double>::infinity();
    r.tolerance = std::isfinite(value) ? std::fabs(r.residual) : 0.0;
    r.tag("verdict", verdict);
    r.with("s", s);
    r.detail("partial_1e-2", partial[0]).detail("partial_1e-4", partial[1]).detail("partial_1e-6", partial[2]);
    r.detail("increment_ratio", q);
    return r;
}

} // namespace sphere_kernel
} // namespace fraclog
