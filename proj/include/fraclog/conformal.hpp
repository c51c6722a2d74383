#pragma once

// Stereographic projection, the pullback T_s u = phi^{(N-2s)/2} u o sigma^{-1}
// with phi(x) = 2/(1+|x|^2), and checks of the sphere <-> R^N transfer laws.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fraclog/constants.hpp"
#include "fraclog/errors.hpp"
#include "fraclog/euclid_radial.hpp"
#include "fraclog/quadrature.hpp"
#include "fraclog/report.hpp"
#include "fraclog/spectral.hpp"
#include "fraclog/sphere_kernel.hpp"

namespace fraclog {

/// A zonal function and its Euclidean image under T_s.
struct SphereEuclidPair {
    ZonalFunction sphere_fn;
    RadialProfile euclid_fn;
    double order = 0.0;
    bool constructed = true; ///< false when euclid_fn was supplied rather than built
};

namespace conformal {

inline double phi(double r) { return 2.0 / (1.0 + r * r); }
inline double log_phi(double r) { return std::numbers::ln2 - std::log1p(r * r); }

/// Polar cosine of sigma^{-1}(x) for |x| = r.
inline double polar_cosine(double r) { return (1.0 - r * r) / (1.0 + r * r); }

/// Radius |sigma(z)| for polar cosine t > -1.
inline double radius_of(double t) {
    if (!(t > -1.0)) throw DomainError("radius_of: the south pole has no image");
    return std::sqrt((1.0 - t) / (1.0 + t));
}

/// x = z'/(1 + z_{N+1}).
inline std::vector<double> stereographic(const std::vector<double>& z) {
    if (z.size() < 2) throw DomainError("stereographic: need a point of S^N with N >= 1");
    const double last = z.back();
    double nrm = 0.0;
    for (double c : z) nrm += c * c;
    if (std::fabs(nrm - 1.0) > 1e-12) throw DomainError("stereographic: input is not a unit vector");
    if (!(1.0 + last > 1e-300) || last <= -1.0 + 1e-15)
        throw DomainError("stereographic: the south pole has no image");
    std::vector<double> x(z.begin(), z.end() - 1);
    for (double& c : x) c /= 1.0 + last;
    return x;
}

/// x -> (2x/(1+|x|^2), (1-|x|^2)/(1+|x|^2)).
inline std::vector<double> inverse_stereographic(const std::vector<double>& x) {
    if (x.empty()) throw DomainError("inverse_stereographic: empty point");
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    std::vector<double> z;
    z.reserve(x.size() + 1);
    for (double c : x) z.push_back(2.0 * c / (1.0 + r2));
    z.push_back((1.0 - r2) / (1.0 + r2));
    return z;
}

inline double pullback_exponent(int N, double s) {
    if (!(s >= 0.0 && s < 1.0)) throw DomainError("pullback: order must lie in [0,1)");
    if (!(N > 2.0 * s)) throw DomainError("pullback: need N > 2s");
    return 0.5 * (N - 2.0 * s);
}

/// Exact pullback of a zonal expansion: sum_j e_j 2^{b+j} (1+r^2)^{-(b+j)}.
inline BubbleSeries pullback_series(double s, const ZonalExpansion& u) {
    const double b = pullback_exponent(u.N, s);
    const auto e = u.powers_of_one_plus_t();
    BubbleSeries out{u.N, {}};
    for (std::size_t j = 0; j < e.size(); ++j) {
        if (e[j] == 0.0) continue;
        const double bj = b + double(j);
        out.terms.push_back({e[j] * std::exp(bj * std::numbers::ln2), 0.0, bj});
    }
    return out;
}

inline RadialProfile pullback(double s, const ZonalFunction& u) {
    const double b = pullback_exponent(u.N, s);
    if (u.expansion) {
        RadialProfile f = euclid::from_series(pullback_series(s, *u.expansion), "T_s[zonal]");
        f.decay_exponent = 2.0 * b;
        return f;
    }
    RadialProfile f;
    f.N = u.N;
    const ZonalFunction uc = u;
    f.evaluator = [uc, b](double r) { return std::pow(phi(r), b) * uc(polar_cosine(r)); };
    f.decay_exponent = 2.0 * b;
    f.kind = ProfileKind::composite;
    f.tag = "T_s[profile]";
    return f;
}

/// u(t) = phi(r)^{-(N-2s)/2} v(r) with r = |sigma| at polar cosine t.
inline ZonalFunction inverse_pullback(double s, const RadialProfile& v) {
    const double b = pullback_exponent(v.N, s);
    const RadialProfile vc = v;
    return ZonalFunction::from_profile(v.N, [vc, b](double t) {
        const double r = radius_of(t);
        return std::pow(phi(r), -b) * vc(r);
    });
}

inline SphereEuclidPair make_pair(double s, const ZonalFunction& u) { return {u, pullback(s, u), s, true}; }

/// max_r |v(r) - phi^b u(t(r))| / max|v| over the samples.
inline AuditReport pair_consistency(const SphereEuclidPair& pr, const std::vector<double>& r_samples, double tol = 1e-12) {
    const double b = pullback_exponent(pr.sphere_fn.N, pr.order);
    double worst = 0.0, scale = 0.0;
    for (double r : r_samples) {
        const double a = pr.euclid_fn(r);
        const double e = std::pow(phi(r), b) * pr.sphere_fn(polar_cosine(r));
        worst = std::max(worst, std::fabs(a - e));
        scale = std::max(scale, std::fabs(e));
    }
    return AuditReport::equality("pair.consistency", worst / std::max(scale, 1e-300), 0.0, tol)
        .with("s", pr.order)
        .tag("constructed", pr.constructed ? "true" : "false");
}

/// int_{S^N} ln(phi o sigma) dV = |S^{N-1}| 2^N [ln2 B_N(N) - B^log_N(N)] in Beta form.
inline double log_phi_integral_closed(int N) {
    return constants::sphere_area(N - 1) * std::exp(N * std::numbers::ln2) *
           (std::numbers::ln2 * euclid::radial_beta(N, N) - euclid::radial_beta_log(N, N));
}

/// The same integral as a zonal quadrature of ln(1+t).
inline QuadResult log_phi_integral_quad(int N) {
    return spectral::zonal_integral(
        N, [](const spectral::PolarPoint& q) { return std::log(q.one_plus_t); }, 1e-13, 1e-12);
}

/// int_{S^N} (u^2/||u||^2) ln(phi o sigma) dV.
inline QuadResult weighted_log_phi(const ZonalExpansion& u) {
    const double n2 = u.norm2();
    if (!(n2 > 0.0)) throw DomainError("weighted_log_phi: zero function");
    QuadResult q = spectral::zonal_integral(
        u.N,
        [&](const spectral::PolarPoint& x) {
            const double v = u.eval(x.t);
            return v * v * std::log(x.one_plus_t);
        },
        1e-13 * n2, 1e-12);
    return (1.0 / n2) * q;
}

/// int_{S^N} (u^2/||u||^2) ln(u^2/||u||^2) dV.
inline QuadResult sphere_entropy2(const ZonalExpansion& u) {
    const double n2 = u.norm2();
    if (!(n2 > 0.0)) throw DomainError("sphere_entropy2: zero function");
    return spectral::zonal_integral(
        u.N,
        [&](const spectral::PolarPoint& x) {
            const double v = u.eval(x.t);
            const double d = v * v / n2;
            return d > 0.0 ? d * std::log(d) : 0.0;
        },
        1e-13, 1e-12);
}

/// Norm, entropy and log-energy transfer under T_0, plus the correction
/// integral computed two ways.
inline AuditReport confcore_checks(const ZonalExpansion& u, double tol_scale = 1.0) {
    const int N = u.N;
    const double tol = 1e-5 * tol_scale;
    const BubbleSeries V = pullback_series(0.0, u);
    const RadialProfile v = euclid::from_series(V, "T_0[u]");
    const double n2 = u.norm2();

    const QuadResult vn = euclid::radial_integral(
        N,
        [&](double r) {
            const double x = v(r);
            return x * x;
        },
        2.0 * N);
    AuditReport i = AuditReport::relative("confcore.norm", vn.value, n2, tol);

    const QuadResult corr = weighted_log_phi(u);
    const QuadResult ent_e = euclid::entropy(2.0, v);
    const QuadResult ent_s = sphere_entropy2(u);
    AuditReport ii = AuditReport::equality("confcore.entropy", ent_e.value, ent_s.value + N * corr.value, tol,
                                           std::max(1.0, std::fabs(ent_e.value)));
    ii.detail("correction", corr.value);

    const QuadResult le = euclid::energy(euclid::Multiplier::log, 0.0, euclid::exact_density(v), N);
    const double ls = spectral::energy_spectral(Op::P_log, Params(N, 0.5, false), u) / n2;
    AuditReport iii = AuditReport::equality("confcore.log_energy", le.value / vn.value, ls + 2.0 * corr.value, tol,
                                            std::max(1.0, std::fabs(ls)));

    const double Jc = log_phi_integral_closed(N);
    const QuadResult Jq = log_phi_integral_quad(N);
    AuditReport j = AuditReport::relative("confcore.log_phi_integral", Jq.value, Jc, 1e-9 * tol_scale);

    AuditReport r = AuditReport::composite("confcore", {i, ii, iii, j});
    r.with("N", N);
    return r;
}

namespace detail {

inline double inv_at(int N, const SpectralDensity& g, double r) { return euclid::inverse_at(N, g, r).value; }

inline void require_transform_dim(int N, double s, const char* who) {
    if (N != 1 && N != 3) throw DomainError(std::string(who) + ": N must be 1 or 3");
    if (N == 1 && !(s < 0.5)) throw DomainError(std::string(who) + ": N = 1 requires s < 1/2");
}

} // namespace detail

/// Pointwise intertwining check at the sample radii. With drop_log_terms the
/// two ln(phi) terms are omitted, which must break the identity.
inline AuditReport intertwining_residual(const Params& p, const ZonalExpansion& u, const std::vector<double>& r_samples,
                                         double tol = 1e-4, bool drop_log_terms = false) {
    detail::require_transform_dim(p.N, p.s, "intertwining_residual");
    if (u.N != p.N) throw DomainError("intertwining_residual: dimension mismatch");
    const int N = p.N;
    const double s = p.s;
    const BubbleSeries V = pullback_series(s, u);
    const BubbleSeries lhs_series = pullback_series(s, spectral::apply_spectral(Op::P_slog, p, u));
    const RadialProfile vp = euclid::from_series(V, "T_s[u]");
    const SpectralDensity Vh = euclid::exact_density(vp);
    const SpectralDensity fl = euclid::apply_multiplier(euclid::Multiplier::fraclog, s, Vh);
    const SpectralDensity fr = euclid::apply_multiplier(euclid::Multiplier::frac, s, Vh);
    const SpectralDensity lv = euclid::apply_multiplier(
        euclid::Multiplier::frac, s, euclid::exact_density(euclid::from_series(V.times_log_phi(), "lnphi*T_s[u]")));

    std::vector<double> lhs, rhs;
    double scale = 0.0, worst = 0.0;
    for (double r : r_samples) {
        const double L = lhs_series.eval(r);
        double R = detail::inv_at(N, fl, r);
        if (!drop_log_terms) R -= detail::inv_at(N, lv, r) + log_phi(r) * detail::inv_at(N, fr, r);
        R *= std::pow(phi(r), -2.0 * s);
        lhs.push_back(L);
        rhs.push_back(R);
        scale = std::max(scale, std::fabs(L));
        worst = std::max(worst, std::fabs(L - R));
    }
    AuditReport rep = AuditReport::equality(drop_log_terms ? "intertwining.no_log_terms" : "intertwining",
                                            worst / scale, 0.0, tol);
    rep.with("N", N).with("s", s);
    for (std::size_t i = 0; i < r_samples.size(); ++i) {
        rep.detail("r", r_samples[i]).detail("lhs", lhs[i]).detail("rhs", rhs[i]);
    }
    return rep;
}

/// s = 0 law: T_0[P^ln u] = (-Delta)^ln T_0 u - 2 ln(phi) T_0 u.
inline AuditReport log_intertwining_residual(int N, const ZonalExpansion& u, const std::vector<double>& r_samples,
                                             double tol = 1e-4) {
    detail::require_transform_dim(N, 0.0, "log_intertwining_residual");
    if (u.N != N) throw DomainError("log_intertwining_residual: dimension mismatch");
    const BubbleSeries V = pullback_series(0.0, u);
    const BubbleSeries lhs_series = pullback_series(0.0, spectral::apply_spectral(Op::P_log, Params(N, 0.5, false), u));
    const SpectralDensity lg =
        euclid::apply_multiplier(euclid::Multiplier::log, 0.0, euclid::exact_density(euclid::from_series(V, "T_0[u]")));
    double scale = 0.0, worst = 0.0;
    for (double r : r_samples) {
        const double L = lhs_series.eval(r);
        const double R = detail::inv_at(N, lg, r) - 2.0 * log_phi(r) * V.eval(r);
        scale = std::max(scale, std::fabs(L));
        worst = std::max(worst, std::fabs(L - R));
    }
    return AuditReport::equality("log_intertwining", worst / scale, 0.0, tol).with("N", N);
}

/// Constant solution u = C on the sphere: pure algebra of the constants.
inline AuditReport yamabe_residual_sphere(const Params& p, double C, double tol = 1e-12) {
    if (!(C > 0.0)) throw DomainError("yamabe_residual_sphere: C must be positive");
    const ConstantSet k = eval_constants(p);
    const double d = p.N - 2.0 * p.s;
    const double mu = bubble_mu(p, C);
    const double lhs = k.Aprime_Ns * C;
    const double t1 = 4.0 / d * k.A_Ns * std::log(C) * C;
    const double t2 = mu * std::pow(C, (p.N + 2.0 * p.s) / d);
    const double scale = std::max({std::fabs(lhs), std::fabs(t1), std::fabs(t2)});
    AuditReport r = AuditReport::equality("yamabe.sphere", lhs, t1 + t2, tol, scale);
    return r.with("N", p.N).with("s", p.s).with("C", C).detail("mu", mu);
}

/// Residual of the Euclidean equation for v_{s,C} at the sample radii.
inline AuditReport yamabe_residual_euclid(const Params& p, double C, const std::vector<double>& r_samples,
                                          double tol = 1e-4, std::optional<double> mu_override = std::nullopt) {
    detail::require_transform_dim(p.N, p.s, "yamabe_residual_euclid");
    const int N = p.N;
    const double s = p.s, b = p.beta(), d = N - 2.0 * s;
    const ConstantSet k = eval_constants(p);
    const double mu = mu_override ? *mu_override : bubble_mu(p, C);
    const double Cp = C * std::exp(b * std::numbers::ln2);
    const RadialProfile v = euclid::bubble_profile(p, C, BubbleConvention::v_sC);
    const SpectralDensity fl = euclid::apply_multiplier(euclid::Multiplier::fraclog, s, euclid::exact_density(v));
    const BubbleSeries vlogv{N, {{Cp * std::log(Cp), -Cp * b, b}}};
    const SpectralDensity fv =
        euclid::apply_multiplier(euclid::Multiplier::frac, s, euclid::exact_density(euclid::from_series(vlogv, "v ln v")));
    double worst = 0.0;
    std::vector<double> res;
    for (double r : r_samples) {
        const double vr = v(r);
        const double lap = k.A_Ns * C * std::pow(phi(r), 0.5 * (N + 2.0 * s));
        const double T1 = detail::inv_at(N, fl, r);
        const double T2 = 2.0 / d * std::log(vr) * lap;
        const double T3 = 2.0 / d * detail::inv_at(N, fv, r);
        const double T4 = mu * std::pow(vr, (N + 2.0 * s) / d);
        const double scale = std::max({std::fabs(T1), std::fabs(T2), std::fabs(T3), std::fabs(T4)});
        const double rel = std::fabs(T1 - T2 - T3 - T4) / scale;
        res.push_back(rel);
        worst = std::max(worst, rel);
    }
    AuditReport rep = AuditReport::equality("yamabe.euclid", worst, 0.0, tol);
    rep.with("N", N).with("s", s).with("C", C).detail("mu", mu);
    for (std::size_t i = 0; i < r_samples.size(); ++i) rep.detail("r", r_samples[i]).detail("residual", res[i]);
    return rep;
}

/// eta = C^{4/(N-2s)}, the conformal factor of the constant solution u = C.
inline double bubble_eta(const Params& p, double C) { return std::pow(C, 4.0 / (p.N - 2.0 * p.s)); }

/// Conformal covariance for constant eta on each mode of u: the order
/// derivative of eta^{-t} phi_t(lambda_k) at t = s against
/// eta^{-s} (phi_slog - ln(eta) phi_s).
inline AuditReport conf_covariance_check(const Params& p, double eta, const ZonalExpansion& u, double tol = 1e-10) {
    if (!(eta > 0.0)) throw DomainError("conf_covariance_check: eta must be positive");
    if (u.N != p.N) throw DomainError("conf_covariance_check: dimension mismatch");
    const double le = std::log(eta);
    const double h0 = std::min({0.1, 0.5 * p.s, 0.5 * (1.0 - p.s), 0.5 * (0.5 * p.N - p.s)});
    std::vector<AuditReport> kids;
    for (int k = 0; k <= u.degree_max(); ++k) {
        if (u.coeffs[k] == 0.0) continue;
        const double lam = spectral::lambda_k(p.N, k);
        auto f = [&](double t) { return std::exp(-t * le) * spectral::symbol_s(Params(p.N, t), lam); };
        const Derivative dlhs = quad::derivative_ridders(f, p.s, h0);
        const double rhs =
            std::exp(-p.s * le) * (spectral::symbol_slog(p, lam) - le * spectral::symbol_s(p, lam));
        AuditReport r = AuditReport::equality("covariance.k" + std::to_string(k), u.coeffs[k] * dlhs.value,
                                              u.coeffs[k] * rhs, tol, std::max(1.0, std::fabs(u.coeffs[k] * rhs)));
        r.detail("derivative_error", dlhs.error);
        kids.push_back(r);
    }
    AuditReport rep = AuditReport::composite("conf_covariance", kids);
    rep.with("N", p.N).with("s", p.s).with("eta", eta);
    return rep;
}

/// s -> 0 behaviour of the covariance law: at small s the right-hand side
/// approaches phi_log(lambda_k) - ln(eta).
inline AuditReport conf_covariance_log_limit(int N, double eta, int k, double s_small = 1e-7, double tol = 1e-5) {
    const Params p(N, s_small);
    const double lam = spectral::lambda_k(N, k);
    const double le = std::log(eta);
    const double rhs = std::exp(-s_small * le) * (spectral::symbol_slog(p, lam) - le * spectral::symbol_s(p, lam));
    const double lim = spectral::symbol_log(N, lam) - le;
    return AuditReport::equality("covariance.log_limit", rhs, lim, tol, std::max(1.0, std::fabs(lim)))
        .with("N", N)
        .with("eta", eta)
        .with("k", k);
}

} // namespace conformal
} // namespace fraclog
