#include <gtest/gtest.h>

#include <random>

#include "fraclog/conformal.hpp"
#include "support.hpp"

using namespace fraclog;
using namespace fraclog::conformal;

namespace {

const std::vector<double> radii{0.0, 0.5, 1.0, 2.0};

double sphere_lp(const ZonalExpansion& u, double p) {
    return spectral::zonal_integral(
               u.N, [&](const spectral::PolarPoint& x) { return std::pow(std::fabs(u.eval(x.t)), p); }, 1e-14, 1e-13)
        .value;
}

} // namespace

TEST(Stereographic, Examples) {
    const auto o = stereographic({0.0, 0.0, 1.0});
    EXPECT_EQ(o[0], 0.0);
    EXPECT_EQ(o[1], 0.0);
    const auto e = stereographic({1.0, 0.0, 0.0});
    EXPECT_EQ(e[0], 1.0);
    EXPECT_EQ(e[1], 0.0);
    EXPECT_THROW(stereographic({0.0, 0.0, -1.0}), DomainError);
    EXPECT_THROW(stereographic({0.5, 0.5, 0.5}), DomainError);
    EXPECT_THROW(radius_of(-1.0), DomainError);
}

TEST(Stereographic, RoundTripAndUnitImage) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int i = 0; i < 500; ++i) {
        std::vector<double> x(3);
        for (auto& c : x) c = 2 * g(rng);
        const auto z = inverse_stereographic(x);
        double n = 0;
        for (double c : z) n += c * c;
        EXPECT_NEAR(n, 1.0, 1e-14);
        const auto back = stereographic(z);
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(back[j], x[j], 1e-14 * std::max(1.0, std::fabs(x[j])));
        // polar cosine and conformal factor agree with the map
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        EXPECT_NEAR(polar_cosine(r), z.back(), 1e-15);
        EXPECT_NEAR(radius_of(z.back()), r, 1e-9 * std::max(1.0, r));
    }
}

TEST(Pullback, ConstantGivesConformalFactor) {
    const RadialProfile v = pullback(0.5, ZonalFunction::constant(3, 1.0));
    for (double r : {0.0, 0.3, 1.0, 5.0}) EXPECT_NEAR(v(r), phi(r), 1e-15);
    EXPECT_THROW(pullback_exponent(1, 0.75), DomainError);
    EXPECT_THROW(pullback_exponent(3, 1.0), DomainError);
}

TEST(Pullback, PairConsistency) {
    for (auto [N, s] : {std::pair{3, 0.25}, {2, 0.0}, {1, 0.4}, {4, 0.9}}) {
        const ZonalExpansion u = ZonalExpansion::basis(N, 0, 0.4) + ZonalExpansion::basis(N, 3, -1.1);
        const SphereEuclidPair pr = make_pair(s, ZonalFunction::from_expansion(u));
        EXPECT_TRUE(pair_consistency(pr, {0.0, 0.1, 0.7, 1.0, 3.0, 20.0}).pass) << N << " " << s;
        // the bare-profile route agrees with the exact series
        const RadialProfile w = pullback(s, ZonalFunction::from_profile(N, [u](double t) { return u.eval(t); }));
        for (double r : {0.2, 1.5}) EXPECT_NEAR(w(r), pr.euclid_fn(r), 1e-12);
    }
}

TEST(Pullback, InverseRoundTrip) {
    const ZonalExpansion u = ZonalExpansion::basis(3, 2) + ZonalExpansion::basis(3, 0, 0.5);
    const ZonalFunction back = inverse_pullback(0.3, pullback(0.3, ZonalFunction::from_expansion(u)));
    for (double t : {-0.9, -0.2, 0.4, 1.0}) EXPECT_NEAR(back(t), u.eval(t), 1e-12) << t;
}

TEST(Pullback, L2IsometryAtZeroOrder) {
    const ZonalExpansion z1 = ZonalExpansion::basis(2, 1);
    const RadialProfile v = pullback(0.0, ZonalFunction::from_expansion(z1));
    const double n = euclid::lq_norm_q(v, 2.0).value;
    EXPECT_LE(oracle::rel(n, 1.0), 1e-8);
}

TEST(Pullback, CriticalNormIsometry) {
    for (auto [N, s] : {std::pair{3, 0.4}, {2, 0.25}, {1, 0.2}, {4, 0.7}}) {
        const Params p(N, s);
        const double q = p.p_exponent();
        const ZonalExpansion u = ZonalExpansion::basis(N, 0, 1.0) + ZonalExpansion::basis(N, 2, 0.2);
        const RadialProfile v = pullback(s, ZonalFunction::from_expansion(u));
        EXPECT_LE(oracle::rel(euclid::lq_norm_q(v, q).value, sphere_lp(u, q)), 1e-8) << N << " " << s;
    }
}

TEST(Confcore, Constant) {
    for (int N : {1, 2, 3, 4}) {
        const AuditReport r = confcore_checks(ZonalExpansion::constant(N, 1.0), 1e-3); // 1e-8
        EXPECT_TRUE(r.pass) << N;
        for (const auto& c : r.children) EXPECT_LE(std::fabs(c.residual), 1e-8) << N << " " << c.name;
    }
}

TEST(Confcore, MixedModes) {
    const AuditReport r = confcore_checks(ZonalExpansion::basis(3, 0) + ZonalExpansion::basis(3, 2, 0.3));
    EXPECT_TRUE(r.pass);
    ASSERT_EQ(r.children.size(), 4u);
    EXPECT_TRUE(confcore_checks(ZonalExpansion::basis(2, 1)).pass);
}

TEST(Confcore, LogPhiIntegralTwoWays) {
    for (int N = 1; N <= 5; ++N) {
        const double closed = log_phi_integral_closed(N);
        EXPECT_LE(oracle::rel(log_phi_integral_quad(N).value, closed), 1e-9);
        // independent: |S^{N-1}| int r^{N-1} phi^N ln phi dr
        const double orc = oracle::sphere_area(N - 1) * oracle::half_line([N](double r) {
                               const double f = 2 / (1 + r * r);
                               return std::pow(r, N - 1) * std::pow(f, N) * std::log(f);
                           });
        EXPECT_LE(oracle::rel(orc, closed), 1e-9) << N;
    }
}

TEST(Intertwining, ConstantAndFirstMode) {
    const AuditReport c = intertwining_residual(Params(3, 0.4), ZonalExpansion::constant(3, 1.0), radii);
    EXPECT_TRUE(c.pass);
    EXPECT_LE(c.lhs, 1e-4);
    const AuditReport z = intertwining_residual(Params(3, 0.25), ZonalExpansion::basis(3, 1), radii, 1e-3);
    EXPECT_TRUE(z.pass);
    EXPECT_TRUE(intertwining_residual(Params(1, 0.25), ZonalExpansion::constant(1, 1.0), radii).pass);
}

TEST(Intertwining, DroppingLogTermsBreaksIt) {
    const AuditReport good = intertwining_residual(Params(3, 0.4), ZonalExpansion::constant(3, 1.0), radii);
    const AuditReport bad = intertwining_residual(Params(3, 0.4), ZonalExpansion::constant(3, 1.0), radii, 1e-4, true);
    EXPECT_FALSE(bad.pass);
    EXPECT_GT(bad.lhs, 10 * std::max(good.lhs, good.tolerance));
}

TEST(Intertwining, SmallOrderMatchesLogLaw) {
    const ZonalExpansion u = ZonalExpansion::basis(3, 0) + ZonalExpansion::basis(3, 1, 0.5);
    const AuditReport s = intertwining_residual(Params(3, 1e-3), u, radii);
    const AuditReport l = log_intertwining_residual(3, u, radii);
    EXPECT_TRUE(s.pass);
    EXPECT_TRUE(l.pass);
    EXPECT_LE(s.lhs, 10 * std::max(l.lhs, 1e-12));
}

TEST(Intertwining, RestrictedDimensions) {
    EXPECT_THROW(intertwining_residual(Params(2, 0.3), ZonalExpansion::basis(2, 0), radii), DomainError);
    EXPECT_THROW(intertwining_residual(Params(3, 0.3), ZonalExpansion::basis(2, 0), radii), DomainError);
}

TEST(Yamabe, SphereConstants) {
    EXPECT_DOUBLE_EQ(bubble_mu(Params(3, 0.4), 1.0), constants::Aprime_Ns(3, 0.4));
    for (auto [N, s, C] : {std::tuple{3, 0.5, 2.0}, {5, 0.75, 0.5}, {1, 0.25, 1.0}, {2, 0.3, 7.0}}) {
        const AuditReport r = yamabe_residual_sphere(Params(N, s), C);
        EXPECT_TRUE(r.pass);
        EXPECT_LE(std::fabs(r.residual), 1e-12);
    }
    EXPECT_THROW(yamabe_residual_sphere(Params(3, 0.5), 0.0), DomainError);
}

TEST(Yamabe, Euclidean) {
    const AuditReport a = yamabe_residual_euclid(Params(3, 0.4), 1.0, radii);
    const AuditReport b = yamabe_residual_euclid(Params(1, 0.25), 1.0, radii);
    EXPECT_TRUE(a.pass);
    EXPECT_TRUE(b.pass);
    EXPECT_TRUE(yamabe_residual_euclid(Params(3, 0.5), 2.5, radii).pass);
    const double mu = bubble_mu(Params(3, 0.4), 1.0);
    const AuditReport wrong = yamabe_residual_euclid(Params(3, 0.4), 1.0, radii, 1e-4, 1.01 * mu);
    EXPECT_GT(std::fabs(wrong.residual), 10 * std::max(std::fabs(a.residual), 1e-12));
}

TEST(Covariance, TrivialFactor) {
    const Params p(4, 0.5);
    const ZonalExpansion u = ZonalExpansion::basis(4, 2);
    const AuditReport r = conf_covariance_check(p, 1.0, u);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.children[0].rhs, spectral::symbol_slog(p, spectral::lambda_k(4, 2)), 1e-15);
}

TEST(Covariance, ConstantFactor) {
    const AuditReport r = conf_covariance_check(Params(4, 0.5), std::exp(4.0), ZonalExpansion::basis(4, 2));
    EXPECT_TRUE(r.pass);
    for (const auto& c : r.children) EXPECT_LE(std::fabs(c.residual), 1e-10);
    EXPECT_TRUE(conf_covariance_check(Params(3, 0.3), 0.2, ZonalExpansion::basis(3, 0) + ZonalExpansion::basis(3, 4)).pass);
    EXPECT_TRUE(conf_covariance_check(Params(3, 0.4), bubble_eta(Params(3, 0.4), 2.0), ZonalExpansion::basis(3, 1)).pass);
}

TEST(Covariance, LogLimit) {
    for (int k : {0, 1, 3}) EXPECT_TRUE(conf_covariance_log_limit(3, std::exp(4.0), k).pass) << k;
}
