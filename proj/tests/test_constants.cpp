#include <gtest/gtest.h>

#include "fraclog/constants.hpp"
#include "fraclog/quadrature.hpp"
#include "support.hpp"

using namespace fraclog;
namespace C = fraclog::constants;

TEST(Params, Validation) {
    EXPECT_NO_THROW(Params(3, 0.5));
    EXPECT_THROW(Params(0, 0.5), DomainError);
    EXPECT_THROW(Params(3, 0.0), DomainError);
    EXPECT_THROW(Params(3, 1.0), DomainError);
    EXPECT_THROW(Params(1, 0.5), DomainError);
    EXPECT_THROW(Params(1, 0.75), DomainError);
    EXPECT_NO_THROW(Params(1, 0.75, false));
    EXPECT_DOUBLE_EQ(Params(3, 0.5).p_exponent(), 3.0);
    EXPECT_DOUBLE_EQ(Params(3, 0.5).beta(), 1.0);
}

TEST(Constants, Positivity) {
    for (int N = 1; N <= 8; ++N)
        for (double s = 0.05; s < 1.0; s += 0.1) {
            if (!(N > 2 * s)) continue;
            const ConstantSet c = eval_constants(Params(N, s));
            EXPECT_GT(c.c_Ns, 0.0);
            EXPECT_GT(c.A_Ns, 0.0);
            EXPECT_GT(c.kappa_Ns, 0.0);
            EXPECT_GT(c.sphere_area, 0.0);
        }
}

TEST(Constants, Examples) {
    EXPECT_NEAR(eval_constants(Params(4, 0.5)).A_Ns, 1.5, 1e-14);
    for (int N : {1, 2, 3, 6}) EXPECT_NEAR(C::kappa_Ns(N, 1e-12), 1.0, 1e-9) << N;
    EXPECT_NEAR(C::a_N(2), 2 * specfun::euler_gamma - std::log(4 * std::numbers::pi), 1e-13);
    EXPECT_NEAR(C::a_N(2), -1.3765934, 1e-6);
    const double b = std::log(4.0) + oracle::psi(2.0) + oracle::psi(1.5);
    EXPECT_NEAR(eval_constants(Params(3, 0.5)).b_Ns, b, 1e-8);
    EXPECT_NEAR(eval_constants(Params(3, 0.5)).b_Ns, 1.8455681, 1e-6);
}

TEST(Constants, AgainstIndependentGammaOracle) {
    for (auto [N, s] : {std::pair{3, 0.3}, {1, 0.25}, {5, 0.75}, {2, 0.9}}) {
        const ConstantSet c = eval_constants(Params(N, s));
        const double A = std::exp(std::lgamma(N / 2.0 + s) - std::lgamma(N / 2.0 - s));
        EXPECT_LE(oracle::rel(c.A_Ns, A), 1e-13);
        const double cns = std::pow(4.0, s) * std::pow(std::numbers::pi, -N / 2.0) * s * (1 - s) *
                           std::tgamma(N / 2.0 + s) / std::tgamma(2 - s);
        EXPECT_LE(oracle::rel(c.c_Ns, cns), 1e-13);
        EXPECT_LE(oracle::rel(c.sphere_area, oracle::sphere_area(N)), 1e-14);
        EXPECT_LE(oracle::rel(c.C_N, 4.0 / N * std::pow(std::numbers::pi, N / 2.0) / std::tgamma(N / 2.0)), 1e-14);
    }
}

TEST(Constants, TwoFormsOfCnsAgree) {
    for (int N : {1, 2, 3, 7})
        for (double s : {0.01, 0.25, 0.45})
            EXPECT_LE(oracle::rel(C::c_Ns(N, s), C::c_Ns_alt(N, s)), 1e-13) << N << " " << s;
}

TEST(Constants, SmallOrderLimits) {
    for (int N : {1, 2, 3, 4}) {
        const double s = 1e-13;
        const ConstantSet c = eval_constants(Params(N, s));
        EXPECT_NEAR(c.A_Ns, 1.0, 1e-9);
        EXPECT_LT(c.c_Ns, 1e-9);
        EXPECT_NEAR(c.Aprime_Ns, c.A_N, 1e-10);
        EXPECT_NEAR(c.A_N, 2 * oracle::psi(N / 2.0), 1e-8);
        EXPECT_LE(oracle::rel(c.c_Ns * c.b_Ns, c.c_N), 1e-8);
        EXPECT_LE(oracle::rel(C::kappaprime_Ns(N, 1e-8), C::a_N(N)), 1e-6) << N;
    }
}

TEST(Constants, DerivativesAgreeWithFiniteDifferences) {
    for (auto [N, s] : {std::pair{3, 0.4}, {4, 0.5}, {1, 0.2}}) {
        const auto dA = quad::derivative_ridders([&](double t) { return C::A_Ns(N, t); }, s, 0.05);
        EXPECT_LE(oracle::rel(C::Aprime_Ns(N, s), dA.value), 1e-10);
        const auto dk = quad::derivative_ridders([&](double t) { return C::kappa_Ns(N, t); }, s, 0.05);
        EXPECT_LE(oracle::rel(C::kappaprime_Ns(N, s), dk.value), 1e-9);
    }
}

TEST(Constants, SphereArea) {
    EXPECT_DOUBLE_EQ(C::sphere_area(2), 4 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(C::sphere_area(1), 2 * std::numbers::pi);
}

TEST(Constants, CNConsistency) {
    for (int N = 1; N <= 6; ++N) EXPECT_LE(oracle::rel(C::C_N(N), 2.0 * (2.0 / N) / C::c_N(N)), 1e-12);
}

TEST(Constants, Cached) {
    const Params p(3, 0.37);
    EXPECT_EQ(eval_constants(p).kappa_Ns, eval_constants(p).kappa_Ns);
    EXPECT_EQ(eval_constants(p).A_Ns, C::A_Ns(3, 0.37));
}

TEST(BubbleMu, Examples) {
    const Params p(3, 0.5);
    const ConstantSet c = eval_constants(p);
    EXPECT_DOUBLE_EQ(bubble_mu(p, 1.0), c.Aprime_Ns);
    const double e = std::exp(1.0);
    EXPECT_LE(oracle::rel(bubble_mu(p, e), (c.Aprime_Ns - 2 * c.A_Ns) / e), 1e-14);
}

// mu(C) = C^{-a}(A' - b A ln C) falls until C* = exp(A'/(bA) + 1/a) and rises
// back towards 0 afterwards.
TEST(BubbleMu, ShapeInScale) {
    for (auto [N, s] : {std::pair{3, 0.5}, {1, 0.25}, {5, 0.75}, {4, 0.1}}) {
        const Params p(N, s);
        const double d = N - 2 * s, a = 4 * s / d, b = 4 / d;
        const ConstantSet c = eval_constants(p);
        const double c_star = std::exp(c.Aprime_Ns / (b * c.A_Ns) + 1 / a);
        for (double Cv = 1.0; Cv < 50.0; Cv *= 1.37) {
            const double sym = std::pow(Cv, -a - 1) * (-a * (c.Aprime_Ns - b * c.A_Ns * std::log(Cv)) - b * c.A_Ns);
            const auto fd = quad::derivative_ridders([&](double x) { return bubble_mu(p, x); }, Cv, 0.1 * Cv);
            EXPECT_LE(std::fabs(fd.value - sym), 1e-8 * std::max(1.0, std::fabs(sym)));
            if (Cv < 0.99 * c_star) EXPECT_LT(sym, 0.0) << N << " " << s << " " << Cv;
            if (Cv > 1.01 * c_star) EXPECT_GT(sym, 0.0) << N << " " << s << " " << Cv;
        }
    }
}

TEST(BesselCoefficient, Examples) {
    EXPECT_LE(oracle::rel(bessel_bubble_coeff(Params(1, 1e-12)), std::sqrt(2.0 / std::numbers::pi)), 1e-11);
    EXPECT_NEAR(bessel_bubble_coeff(Params(3, 0.5)), 1.0, 1e-15);
    for (int N = 1; N <= 5; ++N)
        for (double s : {0.1, 0.3, 0.45}) EXPECT_GT(bessel_bubble_coeff(Params(N, s)), 0.0);
}
