#include <gtest/gtest.h>

#include <random>

#include "fraclog/specfun.hpp"
#include "support.hpp"

using namespace fraclog;
using specfun::bessel_k;
using specfun::digamma;
using specfun::ln_beta;
using specfun::ln_gamma;
using specfun::trigamma;

namespace {

// bound allowed on top of the spec figure: a few ulps of the value itself
double ulps(double v, double n = 4.0) { return n * std::numeric_limits<double>::epsilon() * std::fabs(v); }

void expect_within_bound(const SpecialValue& sv, double want, const std::string& what) {
    EXPECT_TRUE(std::isfinite(sv.value)) << what;
    EXPECT_GE(sv.abs_error_bound, 0.0) << what;
    EXPECT_TRUE(std::isfinite(sv.abs_error_bound)) << what;
    EXPECT_LE(std::fabs(sv.value - want), sv.abs_error_bound + ulps(want, 2.0)) << what;
}

} // namespace

TEST(LnGamma, KnownValues) {
    EXPECT_NEAR(ln_gamma(1.0).value, 0.0, 1e-15);
    EXPECT_NEAR(ln_gamma(0.5).value, 0.5723649429247001, 1e-14);
    for (double x : {0.3, 2.7, 10.0}) EXPECT_NEAR(ln_gamma(x + 1).value - ln_gamma(x).value, std::log(x), 1e-13);
}

TEST(LnGamma, MatchesFixtureWithinBound) {
    const auto doc = oracle::load_fixture("specfun_oracle.json");
    for (const auto& row : doc["values"]["ln_gamma"]) {
        const double x = row["x"], want = oracle::num(row["value"]);
        const SpecialValue v = ln_gamma(x);
        expect_within_bound(v, want, "ln_gamma(" + std::to_string(x) + ")");
        EXPECT_LE(v.abs_error_bound, std::max(1e-13, ulps(want, 8.0))) << x;
    }
}

TEST(LnGamma, RejectsNonPositive) {
    EXPECT_THROW(ln_gamma(0.0), DomainError);
    EXPECT_THROW(ln_gamma(-1.5), DomainError);
}

TEST(Digamma, KnownValues) {
    EXPECT_NEAR(digamma(1.0).value, -specfun::euler_gamma, 1e-14);
    EXPECT_NEAR(digamma(0.5).value, -specfun::euler_gamma - 2.0 * std::numbers::ln2, 1e-14);
    for (double x : {0.25, 1.5, 8.0}) EXPECT_NEAR(digamma(x + 1).value - digamma(x).value, 1.0 / x, 1e-13);
}

TEST(Digamma, MatchesFixtureWithinBound) {
    const auto doc = oracle::load_fixture("specfun_oracle.json");
    for (const auto& row : doc["values"]["digamma"]) {
        const double x = row["x"], want = oracle::num(row["value"]);
        const SpecialValue v = digamma(x);
        expect_within_bound(v, want, "digamma(" + std::to_string(x) + ")");
        EXPECT_LE(v.abs_error_bound, std::max(1e-13, ulps(want, 8.0))) << x;
    }
}

TEST(Digamma, Reflection) {
    for (double x : {0.25, 0.4})
        EXPECT_NEAR(digamma(1.0 - x).value - digamma(x).value, std::numbers::pi / std::tan(std::numbers::pi * x), 1e-11);
}

TEST(Trigamma, KnownValuesAndMonotone) {
    EXPECT_NEAR(trigamma(1.0).value, std::numbers::pi * std::numbers::pi / 6.0, 1e-13);
    for (double x : {0.5, 3.0}) EXPECT_NEAR(trigamma(x).value - trigamma(x + 1).value, 1.0 / (x * x), 1e-12);
    double prev = trigamma(0.01).value;
    for (double x = 0.02; x < 200.0; x *= 1.3) {
        const double v = trigamma(x).value;
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, prev) << x;
        prev = v;
    }
}

TEST(Trigamma, MatchesFixtureWithinBound) {
    const auto doc = oracle::load_fixture("specfun_oracle.json");
    for (const auto& row : doc["values"]["trigamma"]) {
        const double x = row["x"], want = oracle::num(row["value"]);
        const SpecialValue v = trigamma(x);
        expect_within_bound(v, want, "trigamma(" + std::to_string(x) + ")");
        EXPECT_LE(v.abs_error_bound, std::max(1e-12, ulps(want, 8.0))) << x;
    }
}

TEST(Recurrences, RandomArguments) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> lx(std::log(1e-2), std::log(1e3));
    for (int i = 0; i < 1000; ++i) {
        const double x = std::exp(lx(rng));
        const double lg = ln_gamma(x + 1).value - ln_gamma(x).value - std::log(x);
        const double dg = digamma(x + 1).value - digamma(x).value - 1.0 / x;
        const double tg = trigamma(x).value - trigamma(x + 1).value - 1.0 / (x * x);
        ASSERT_LE(std::fabs(lg), std::max(1e-12, ulps(ln_gamma(x + 1).value, 8))) << x;
        ASSERT_LE(std::fabs(dg), 1e-12) << x;
        ASSERT_LE(std::fabs(tg), std::max(1e-12, ulps(1.0 / (x * x), 64))) << x;
    }
}

TEST(BesselK, ClosedFormHalf) {
    EXPECT_NEAR(bessel_k(0.5, 1.0).value, std::sqrt(std::numbers::pi / 2.0) * std::exp(-1.0), 1e-15);
    for (double x : {1e-3, 0.2, 1.0, 7.0, 30.0})
        EXPECT_LE(oracle::rel(bessel_k(0.5, x).value, oracle::k_half(x)), 1e-13) << x;
}

TEST(BesselK, MatchesFixtureRelative) {
    const auto doc = oracle::load_fixture("specfun_oracle.json");
    for (const auto& row : doc["values"]["bessel_k"]) {
        const double nu = row["nu"], x = row["x"], want = oracle::num(row["value"]);
        const SpecialValue v = bessel_k(nu, x);
        EXPECT_GT(v.value, 0.0);
        EXPECT_LE(oracle::rel(v.value, want), 1e-10) << "nu=" << nu << " x=" << x;
        EXPECT_LE(std::fabs(v.value - want), v.abs_error_bound + ulps(want, 2)) << "nu=" << nu << " x=" << x;
    }
}

TEST(BesselK, SmallArgumentAsymptotic) {
    const double nu = 0.3, x = 1e-6;
    const double lhs = bessel_k(nu, x).value * std::pow(x, nu);
    const double rhs = std::pow(2.0, nu - 1.0) * std::tgamma(nu);
    EXPECT_LE(oracle::rel(lhs, rhs), 1e-3);
}

TEST(BesselK, LargeArgumentAsymptotic) {
    const double x = 40.0;
    EXPECT_LE(std::fabs(bessel_k(0.0, x).value * std::sqrt(2.0 * x / std::numbers::pi) * std::exp(x) - 1.0), 1e-2);
}

TEST(BesselK, ZeroOrderLogSingularity) {
    const double x = 1e-8;
    EXPECT_NEAR(bessel_k(0.0, x).value, -std::log(x / 2.0) - specfun::euler_gamma, 1e-12);
}

TEST(BesselK, ContinuousInOrder) {
    const double d = 1e-6;
    for (double nu : {0.0, 0.2, 0.5, 0.8})
        for (double x : {0.01, 0.5, 3.0}) {
            const double a = bessel_k(nu, x).value, b = bessel_k(nu + d, x).value;
            EXPECT_LE(std::fabs(a - b), 10.0 * d * a) << nu << " " << x;
        }
}

TEST(BesselK, UnderflowFlagged) {
    const SpecialValue v = bessel_k(0.25, 800.0);
    EXPECT_TRUE(v.underflow);
    EXPECT_EQ(v.value, 0.0);
}

TEST(BesselK, OrderDerivativeFixture) {
    const auto doc = oracle::load_fixture("specfun_oracle.json");
    for (const auto& row : doc["values"]["bessel_k_dnu"]) {
        const double nu = row["nu"], x = row["x"], want = oracle::num(row["value"]);
        EXPECT_LE(oracle::rel(specfun::bessel_k_dnu(nu, x).value, want), 1e-8) << nu << " " << x;
    }
}

TEST(LnBeta, ValuesAndSymmetry) {
    EXPECT_NEAR(ln_beta(1, 1).value, 0.0, 1e-15);
    EXPECT_NEAR(ln_beta(0.5, 0.5).value, std::log(std::numbers::pi), 1e-14);
    const auto doc = oracle::load_fixture("specfun_oracle.json");
    for (const auto& row : doc["values"]["ln_beta"]) {
        const double a = row["a"], b = row["b"], want = oracle::num(row["value"]);
        EXPECT_NEAR(ln_beta(a, b).value, want, std::max(1e-12, ulps(want, 16))) << a << " " << b;
    }
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 50.0);
    for (int i = 0; i < 200; ++i) {
        const double a = u(rng), b = u(rng);
        EXPECT_EQ(ln_beta(a, b).value, ln_beta(b, a).value);
    }
}
