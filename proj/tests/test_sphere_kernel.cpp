#include <gtest/gtest.h>

#include "fraclog/sphere_kernel.hpp"
#include "support.hpp"

using namespace fraclog;
using namespace fraclog::sphere_kernel;

namespace {

double kernel(Op op, const Params& p, const ZonalExpansion& u) {
    return apply_kernel_at_pole(op, p, ZonalFunction::from_expansion(u)).value;
}

} // namespace

TEST(Kernel, ConstantsHaveZeroIntegral) {
    for (auto [N, s] : {std::pair{1, 0.25}, {2, 0.5}, {3, 0.75}, {4, 0.3}}) {
        const Params p(N, s);
        const ZonalExpansion one = ZonalExpansion::constant(N, 1.0);
        EXPECT_LE(oracle::rel(kernel(Op::P_s, p, one), constants::A_Ns(N, s)), 1e-13);
        EXPECT_LE(oracle::rel(kernel(Op::P_slog, p, one), constants::Aprime_Ns(N, s)), 1e-13);
        EXPECT_LE(oracle::rel(kernel(Op::P_log, p, one), constants::A_N(N)), 1e-13);
    }
}

TEST(Kernel, SpectralExamples) {
    {
        const Params p(3, 0.3);
        const auto u = ZonalExpansion::basis(3, 1);
        EXPECT_LE(oracle::rel(kernel(Op::P_s, p, u), spectral::symbol_s(p, 3.0) * spectral::zonal_basis_eval(3, 1, 1.0)), 1e-8);
    }
    {
        const Params p(2, 0.6);
        const auto u = ZonalExpansion::basis(2, 2);
        EXPECT_LE(oracle::rel(kernel(Op::P_slog, p, u), spectral::symbol_slog(p, 6.0) * spectral::zonal_basis_eval(2, 2, 1.0)),
                  1e-6);
    }
}

TEST(Kernel, AgreesWithSpectralOnSweep) {
    for (int N = 1; N <= 4; ++N)
        for (double s : {0.25, 0.75}) {
            if (N == 1 && s > 0.5) continue;
            const Params p(N, s);
            for (int k = 0; k <= 6; ++k)
                for (Op op : {Op::P_s, Op::P_slog, Op::P_log}) {
                    const auto u = ZonalExpansion::basis(N, k);
                    const QuadResult q = apply_kernel_at_pole(op, p, ZonalFunction::from_expansion(u));
                    const double sp = spectral_at_pole(op, p, u);
                    EXPECT_LE(oracle::rel(q.value, sp), 1e-6) << N << " " << s << " " << k << " " << to_string(op);
                    EXPECT_LE(std::fabs(q.value - sp), 10 * q.abs_error_estimate + 1e-11 * std::max(1.0, std::fabs(sp)))
                        << N << " " << s << " " << k << " " << to_string(op);
                }
        }
}

TEST(Kernel, Linear) {
    const Params p(3, 0.45);
    const auto a = ZonalExpansion::basis(3, 2), b = ZonalExpansion::basis(3, 5);
    for (Op op : {Op::P_s, Op::P_slog, Op::P_log}) {
        const double lhs = kernel(op, p, a * 0.7 + b * -1.3);
        const double rhs = 0.7 * kernel(op, p, a) - 1.3 * kernel(op, p, b);
        EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::fabs(rhs)));
    }
}

TEST(Kernel, ProfileRouteMatchesExpansion) {
    // the same function given as a bare profile (drop computed by subtraction)
    const auto u = ZonalExpansion::basis(2, 3) + ZonalExpansion::basis(2, 0, 0.5);
    const ZonalFunction f = ZonalFunction::from_profile(2, [u](double t) { return u.eval(t); });
    const Params p(2, 0.4);
    EXPECT_LE(oracle::rel(apply_kernel_at_pole(Op::P_s, p, f).value, spectral_at_pole(Op::P_s, p, u)), 1e-7);
}

TEST(Kernel, DimensionMismatch) {
    EXPECT_THROW(kernel(Op::P_s, Params(3, 0.3), ZonalExpansion::basis(2, 1)), DomainError);
}

TEST(DifferenceQuotient, FirstOrder) {
    const Params p(3, 0.4);
    const AuditReport r = difference_quotient_check(p, ZonalExpansion::basis(3, 1), {1e-2, 1e-3, 1e-4});
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.detail_value("order"), 1.0, 0.2);
    const AuditReport c = difference_quotient_check(p, ZonalExpansion::constant(3, 1.0), {1e-2, 1e-3, 1e-4}, 0.0);
    EXPECT_TRUE(c.pass);
    // u = 1 reduces to the scalar difference quotient of A_{N,t}
    const double h = 1e-3;
    const double dq = (constants::A_Ns(3, 0.4 + h) - constants::A_Ns(3, 0.4)) / h;
    EXPECT_NEAR(c.detail_value("err_h1"), std::fabs(dq - constants::Aprime_Ns(3, 0.4)), 1e-12);
}

TEST(DifferenceQuotient, RejectsStepOutsideRange) {
    EXPECT_THROW(difference_quotient_check(Params(3, 0.95), ZonalExpansion::basis(3, 1), {0.1}), DomainError);
}

TEST(SLimit, Examples) {
    const std::vector<double> s_list{0.1, 0.03, 0.01, 0.003};
    const AuditReport r = slimit_check(2, ZonalExpansion::basis(2, 1), s_list);
    EXPECT_TRUE(r.pass);
    const double first = r.detail_value("gap_spectral0"), last = r.detail_value("gap_spectral3");
    EXPECT_LT(last, first);
    EXPECT_LE(last, 0.05 * first);
    const AuditReport c = slimit_check(3, ZonalExpansion::constant(3, 1.0), s_list, false);
    EXPECT_NEAR(c.detail_value("gap_spectral2"),
                std::fabs(constants::Aprime_Ns(3, 0.01) - constants::A_N(3)) * constants::sphere_area(3) /
                    std::sqrt(constants::sphere_area(3)) / std::sqrt(constants::sphere_area(3)),
                1e-12);
    EXPECT_THROW(slimit_check(2, ZonalExpansion::basis(2, 1), {0.01, 0.1}), DomainError);
}

TEST(Dini, Verdicts) {
    const double s = 0.3;
    const AuditReport fin = dini_test(s, [s](double r) { return std::pow(r, 2 * s + 0.5); });
    EXPECT_EQ(fin.tags.at("verdict"), "finite");
    // antiderivative of r^{-1/2}(1 - ln r) is 2 sqrt(r)(1 - ln r) + 4 sqrt(r)
    auto F = [](double r) { return 2 * std::sqrt(r) * (1 - std::log(r)) + 4 * std::sqrt(r); };
    EXPECT_NEAR(fin.lhs, F(1.0) - F(1e-6), 1e-10);
    EXPECT_NEAR(fin.rhs, 6.0, 2e-2);
    const AuditReport div = dini_test(s, [s](double r) { return std::pow(r, 2 * s); });
    EXPECT_EQ(div.tags.at("verdict"), "divergent");
    const AuditReport zero = dini_test(s, [](double) { return 0.0; });
    EXPECT_EQ(zero.tags.at("verdict"), "finite");
    EXPECT_EQ(zero.rhs, 0.0);
    EXPECT_THROW(dini_test(1.0, [](double) { return 0.0; }), DomainError);
}

TEST(LogLogSlope, ExactPowerLaw) {
    std::vector<double> x{1e-1, 1e-2, 1e-3}, y;
    for (double v : x) y.push_back(3 * std::pow(v, 1.5));
    EXPECT_NEAR(loglog_slope(x, y), 1.5, 1e-12);
}
