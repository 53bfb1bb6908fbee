#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ghg/analysis.hpp"
#include "oracles.hpp"

using namespace ghg;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1)));
    return g;
}

}  // namespace

TEST(Constants, Values)
{
    const auto c = BoundConstants::make();
    EXPECT_DOUBLE_EQ(c.P_plus, 4.0 * pi * pi);
    EXPECT_DOUBLE_EQ(c.Q_minus, 0.125);
    EXPECT_DOUBLE_EQ(c.C_minus, pi / 48.0);
    EXPECT_NEAR(c.C_plus, 11.0 + 6.0 * std::sqrt(2.0), 1e-13);
    EXPECT_DOUBLE_EQ(c.Q_plus, 4.0 * c.C_plus);
    const double m0 = 4.0 * pi * (std::sqrt(c.Q_plus) - std::sqrt(2.0 * c.C_plus)) / (std::sqrt(c.Q_plus) - std::sqrt(0.125));
    EXPECT_DOUBLE_EQ(c.m0, m0);
    EXPECT_DOUBLE_EQ(c.P_minus, m0 * pi / 48.0);
    EXPECT_GT(c.m0, 0.0);
    EXPECT_LT(c.m0, 4.0 * pi);
    // 1/12 < log 2 - 1/2, so the minimum in the volume lower constant is 1/12
    EXPECT_LT(1.0 / 12.0, std::log(2.0) - 0.5);
    EXPECT_DOUBLE_EQ(4.0 * c.C_minus / pi, 1.0 / 12.0);
}

TEST(Constants, QPlusMustExceedTwiceCPlus)
{
    const double C_plus = BoundConstants{}.C_plus;
    EXPECT_THROW(BoundConstants::make(2.0 * C_plus), Error);
    EXPECT_NO_THROW(BoundConstants::make(2.0 * C_plus * 1.001));
}

TEST(GrowthCurve, SingleMonopoleIsQuartic)
{
    const auto c = make_finite({{0, 0, 0}});
    const auto grid = log_grid(1.0, 1e4, 9);
    const auto curve = growth_curve(c, grid, BoundConstants::make());
    for (const auto& row : curve.rows) {
        EXPECT_NEAR(row.model, std::pow(row.r, 4), 1e-9 * std::pow(row.r, 4));
        EXPECT_LE(row.lower, row.upper);
        EXPECT_LE(row.identity_error, 1e-9);
    }
}

TEST(GrowthCurve, RejectsBadGrid)
{
    const auto c = make_finite({{0, 0, 0}});
    EXPECT_THROW(growth_curve(c, std::vector<double>{1.0, 1.0}, BoundConstants::make()), Error);
    EXPECT_THROW(growth_curve(c, std::vector<double>{-1.0, 1.0}, BoundConstants::make()), Error);
}

TEST(FitExponent, ExactPowerLaw)
{
    const auto r = log_grid(1.0, 1e3, 20);
    std::vector<double> y;
    for (double v : r) y.push_back(2.0 * std::pow(v, 3.5));
    const auto fit = fit_exponent(r, y, {1.0, 1e3});
    EXPECT_NEAR(fit.slope, 3.5, 1e-12);
    EXPECT_NEAR(fit.residual, 0.0, 1e-11);
    EXPECT_EQ(fit.count, 20u);
    try {
        fit_exponent(r, y, {1.0, 5.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
    }
}

TEST(FitExponent, PowerLawFamilies)
{
    const auto grid = log_grid(1e3, 1e6, 31);
    for (double alpha : {1.5, 2.0, 3.0}) {
        const auto curve = growth_curve(make_power_law(alpha, 1.0), grid, BoundConstants::make());
        const auto fit = fit_exponent(curve, default_fit_window(grid));
        EXPECT_NEAR(fit.slope, 4.0 - 2.0 / (alpha + 1.0), 0.05) << alpha;
    }
}

TEST(Sandwich, SingleMonopoleHolds)
{
    const auto rows = sandwich_check(make_finite({{0, 0, 0}}), log_grid(1.0, 1e3, 7), BoundConstants::make());
    for (const auto& r : rows) EXPECT_TRUE(r.ok) << r.r;
}

TEST(Sandwich, FamiliesHold)
{
    const auto grid = log_grid(10.0, 1e6, 16);
    const std::vector<MonopoleConfig> configs{make_power_law(1.5, 1.0), make_power_law(2.0, 1.0),
                                              make_power_law(3.0, 1.0), make_exponential(0.5, 1.0),
                                              make_exponential(1.0, 1.0)};
    for (const auto& c : configs) {
        for (const auto& r : sandwich_check(c, grid, BoundConstants::make())) EXPECT_TRUE(r.ok) << c.family() << " " << r.r;
    }
}

TEST(Sandwich, SublevelChain)
{
    SandwichOptions options;
    options.directions = 48;
    const auto rows = sandwich_check(make_power_law(2.0, 1.0), log_grid(10.0, 300.0, 4), BoundConstants::make(), options);
    for (const auto& r : rows) {
        ASSERT_TRUE(r.sublevel_ok.has_value());
        EXPECT_TRUE(*r.sublevel_ok) << r.r;
        EXPECT_GE(*r.sublevel_measure, BoundConstants::make().m0);
    }
}

TEST(RatioLimits, ClosedFormIdentities)
{
    const auto grid = log_grid(10.0, 1e6, 21);
    const auto rows = ratio_limits(make_power_law(2.0, 1.0), grid);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        EXPECT_NEAR(r.over_r4, r.inv_phi, r.certified_error);
        EXPECT_NEAR(r.over_r3, r.sqrt_R_over_phi, 1e-9 * r.over_r3);
        if (i > 0) {
            EXPECT_LT(r.over_r4, rows[i - 1].over_r4);
            EXPECT_GT(r.over_r3, rows[i - 1].over_r3);
        }
    }
    // the same identity against an independent phi
    const auto& last = rows.back();
    EXPECT_NEAR(last.over_r4, 1.0 / oracle::phi({oracle::Law::Power, 2.0, 1.0}, last.R), 1e-9 * last.over_r4);
}

TEST(RatioLimits, FinitePlateau)
{
    const auto rows = ratio_limits(make_finite({{0, 0, 0}, {0, 1, 0}, {2, 0, 0}}), log_grid(1e3, 1e6, 5));
    EXPECT_NEAR(rows.back().over_r4, 1.0 / 3.0, 1e-5);
}

TEST(TaubNut, SingleMonopoleLimit)
{
    const auto rows = taubnut_limit(make_finite({{0, 0, 0}}), 1.0, log_grid(1e2, 1e6, 9), BoundConstants::make());
    const double limit = 8.0 * pi * pi / 3.0;
    EXPECT_NEAR(rows.back().hi / limit, 1.0, 0.05);
    EXPECT_NEAR(rows.back().lo / limit, 1.0, 0.05);
    EXPECT_TRUE(monotone_trend(rows, 0.0, [](const TaubNutRow& r) { return r.hi; }, false));
    EXPECT_GT(rows.front().hi, rows.back().hi);
}

TEST(TaubNut, PowerLawLimit)
{
    const auto rows = taubnut_limit(make_power_law(2.0, 1.0), 4.0, log_grid(1e3, 1e6, 7), BoundConstants::make());
    EXPECT_NEAR(rows.back().hi / (4.0 * pi * pi / 3.0), 1.0, 0.05);
    EXPECT_GT(rows.back().hi, taubnut_limit_value(4.0));
    EXPECT_THROW(taubnut_limit(make_power_law(2.0, 1.0), -1.0, log_grid(1, 2, 2), BoundConstants::make()), Error);
}

TEST(Comparison, EmpiricalConstant)
{
    const auto grid = log_grid(10.0, 1e5, 12);
    const auto constants = BoundConstants::make();
    const auto a = growth_curve(make_power_law(3.0, 1.0), grid, constants);
    const auto b = growth_curve(make_power_law(2.0, 1.0), grid, constants);
    // phi of the cubic family is termwise smaller, so its R and model are larger
    const double k = comparison_constant(b, a);
    EXPECT_GT(k, 0.0);
    EXPECT_LE(k, 1.0);
}
