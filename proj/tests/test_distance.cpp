#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ghg/distance.hpp"
#include "oracles.hpp"

using namespace ghg;

TEST(GaugeTerm, TailBracketHolds)
{
    auto g = oracle::rng(31);
    for (int k = 0; k < 20000; ++k) {
        const auto u = oracle::unit_vector(g);
        const double r = oracle::log_uniform(g, 1e-3, 1e3);
        const double m = r * oracle::uniform(g, 2.0, 50.0);
        const ImHPoint z{r * u.x, r * u.y, r * u.z};
        const double t = detail::gauge_term(z, m * kAxisI);
        const double lead = r * r / (4.0 * m);
        const double slack = 1e-13 * lead;
        ASSERT_GE(t, lead - r * r * r / (8.0 * m * m) - slack) << r << " " << m;
        ASSERT_LE(t, lead + 0.3 * r * r * r / (m * m) + slack) << r << " " << m;
    }
}

TEST(GaugeTerm, DenominatorBound)
{
    auto g = oracle::rng(32);
    for (int k = 0; k < 5000; ++k) {
        const auto u = oracle::unit_vector(g);
        const auto v = oracle::unit_vector(g);
        const double r = oracle::log_uniform(g, 1e-3, 1e3);
        const double a = oracle::log_uniform(g, 1e-3, 1e3);
        const ImHPoint z{r * u.x, r * u.y, r * u.z};
        const ImHPoint l{a * v.x, a * v.y, a * v.z};
        const double denom = r * r / detail::gauge_term(z, l);
        ASSERT_LE(denom, (8.0 * a + 2.0 * r) * (1.0 + 1e-14));
    }
}

TEST(GaugeDistance, MatchesDirectSum)
{
    const auto c = make_power_law(2.0, 1.0);
    const ImHPoint z{3.0, -1.0, 4.0};
    const auto v = gauge_distance_sq(c, z, 1e-10);
    long double ref = 0.0L;
    const double N = 2.0e6;
    for (double n = 0.0; n < N; n += 1.0) ref += detail::gauge_term(z, n * n * kAxisI);
    ref += 26.0 / 4.0 / (N - 0.5);  // r^2/(4 m) summed past N
    EXPECT_NEAR(v.value, double(ref), v.error + 1e-11);
    EXPECT_LE(v.error, 1e-10);
}

TEST(GaugeDistance, ExceedsLowerBound)
{
    auto g = oracle::rng(33);
    const std::vector<MonopoleConfig> configs{make_power_law(1.5, 1.0), make_power_law(3.0, 1.0),
                                              make_exponential(0.7, 1.0),
                                              make_finite({{0, 0, 0}, {1, 1, 0}, {0, -3, 2}})};
    for (const auto& c : configs) {
        for (int k = 0; k < 50; ++k) {
            const auto u = oracle::unit_vector(g);
            const double r = oracle::log_uniform(g, 1e-2, 1e5);
            const ImHPoint z{r * u.x, r * u.y, r * u.z};
            const auto gauge = gauge_distance_sq(c, z, 1e-9 * r * std::max(1.0, r));
            const auto lower = lower_bound_dist_sq(c, z, 1e-9 * r * std::max(1.0, r));
            EXPECT_TRUE(certified_le(lower, gauge)) << c.family() << " r=" << r;
        }
    }
}

TEST(GaugeDistance, LowerBoundIsEighthOfTau)
{
    const auto c = make_power_law(1.5, 1.0);
    for (double r : {0.5, 40.0, 3e4}) {
        const auto lower = lower_bound_dist_sq(c, {0, 0, r}, 1e-9 * r);
        const double ref = 0.125 * r * oracle::phi({oracle::Law::Power, 1.5, 1.0}, r);
        EXPECT_NEAR(lower.value, ref, lower.error + 1e-11 * ref);
    }
}

TEST(RadialLength, SingleMonopoleClosedForm)
{
    const auto c = make_finite({{0, 0, 0}});
    for (double T : {0.5, 1.0, 4.0, 100.0, 1e6}) {
        const auto l = radial_length(c, {0, 0, T}, 1e-10);
        EXPECT_NEAR(l.value, T <= 1.0 ? 0.0 : std::sqrt(T) - 1.0, 1e-9 * std::max(1.0, std::sqrt(T))) << T;
    }
}

TEST(RadialLength, CrossingMonopoleAgainstSubstitution)
{
    const ImHPoint e{0.6, 0.0, 0.8};
    const auto c = make_finite({{0, 0, 0}, (-2.0) * e});
    const auto l = radial_length(c, 4.0 * e, 1e-11);
    // t = 2 -+ v^2 removes the inverse square root at the monopole
    auto below = [](double v) { return std::sqrt(v * v / (2.0 - v * v) + 1.0); };
    auto above = [](double v) { return std::sqrt(v * v / (2.0 + v * v) + 1.0); };
    const double ref = oracle::gk(below, 0.0, 1.0, {}, 1e-14) + oracle::gk(above, 0.0, std::sqrt(2.0), {}, 1e-14);
    EXPECT_NEAR(l.value, ref, l.error + 1e-10);
}

TEST(RadialLength, TaubNutAddsFlatPart)
{
    const auto c = make_finite({{0, 0, 0}});
    const double s = 4.0;
    const auto l = radial_length_taubnut(c, s, {0, 9.0, 0}, 1e-11);
    auto f = [&](double t) { return std::sqrt(0.25 / t + 0.25 * s); };
    EXPECT_NEAR(l.value, oracle::gk(f, 1.0, 9.0, {}, 1e-14), 1e-9);
    EXPECT_THROW(radial_length_taubnut(c, 0.0, {0, 9, 0}, 1e-9), Error);
}

TEST(RadialLength, PowerLawAgainstBoost)
{
    const auto c = make_power_law(2.0, 1.0);
    const oracle::Law law{oracle::Law::Power, 2.0, 1.0};
    const oracle::Vec dir{0.48, 0.6, 0.64};
    const double T = 30.0;
    const auto l = radial_length(c, {T * dir.x, T * dir.y, T * dir.z}, 1e-9);
    auto f = [&](double t) {
        return std::sqrt(0.25 * oracle::potential_sum(law, {}, {t * dir.x, t * dir.y, t * dir.z}, 2.0e4));
    };
    EXPECT_NEAR(l.value, oracle::gk(f, 1.0, T, {}, 1e-12), 1e-7);
}

TEST(Sphere, FibonacciLatticeIsBalanced)
{
    const auto pts = fibonacci_sphere(1000);
    ASSERT_EQ(pts.size(), 1000u);
    ImHPoint sum{};
    for (const auto& p : pts) {
        EXPECT_NEAR(norm(p), 1.0, 1e-14);
        sum = sum + p;
    }
    EXPECT_LT(norm(sum) / 1000.0, 2e-3);
}

TEST(Sphere, AverageOfSingleMonopoleIsExact)
{
    const auto c = make_finite({{0, 0, 0}});
    const auto a = sphere_average_length(c, 49.0, 0.0, 16);
    EXPECT_NEAR(a.value, 6.0, 1e-8);
}

TEST(Sphere, FewDirectionsCoverManyDirections)
{
    const auto c = make_power_law(2.0, 1.0);
    const auto coarse = sphere_average_length(c, 10.0, 0.0, 2);
    const auto fine = sphere_average_length(c, 10.0, 0.0, 5000);
    EXPECT_TRUE(overlaps(coarse, fine)) << coarse.value << " +- " << coarse.error << " vs " << fine.value;
    EXPECT_THROW(sphere_average_length(c, 10.0, 0.0, 1), Error);
}

TEST(Sphere, AverageBelowBound)
{
    const double C_plus = (3.0 + std::numbers::sqrt2) * (3.0 + std::numbers::sqrt2);
    const auto c = make_power_law(2.0, 1.0);
    for (double R : {10.0, 100.0}) {
        const auto a = sphere_average_length(c, R, 0.0, 64);
        EXPECT_LE(a.hi(), std::sqrt(C_plus * R * phi_growth(c, R).value));
    }
}

TEST(Sphere, SublevelMeasure)
{
    const auto c = make_finite({{0, 0, 0}});
    // l = sqrt(R) - 1 <= sqrt(T R) for every direction
    EXPECT_DOUBLE_EQ(sphere_sublevel_measure(c, 25.0, 1.0, 0.0, 32), 4.0 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(sphere_sublevel_measure(c, 25.0, 1.0, 0.0, 32, 10.0), 0.0);
    EXPECT_THROW(sphere_sublevel_measure(c, 25.0, 0.0, 0.0, 32), Error);
}

TEST(DistanceBounds, Bundles)
{
    const auto c = make_power_law(3.0, 1.0);
    const ImHPoint z{2, 3, -6};
    const auto b = distance_bounds(c, z, 1e-9);
    EXPECT_TRUE(certified_le(b.lower_sq, b.gauge_sq));
    EXPECT_GT(b.radial_length.value, 0.0);
}
