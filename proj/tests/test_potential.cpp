#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ghg/potential.hpp"
#include "oracles.hpp"

using namespace ghg;

namespace {

oracle::Vec to_vec(const ImHPoint& p) { return {p.zeta1, p.zeta2, p.zeta3}; }

struct Family {
    MonopoleConfig config;
    oracle::Law law;
};

std::vector<Family> families()
{
    return {
        {make_power_law(1.5, 1.0), {oracle::Law::Power, 1.5, 1.0}},
        {make_power_law(2.0, 0.7), {oracle::Law::Power, 2.0, 0.7}},
        {make_power_law(3.0, 1.0), {oracle::Law::Power, 3.0, 1.0}},
        {make_exponential(0.5, 1.0), {oracle::Law::Exp, 0.5, 1.0}},
    };
}

}  // namespace

TEST(Potential, SingleMonopole)
{
    const auto c = make_finite({{0, 0, 0}});
    const auto v = phi_potential(c, {0, 0, 2}, 1e-14);
    EXPECT_DOUBLE_EQ(v.value, 0.125);
    EXPECT_LE(v.error, 1e-15);
}

TEST(Potential, SingularAtMonopole)
{
    const auto c = make_finite({{0, 0, 0}, {0, 2, 0}});
    try {
        phi_potential(c, {0, -2, 0}, 1e-10);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SingularPoint);
    }
}

TEST(Potential, FamiliesMatchDirectSum)
{
    auto g = oracle::rng(11);
    for (const auto& f : families()) {
        for (int k = 0; k < 12; ++k) {
            const auto u = oracle::unit_vector(g);
            const double r = oracle::log_uniform(g, 0.05, 300.0);
            const ImHPoint z{r * u.x, r * u.y, r * u.z};
            const auto v = phi_potential(f.config, z, 1e-10);
            const double ref = 0.25 * oracle::potential_sum(f.law, {}, to_vec(z), 2.0e5);
            EXPECT_NEAR(v.value, ref, v.error + 1e-11 * ref) << f.config.family() << " r=" << r;
            EXPECT_LE(v.error, 1e-10);
        }
    }
}

TEST(Potential, SampleReportsNearestMonopole)
{
    const auto c = make_finite({{0, 0, 0}, {0, 3, 0}});
    const auto s = potential_sample(c, {0, -2.5, 0}, 1e-12);
    EXPECT_NEAR(s.min_monopole_distance, 0.5, 1e-15);
    EXPECT_NEAR(s.value.value, 0.25 * (1.0 / 2.5 + 1.0 / 0.5), 1e-14);
}

TEST(Potential, MultipoleTailWithinBound)
{
    // power-law tail past the cutoff against direct summation
    const auto c = make_power_law(2.0, 1.0);
    auto g = oracle::rng(3);
    for (int k = 0; k < 20; ++k) {
        const auto u = oracle::unit_vector(g);
        const double r = oracle::uniform(g, 1.0, 400.0);
        const ImHPoint z{r * u.x, r * u.y, r * u.z};
        const auto tail = detail::make_multipole_tail(c, r, 1e-9);
        const auto v = detail::multipole_value(tail, z);
        long double ref = 0.0L;
        for (double n = tail.cutoff; n < 3.0e6; n += 1.0) ref += 1.0L / norm(z + c.tail_point(n));
        const double x0 = 3.0e6 - 0.5;
        ref += 1.0 / x0 - z.zeta2 / (3.0 * x0 * x0 * x0);
        EXPECT_NEAR(v.value, double(ref), v.error + 1e-13) << r;
        EXPECT_LE(v.error, 1e-9);
    }
}

TEST(Potential, GradientMatchesCentralDifferences)
{
    auto g = oracle::rng(5);
    for (const auto& f : families()) {
        for (int k = 0; k < 8; ++k) {
            const auto u = oracle::unit_vector(g);
            const double r = oracle::uniform(g, 0.5, 20.0);
            const ImHPoint z{r * u.x, r * u.y, r * u.z};
            const auto grad = grad_phi(f.config, z, 1e-12);
            const double h = 1e-4;
            const std::array<ImHPoint, 3> e{ImHPoint{h, 0, 0}, ImHPoint{0, h, 0}, ImHPoint{0, 0, h}};
            double diff = 0.0;
            double size = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double fd = (0.25 * oracle::potential_sum(f.law, {}, to_vec(z + e[i])) -
                                   0.25 * oracle::potential_sum(f.law, {}, to_vec(z - e[i]))) /
                                  (2.0 * h);
                diff += (fd - grad[i].value) * (fd - grad[i].value);
                size += grad[i].value * grad[i].value;
            }
            EXPECT_LE(std::sqrt(diff / size), 1e-5) << f.config.family() << " r=" << r;
        }
    }
}

TEST(Potential, LaplacianVanishesAwayFromMonopoles)
{
    auto g = oracle::rng(9);
    for (const auto& f : families()) {
        for (int k = 0; k < 6; ++k) {
            const auto u = oracle::unit_vector(g);
            const double r = oracle::uniform(g, 0.7, 30.0);
            const ImHPoint z{r * u.x, r * u.y, r * u.z};
            double nearest = 1e300;
            for (const auto& p : f.config.explicit_points()) nearest = std::min(nearest, norm(z + p));
            if (nearest < 0.3) continue;
            EXPECT_LE(std::abs(laplacian_check(f.config, z, 1e-3)), 1e-4);
        }
    }
    const auto c = make_finite({{0, 0, 0}});
    EXPECT_THROW(laplacian_check(c, {0, 0, 1e-3}, 1e-3), Error);
}

TEST(Potential, MeanValueOverSphere)
{
    // Phi is harmonic off the monopoles: its average over a sphere free of them is the centre value
    const auto c = make_power_law(2.0, 1.0);
    const ImHPoint centre{3.0, 0.5, -2.0};
    const double rho = 0.5;
    const auto mean = oracle::gk(
        [&](double t) {
            return std::sin(t) * oracle::gk(
                                     [&](double p) {
                                         const ImHPoint z = centre + rho * ImHPoint{std::sin(t) * std::cos(p), std::cos(t),
                                                                                    std::sin(t) * std::sin(p)};
                                         return phi_potential(c, z, 1e-12).value;
                                     },
                                     0.0, 2.0 * std::numbers::pi, {}, 1e-12);
        },
        0.0, std::numbers::pi, {}, 1e-12);
    EXPECT_NEAR(mean / (4.0 * std::numbers::pi), phi_potential(c, centre, 1e-12).value, 1e-10);
}

TEST(BallIntegral, ClosedFormsAgainstQuadrature)
{
    for (double R : {0.5, 2.0}) {
        for (double ratio : {0.0, 0.3, 0.9, 1.0, 1.5, 10.0}) {
            const double d = ratio * R;
            const oracle::Vec p{0.0, d, 0.0};
            const double ref = oracle::ball_integral_3d(
                [&](const oracle::Vec& x) { return 1.0 / oracle::dist(x, p); }, R, {d}, true, 1e-10);
            EXPECT_NEAR(ball_integral(d, R), ref, 1e-7 * ref) << R << " " << ratio;
        }
    }
    EXPECT_DOUBLE_EQ(ball_integral(0.0, 1.0), 2.0 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(ball_integral(1.0, 1.0), 4.0 * std::numbers::pi / 3.0);
    EXPECT_THROW(ball_integral(1.0, 0.0), Error);
}
