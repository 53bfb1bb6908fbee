#pragma once

// Test-side reference computations. Nothing here calls the library's summation,
// tail or quadrature code; integrals go through Boost.Math.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

struct Vec {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double dist(const Vec& a, const Vec& b) { return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z); }

/// Magnitudes of the reference families: lambda_0 = 0 and lambda_n = m(n) i for n >= 1.
struct Law {
    enum Kind { Power, Exp, Finite } kind = Finite;
    double alpha = 0.0;
    double scale = 1.0;

    double m(double n) const { return kind == Power ? scale * std::pow(n, alpha) : scale * std::exp(alpha * n); }
};

/// sum_n R / (R + |lambda_n|) by direct summation. The power-law remainder past N
/// is the midpoint integral of R/m - R^2/m^2, accurate to O(R^3 / m_N^3 N).
inline double phi(const Law& law, double R)
{
    long double s = 1.0L;  // lambda_0 = 0
    if (law.kind == Law::Exp) {
        for (int n = 1; n < 100000; ++n) {
            const long double t = R / (R + law.m(n));
            s += t;
            if (t < 1e-22L) break;
        }
        return double(s);
    }
    const double a = law.alpha;
    const double N = std::ceil(std::max(2.0e5, 2.0e3 * std::pow(R / law.scale, 1.0 / a)));
    for (double n = 1.0; n < N; n += 1.0) s += R / (R + law.m(n));
    const double x0 = N - 0.5;
    const double c = law.scale;
    const long double first = (long double)R / c * std::pow(x0, 1.0 - a) / (a - 1.0);
    const long double second = (long double)R * R / (c * c) * std::pow(x0, 1.0 - 2.0 * a) / (2.0 * a - 1.0);
    return double(s + first - second);
}

/// #{n : |lambda_n| <= R} + sum_{|lambda_n| > R} R / |lambda_n|.
inline double psi(const Law& law, double R)
{
    long double s = 1.0L;
    if (law.kind == Law::Exp) {
        for (int n = 1; n < 100000; ++n) {
            const double m = law.m(n);
            s += m <= R ? 1.0L : (long double)R / m;
            if (m > 1e25 * R) break;
        }
        return double(s);
    }
    const double a = law.alpha;
    const double N = std::ceil(std::max(2.0e5, 2.0e3 * std::pow(R / law.scale, 1.0 / a)));
    for (double n = 1.0; n < N; n += 1.0) {
        const double m = law.m(n);
        s += m <= R ? 1.0L : (long double)R / m;
    }
    const double x0 = N - 0.5;
    return double(s + (long double)R / law.scale * std::pow(x0, 1.0 - a) / (a - 1.0));
}

/// sum_n 1/|zeta + lambda_n| with explicit extra points (finite configs) or the
/// family law on the i-axis up to N terms; the tail past N uses 1/|lambda_n|
/// summed by midpoint integrals to first order in zeta.
inline double potential_sum(const Law& law, const std::vector<Vec>& finite_points, const Vec& zeta, double N = 4000.0)
{
    long double s = 0.0L;
    if (law.kind == Law::Finite) {
        for (const auto& p : finite_points) s += 1.0L / dist(zeta, {-p.x, -p.y, -p.z});
        return double(s);
    }
    s += 1.0L / std::hypot(zeta.x, zeta.y, zeta.z);
    if (law.kind == Law::Exp) {
        for (int n = 1; n < 2000; ++n) {
            const double m = law.m(n);
            s += 1.0L / std::hypot(zeta.x, zeta.y + m, zeta.z);
            if (m > 1e22) break;
        }
        return double(s);
    }
    for (double n = 1.0; n < N; n += 1.0) s += 1.0L / std::hypot(zeta.x, zeta.y + law.m(n), zeta.z);
    // 1/|zeta + m i| = 1/m - zeta_y/m^2 + O(|zeta|^2/m^3)
    const double x0 = N - 0.5;
    const double a = law.alpha;
    const double c = law.scale;
    const long double s1 = std::pow(x0, 1.0 - a) / (c * (a - 1.0));
    const long double s2 = std::pow(x0, 1.0 - 2.0 * a) / (c * c * (2.0 * a - 1.0));
    return double(s + s1 - zeta.y * s2);
}

/// Adaptive Gauss-Kronrod over [a, b] with interior cut points.
template <typename F>
double gk(const F& f, double a, double b, std::vector<double> cuts = {}, double tol = 1e-10)
{
    std::vector<double> pts{a};
    for (double c : cuts) {
        if (c > a && c < b) pts.push_back(c);
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, pts[i], pts[i + 1], 20, tol);
    }
    return total;
}

/// tanh-sinh over [a, b]; handles integrable endpoint singularities.
template <typename F>
double ts(const F& f, double a, double b, double tol = 1e-12)
{
    static boost::math::quadrature::tanh_sinh<double> rule;
    return rule.integrate(f, a, b, tol);
}

/// int over the ball |x| < R of f, in spherical coordinates about the y axis
/// (x = r sin t cos p, y = r cos t, z = r sin t sin p), with radial cuts.
template <typename F>
double ball_integral_3d(const F& f, double R, const std::vector<double>& radial_cuts, bool axisymmetric,
                        double tol = 1e-8)
{
    auto shell = [&](double r) {
        auto polar = [&](double t) {
            const double st = std::sin(t);
            const double ct = std::cos(t);
            if (axisymmetric) return 2.0 * std::numbers::pi * st * f(Vec{r * st, r * ct, 0.0});
            auto az = [&](double p) { return f(Vec{r * st * std::cos(p), r * ct, r * st * std::sin(p)}); };
            return st * gk(az, 0.0, 2.0 * std::numbers::pi, {std::numbers::pi}, tol);
        };
        return r * r * gk(polar, 0.0, std::numbers::pi, {}, tol);
    };
    return gk(shell, 0.0, R, radial_cuts, tol);
}

inline std::mt19937_64 rng(std::uint64_t seed = 20260419ULL) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

inline double log_uniform(std::mt19937_64& g, double lo, double hi)
{
    return std::exp(uniform(g, std::log(lo), std::log(hi)));
}

inline Vec unit_vector(std::mt19937_64& g)
{
    std::normal_distribution<double> n(0.0, 1.0);
    for (;;) {
        Vec v{n(g), n(g), n(g)};
        const double r = std::hypot(v.x, v.y, v.z);
        if (r > 1e-8) return {v.x / r, v.y / r, v.z / r};
    }
}

}  // namespace oracle
