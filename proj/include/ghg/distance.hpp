#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ghg/certified.hpp"
#include "ghg/config.hpp"
#include "ghg/growth.hpp"
#include "ghg/parallel.hpp"
#include "ghg/potential.hpp"
#include "ghg/quadrature.hpp"
#include "ghg/summation.hpp"

namespace ghg {

struct DistanceBounds {
    ImHPoint zeta;
    CertifiedValue lower_sq;
    CertifiedValue gauge_sq;
    CertifiedValue radial_length;
    double base_offset = 0.0;
};

namespace detail {

/// |zeta|^2 / (|l| + |zeta + l| + sqrt2 sqrt(|l||zeta + l| + <l, zeta + l>)).
inline double gauge_term(const ImHPoint& zeta, const ImHPoint& lambda)
{
    const ImHPoint w = zeta + lambda;
    const double a = norm(lambda);
    const double b = norm(w);
    const double inner = std::max(0.0, a * b + dot(lambda, w));
    const double r = norm(zeta);
    return r * r / (a + b + std::numbers::sqrt2 * std::sqrt(inner));
}

}  // namespace detail

/// Exact gauge-minimized squared distance sum_n gauge_term(zeta, lambda_n).
///
/// Tail points m i with m >= 2|zeta| satisfy
///   |term - r^2/(4m) + zeta_2 r^2/(8m^2)| <= 0.15 r^4/m^3,   r = |zeta|
/// (the sharp constant over m >= 2r is 0.1226, attained at m = 2r).
inline CertifiedValue gauge_distance_sq(const MonopoleConfig& config, const ImHPoint& zeta, double tol)
{
    if (!zeta.is_finite()) throw Error(ErrorCode::InvalidArgument, "evaluation point must be finite");
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    const double r = norm(zeta);
    if (r == 0.0) return {};

    CompensatedSum sum;
    for (const auto& p : config.explicit_points()) sum.add(detail::gauge_term(zeta, p));
    CertifiedValue out = sum.certified();
    if (!config.has_tail()) return out;

    const auto& tail = config.tail();
    auto bracket = [&](double cutoff) {
        const auto s1 = power_sum_tail(tail, 1.0, cutoff);
        const auto s2 = power_sum_tail(tail, 2.0, cutoff);
        const auto s3 = power_sum_tail(tail, 3.0, cutoff);
        const double r2 = r * r;
        CertifiedValue out = (0.25 * r2) * s1 - (0.125 * zeta.zeta2 * r2) * s2;
        out.error += 0.15 * r2 * r2 * s3.hi();
        return out;
    };
    const double base = detail::first_tail_index_beyond(config, 2.0 * r);
    double extra = 0.0;
    for (;;) {
        const double cutoff = base + extra;
        const auto tail_part = bracket(cutoff);
        if (tail_part.error <= 0.5 * tol || extra > 1.0e8) {
            CompensatedSum mid;
            const double start = static_cast<double>(tail.start_index);
            for (double n = start; n < cutoff; n += 1.0) mid.add(detail::gauge_term(zeta, config.tail_point(n)));
            out += mid.certified();
            out += tail_part;
            out.error += kRoundingSlack * std::abs(out.value);
            if (out.error > tol) throw Error(ErrorCode::TolUnreachable, "gauge distance tail cannot meet tol");
            return out;
        }
        extra = std::max(64.0, 2.0 * extra);
    }
}

/// Q_- |zeta| phi(|zeta|) with Q_- = 1/8.
inline CertifiedValue lower_bound_dist_sq(const MonopoleConfig& config, const ImHPoint& zeta, double tol)
{
    if (!zeta.is_finite()) throw Error(ErrorCode::InvalidArgument, "evaluation point must be finite");
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    const double r = norm(zeta);
    if (r == 0.0) return {};
    return (0.125 * r) * phi_growth(config, r, tol / (0.125 * r));
}

namespace detail {

struct RayBreak {
    double t;
    bool singular;
};

/// Parameters t in (1, T) where the ray t*e passes closest to a monopole -lambda_n.
inline std::vector<RayBreak> ray_breaks(const MonopoleConfig& config, const ImHPoint& e, double T, double cutoff)
{
    std::vector<RayBreak> out;
    auto consider = [&](const ImHPoint& p) {
        const double t = -dot(p, e);
        if (!(t > 1.0 && t < T)) return;
        const double perp = norm(p + t * e);
        out.push_back({t, perp <= 1e-9 * t});
    };
    for (const auto& p : config.explicit_points()) consider(p);
    if (config.has_tail()) {
        const double start = static_cast<double>(config.tail().start_index);
        for (double n = start; n < cutoff; n += 1.0) consider(config.tail_point(n));
    }
    std::sort(out.begin(), out.end(), [](const RayBreak& a, const RayBreak& b) { return a.t < b.t; });
    return out;
}

/// int_1^T sqrt(Phi(t e) + shift) dt along the unit direction e.
inline CertifiedValue radial_integral(const MonopoleConfig& config, const ImHPoint& zeta, double shift, double tol)
{
    if (!zeta.is_finite()) throw Error(ErrorCode::InvalidArgument, "evaluation point must be finite");
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    const double T = norm(zeta);
    if (T <= 1.0) return {};
    const ImHPoint e = (1.0 / T) * zeta;

    // Phi error eps changes sqrt(Phi) by at most eps sqrt(t) since Phi >= 1/(4t).
    const double weight = (2.0 / 3.0) * T * std::sqrt(T);
    const double phi_error = 0.1 * tol / weight;
    const auto tail = make_multipole_tail(config, T, 4.0 * phi_error);

    auto f = [&](double t) {
        const double phi = 0.25 * potential_sum(config, t * e, tail).value;
        return std::sqrt(phi + shift);
    };

    const auto breaks = ray_breaks(config, e, T, tail.cutoff);
    std::vector<RayBreak> nodes{{1.0, false}};
    nodes.insert(nodes.end(), breaks.begin(), breaks.end());
    nodes.push_back({T, false});

    const double piece_tol = 0.8 * tol / double(nodes.size() - 1);
    CompensatedSum total;
    double quad_error = 0.0;
    auto add = [&](const QuadratureResult& q) {
        total.add(q.value);
        quad_error += q.error;
    };
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const double p = nodes[k].t;
        const double q = nodes[k + 1].t;
        if (!(q > p)) continue;
        const bool left = nodes[k].singular;
        const bool right = nodes[k + 1].singular;
        // t = b -+ u^2 removes the |t - b|^{-1/2} singularity at a crossing b.
        auto from_left = [&](double a, double b) {
            return integrate_adaptive([&](double u) { return 2.0 * u * f(a + u * u); }, 0.0, std::sqrt(b - a),
                                      0.5 * piece_tol);
        };
        auto from_right = [&](double a, double b) {
            return integrate_adaptive([&](double u) { return 2.0 * u * f(b - u * u); }, 0.0, std::sqrt(b - a),
                                      0.5 * piece_tol);
        };
        if (left && right) {
            const double mid = 0.5 * (p + q);
            add(from_left(p, mid));
            add(from_right(mid, q));
        } else if (left) {
            const double mid = 0.5 * (p + q);
            add(from_left(p, mid));
            add(integrate_adaptive(f, mid, q, 0.5 * piece_tol));
        } else if (right) {
            const double mid = 0.5 * (p + q);
            add(integrate_adaptive(f, p, mid, 0.5 * piece_tol));
            add(from_right(mid, q));
        } else {
            add(integrate_adaptive(f, p, q, piece_tol));
        }
    }
    const double value = total.value();
    return {value, quad_error + phi_error * weight + total.rounding_bound()};
}

}  // namespace detail

/// l(zeta) = int_1^{|zeta|} sqrt(Phi(t zeta/|zeta|)) dt, and 0 for |zeta| <= 1.
inline CertifiedValue radial_length(const MonopoleConfig& config, const ImHPoint& zeta, double tol)
{
    return detail::radial_integral(config, zeta, 0.0, tol);
}

/// l^{(s)}(zeta) = int_1^{|zeta|} sqrt(Phi(t zeta/|zeta|) + s/4) dt.
inline CertifiedValue radial_length_taubnut(const MonopoleConfig& config, double s, const ImHPoint& zeta, double tol)
{
    if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "s must be > 0");
    return detail::radial_integral(config, zeta, 0.25 * s, tol);
}

/// Spherical Fibonacci lattice: z_i = 1 - (2i+1)/n, azimuth advancing by the golden angle.
inline std::vector<ImHPoint> fibonacci_sphere(std::size_t n)
{
    std::vector<ImHPoint> out;
    out.reserve(n);
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * double(i) + 1.0) / double(n);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * double(i);
        out.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
    return out;
}

namespace detail {

inline double direction_tol(double R) { return 1e-8 * std::max(1.0, std::sqrt(R)); }

inline std::vector<CertifiedValue> lengths_on_sphere(const MonopoleConfig& config, double R, double s,
                                                     std::size_t direction_count)
{
    const auto dirs = fibonacci_sphere(direction_count);
    const double tol = direction_tol(R);
    return parallel_map(dirs.size(), [&](std::size_t i) {
        const ImHPoint zeta = R * dirs[i];
        return s > 0.0 ? radial_length_taubnut(config, s, zeta, tol) : radial_length(config, zeta, tol);
    });
}

}  // namespace detail

/// (1/4pi) int_{S^2} l(R Theta) dm over a Fibonacci lattice (l^{(s)} when s > 0).
/// The error is the mean quadrature error plus a sampling term 2 (max - min) / sqrt(n);
/// the standard error alone under-covers at very small n.
inline CertifiedValue sphere_average_length(const MonopoleConfig& config, double R, double s,
                                            std::size_t direction_count)
{
    if (direction_count < 2) throw Error(ErrorCode::InvalidArgument, "direction_count must be >= 2");
    if (!(R >= 0.0) || !std::isfinite(R)) throw Error(ErrorCode::InvalidArgument, "R must be finite and >= 0");
    if (!(s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "s must be >= 0");
    const auto lengths = detail::lengths_on_sphere(config, R, s, direction_count);
    CompensatedSum sum;
    double quad_error = 0.0;
    for (const auto& l : lengths) {
        sum.add(l.value);
        quad_error += l.error;
    }
    const double n = double(lengths.size());
    const auto [lo, hi] = std::minmax_element(lengths.begin(), lengths.end(),
                                              [](const auto& a, const auto& b) { return a.value < b.value; });
    const double spread = hi->value - lo->value;
    return {sum.value() / n, quad_error / n + 2.0 * spread / std::sqrt(n)};
}

/// Measure of U_{R,T} = {Theta : L + l(R Theta) <= sqrt(T R phi(R))}, estimated as
/// 4 pi times the lattice fraction. For s > 0 the threshold becomes
/// sqrt(tau_T(R)) + sqrt(s R^2 / 4) and l is replaced by l^{(s)}. base_offset stands in for L.
inline double sphere_sublevel_measure(const MonopoleConfig& config, double R, double T, double s,
                                      std::size_t direction_count, double base_offset = 0.0)
{
    if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "T must be > 0");
    if (direction_count < 1) throw Error(ErrorCode::InvalidArgument, "direction_count must be >= 1");
    if (!(s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "s must be >= 0");
    if (!(base_offset >= 0.0)) throw Error(ErrorCode::InvalidArgument, "base_offset must be >= 0");
    double threshold = std::sqrt(tau(config, T, R).value);
    if (s > 0.0) threshold += std::sqrt(0.25 * s * R * R);
    const auto lengths = detail::lengths_on_sphere(config, R, s, direction_count);
    const auto inside = std::count_if(lengths.begin(), lengths.end(),
                                      [&](const CertifiedValue& l) { return base_offset + l.value <= threshold; });
    return 4.0 * std::numbers::pi * double(inside) / double(lengths.size());
}

/// All distance surrogates at one point (Taub-NUT radial length when s > 0).
inline DistanceBounds distance_bounds(const MonopoleConfig& config, const ImHPoint& zeta, double tol, double s = 0.0,
                                      double base_offset = 0.0)
{
    DistanceBounds out;
    out.zeta = zeta;
    out.lower_sq = lower_bound_dist_sq(config, zeta, tol);
    out.gauge_sq = gauge_distance_sq(config, zeta, tol);
    out.radial_length = s > 0.0 ? radial_length_taubnut(config, s, zeta, tol) : radial_length(config, zeta, tol);
    out.base_offset = base_offset;
    return out;
}

}  // namespace ghg
