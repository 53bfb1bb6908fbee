#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>

#include <boost/math/special_functions/beta.hpp>

#include "ghg/certified.hpp"
#include "ghg/config.hpp"
#include "ghg/summation.hpp"

namespace ghg {

struct GrowthEval {
    double R = 0.0;
    CertifiedValue phi;
    CertifiedValue psi;
    CertifiedValue tau;
    CertifiedValue theta;
};

struct TaubNutParams {
    double s = 1.0;
};

/// Relative accuracy used when a growth function is evaluated without an explicit tol.
inline constexpr double kGrowthRelTol = 1e-11;

namespace detail {

/// Calls fn(law) with the smooth description of x -> R / (R + |lambda(x)|) for the
/// tail, R > 0. Both laws are written as g = 1/(1+u) with u increasing in x.
template <typename Fn>
auto with_phi_law(const MonopoleConfig& config, double R, const Fn& fn)
{
    const auto& tail = config.tail();
    const double a = tail.alpha;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    if (tail.kind == TailKind::PowerLaw) {
        // u = (x / xs)^a
        const double xs = std::pow(R / tail.scale, 1.0 / a);
        auto u_of = [=](double x) { return std::pow(x / xs, a); };
        auto integral = [=](double x) {
            return xs / a * boost::math::beta(1.0 - 1.0 / a, 1.0 / a, 1.0 / (1.0 + u_of(x)));
        };
        auto d1 = [=](double x) {
            const double u = u_of(x);
            return -a * u / (x * (1.0 + u) * (1.0 + u));
        };
        auto d2 = [=](double x) {
            const double u = u_of(x);
            const double w = 1.0 + u;
            return a / (x * x) * ((a + 1.0) * u * u - (a - 1.0) * u) / (w * w * w);
        };
        // g''' = 0 where (a+1)(a+2)u^2 - 4(a^2-1)u + (a-1)(a-2) = 0
        std::array<double, 2> zeros{nan, nan};
        const double disc = a * std::sqrt(3.0 * (a * a - 1.0));
        const double denom = (a + 1.0) * (a + 2.0);
        const double roots[2] = {(2.0 * (a * a - 1.0) - disc) / denom, (2.0 * (a * a - 1.0) + disc) / denom};
        for (int k = 0; k < 2; ++k) {
            if (roots[k] > 0.0) zeros[k] = xs * std::pow(roots[k], 1.0 / a);
        }
        return fn(SmoothTail<decltype(integral), decltype(d1), decltype(d2)>{integral, d1, d2, zeros});
    }

    // u = c e^{a x} / R, so int_x^inf g = log1p(1/u) / a
    auto u_of = [=](double x) { return tail.scale * std::exp(a * x) / R; };
    auto integral = [=](double x) { return std::log1p(R / (tail.scale * std::exp(a * x))) / a; };
    auto d1 = [=](double x) {
        const double u = u_of(x);
        return -a * u / ((1.0 + u) * (1.0 + u));
    };
    auto d2 = [=](double x) {
        const double u = u_of(x);
        const double w = 1.0 + u;
        return a * a * u * (u - 1.0) / (w * w * w);
    };
    // g''' = 0 at u = 2 -+ sqrt(3)
    const double shift = std::log(R / tail.scale) / a;
    std::array<double, 2> zeros{shift + std::log(2.0 - std::sqrt(3.0)) / a, shift + std::log(2.0 + std::sqrt(3.0)) / a};
    return fn(SmoothTail<decltype(integral), decltype(d1), decltype(d2)>{integral, d1, d2, zeros});
}

inline CertifiedValue phi_tail(const MonopoleConfig& config, double R, double tol)
{
    const double first = static_cast<double>(config.tail().start_index);
    auto term = [&](double n) { return R / (R + config.tail_magnitude(n)); };
    return with_phi_law(config, R, [&](const auto& law) { return smooth_tail_sum(term, law, first, tol); });
}

/// int_{start - 1/2}^inf of the tail summand, a cheap proxy for the tail sum.
inline double phi_tail_estimate(const MonopoleConfig& config, double R)
{
    if (!config.has_tail() || R == 0.0) return 0.0;
    const double x0 = static_cast<double>(config.tail().start_index) - 0.5;
    return with_phi_law(config, R, [&](const auto& law) { return law.integral(x0); });
}

inline double explicit_phi(const MonopoleConfig& config, double R, CompensatedSum& sum)
{
    for (double m : config.magnitudes()) {
        if (R == 0.0) {
            sum.add(m == 0.0 ? 1.0 : 0.0);
        } else {
            sum.add(R / (R + m));
        }
    }
    return sum.value();
}

}  // namespace detail

/// phi(R) = sum_n R / (R + |lambda_n|); phi(0) is the number of zero monopoles.
inline CertifiedValue phi_growth(const MonopoleConfig& config, double R, double tol)
{
    if (!(R >= 0.0) || !std::isfinite(R)) throw Error(ErrorCode::InvalidArgument, "R must be finite and >= 0");
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    CompensatedSum sum;
    detail::explicit_phi(config, R, sum);
    CertifiedValue out = sum.certified();
    if (config.has_tail() && R > 0.0) {
        const double tail_tol = std::max(0.5 * tol, tol - out.error);
        out += detail::phi_tail(config, R, tail_tol);
    }
    return out;
}

/// phi(R) to relative accuracy kGrowthRelTol.
inline CertifiedValue phi_growth(const MonopoleConfig& config, double R)
{
    if (!(R >= 0.0) || !std::isfinite(R)) throw Error(ErrorCode::InvalidArgument, "R must be finite and >= 0");
    CompensatedSum sum;
    const double estimate = detail::explicit_phi(config, R, sum) + detail::phi_tail_estimate(config, R);
    return phi_growth(config, R, kGrowthRelTol * std::max(1.0, estimate));
}

/// psi(R) = #N(R) + sum_{|lambda_n| > R} R / |lambda_n|. The count is exact and
/// the tail sum is summed in closed form, so the error is at rounding level.
inline CertifiedValue psi_growth(const MonopoleConfig& config, double R)
{
    if (!(R >= 0.0) || !std::isfinite(R)) throw Error(ErrorCode::InvalidArgument, "R must be finite and >= 0");
    CompensatedSum sum;
    for (double m : config.magnitudes()) sum.add(m <= R ? 1.0 : R / m);
    CertifiedValue out = sum.certified();
    if (config.has_tail()) {
        const auto& tail = config.tail();
        const double start = static_cast<double>(tail.start_index);
        const double last = tail.last_index_within(R);
        double first_outside = start;
        if (last >= start) {
            out.value += last - start + 1.0;
            first_outside = last + 1.0;
        }
        if (R > 0.0) out += R * power_sum_tail(tail, 1.0, first_outside);
    }
    return out;
}

inline CertifiedValue psi_growth(const MonopoleConfig& config, double R, double tol)
{
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    auto out = psi_growth(config, R);
    if (out.error > tol) throw Error(ErrorCode::TolUnreachable, "psi tail cannot meet the requested tolerance");
    return out;
}

inline GrowthEval evaluate_growth(const MonopoleConfig& config, double R)
{
    GrowthEval out;
    out.R = R;
    out.phi = phi_growth(config, R);
    out.psi = psi_growth(config, R);
    out.tau = R * out.phi;
    out.theta = (R * R) * out.phi;
    return out;
}

/// tau_C(R) = C R phi(R).
inline CertifiedValue tau(const MonopoleConfig& config, double C, double R)
{
    if (!(C > 0.0)) throw Error(ErrorCode::InvalidArgument, "C must be > 0");
    return (C * R) * phi_growth(config, R);
}

/// theta_C(R) = C R^2 phi(R).
inline CertifiedValue theta(const MonopoleConfig& config, double C, double R)
{
    if (!(C > 0.0)) throw Error(ErrorCode::InvalidArgument, "C must be > 0");
    return (C * R * R) * phi_growth(config, R);
}

/// tau^{(s)}_C(R) = C R phi(R) + s R^2 / 4.
inline CertifiedValue tau_s(const MonopoleConfig& config, double C, double s, double R)
{
    if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "s must be > 0");
    auto out = tau(config, C, R);
    out.value += 0.25 * s * R * R;
    out.error += kRoundingSlack * std::abs(out.value);
    return out;
}

/// theta^{(s)}_C(R) = C R^2 phi(R) + pi^2 s R^3 / 3.
inline CertifiedValue theta_s(const MonopoleConfig& config, double C, double s, double R)
{
    if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "s must be > 0");
    auto out = theta(config, C, R);
    out.value += std::numbers::pi * std::numbers::pi * s * R * R * R / 3.0;
    out.error += kRoundingSlack * std::abs(out.value);
    return out;
}

namespace detail {

/// Bisection for f(R) = y on an increasing f with f(R) >= C R.
template <typename F>
double invert_increasing(const F& f, double C, double y, double rtol)
{
    if (!(y >= 0.0) || !std::isfinite(y)) throw Error(ErrorCode::InvalidArgument, "y must be finite and >= 0");
    if (!(rtol > 0.0)) throw Error(ErrorCode::InvalidArgument, "rtol must be > 0");
    if (y == 0.0) return 0.0;
    const double target_tol = rtol * std::max(y, 1e-300);

    double lo = 0.0;
    double hi = std::min(1.0, y / C);
    int iterations = 0;
    for (double value = f(hi); value < y; value = f(hi)) {
        if (std::abs(value - y) <= target_tol) return hi;
        lo = hi;
        hi *= 2.0;
        if (++iterations > 2100 || !std::isfinite(hi)) {
            throw Error(ErrorCode::NonConvergence, "could not bracket the inverse");
        }
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = lo + 0.5 * (hi - lo);
        const double value = f(mid);
        if (std::abs(value - y) <= target_tol) return mid;
        if (mid <= lo || mid >= hi) break;
        if (value < y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    throw Error(ErrorCode::NonConvergence, "bisection did not reach the requested rtol");
}

}  // namespace detail

/// R* with |tau_C(R*) - y| <= rtol * y.
inline double tau_inverse(const MonopoleConfig& config, double C, double y, double rtol = 1e-10)
{
    if (!(C > 0.0)) throw Error(ErrorCode::InvalidArgument, "C must be > 0");
    return detail::invert_increasing([&](double R) { return tau(config, C, R).value; }, C, y, rtol);
}

inline double tau_s_inverse(const MonopoleConfig& config, double C, double s, double y, double rtol = 1e-10)
{
    if (!(C > 0.0)) throw Error(ErrorCode::InvalidArgument, "C must be > 0");
    if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "s must be > 0");
    return detail::invert_increasing([&](double R) { return tau_s(config, C, s, R).value; }, C, y, rtol);
}

/// phi(a R) <= a phi(R) and psi(a R) <= a psi(R), within certified error.
inline bool scaling_inequality_check(const MonopoleConfig& config, double a, double R)
{
    if (!(a >= 1.0)) throw Error(ErrorCode::InvalidArgument, "scaling factor must be >= 1");
    const auto phi_scaled = phi_growth(config, a * R);
    const auto phi_base = phi_growth(config, R);
    const auto psi_scaled = psi_growth(config, a * R);
    const auto psi_base = psi_growth(config, R);
    return certified_le(phi_scaled, a * phi_base) && certified_le(psi_scaled, a * psi_base);
}

/// #N_A(R) <= #N_{alpha B}(R) for every grid R >= R0 (default: the smallest grid point).
inline bool compare_counting(const MonopoleConfig& a, const MonopoleConfig& b, double alpha,
                             std::span<const double> R_grid, std::optional<double> R0 = std::nullopt)
{
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be > 0");
    if (R_grid.empty()) throw Error(ErrorCode::InvalidArgument, "grid must be nonempty");
    const double r0 = R0.value_or(*std::min_element(R_grid.begin(), R_grid.end()));
    for (double R : R_grid) {
        if (R < r0) continue;
        // #N_{alpha B}(R) = #N_B(R / alpha)
        if (count_inside(a, R).value > count_inside(b, R / alpha).value) return false;
    }
    return true;
}

/// psi_A(R) <= psi_{alpha B}(R) on the grid, the conclusion paired with compare_counting.
inline bool compare_psi(const MonopoleConfig& a, const MonopoleConfig& b, double alpha, std::span<const double> R_grid,
                        std::optional<double> R0 = std::nullopt)
{
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be > 0");
    if (R_grid.empty()) throw Error(ErrorCode::InvalidArgument, "grid must be nonempty");
    const auto scaled_b = scaled(b, alpha);
    const double r0 = R0.value_or(*std::min_element(R_grid.begin(), R_grid.end()));
    for (double R : R_grid) {
        if (R < r0) continue;
        if (!certified_le(psi_growth(a, R), psi_growth(scaled_b, R))) return false;
    }
    return true;
}

}  // namespace ghg
