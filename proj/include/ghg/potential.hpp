#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ghg/certified.hpp"
#include "ghg/config.hpp"
#include "ghg/summation.hpp"

namespace ghg {

struct PotentialSample {
    ImHPoint point;
    CertifiedValue value;
    double min_monopole_distance = 0.0;
};

inline constexpr double kSingularRadius = 1e-12;

namespace detail {

inline double first_tail_index_beyond(const MonopoleConfig& config, double radius)
{
    const auto& tail = config.tail();
    const double start = static_cast<double>(tail.start_index);
    const double last = tail.last_index_within(radius);
    return std::max(start, last + 1.0);
}

/// Tail indices n >= cutoff handled by the Legendre expansion
///   1/|zeta + m d| = sum_k (-1)^k r^k P_k(cos) / m^{k+1},   cos = <zeta, d>/r,
/// valid for every |zeta| <= radius because |lambda_cutoff| >= 2 radius. With
/// |P_k| <= 1 the terms k >= K sum to at most 2 r^K S_{K+1}. Sums are stored
/// normalized by |lambda_cutoff| so high orders stay in range.
struct MultipoleTail {
    double cutoff = 0.0;
    double radius = 0.0;
    double lead = 0.0;  // |lambda_cutoff|
    int order = 0;
    std::vector<CertifiedValue> sums;  // sums[k] = sum_{n >= cutoff} (lead / |lambda_n|)^{k+1}, k <= order
};

inline constexpr int kMaxMultipoleOrder = 60;

/// Smallest order (then cutoff) whose remainder at |zeta| = radius meets tol on
/// sum_n 1/|zeta + lambda_n|.
inline MultipoleTail make_multipole_tail(const MonopoleConfig& config, double radius, double tol)
{
    MultipoleTail out;
    out.radius = radius;
    if (!config.has_tail()) return out;
    const auto& tail = config.tail();
    const double base = first_tail_index_beyond(config, 2.0 * radius);
    double extra = 0.0;
    for (int attempt = 0; attempt < 40; ++attempt) {
        out.cutoff = base + extra;
        out.lead = config.tail_magnitude(out.cutoff);
        out.sums.clear();
        const double rho = radius / out.lead;
        double coefficient_error = 0.0;
        double rho_k = 1.0;
        for (int k = 0; k <= kMaxMultipoleOrder; ++k) {
            out.sums.push_back(normalized_power_sum_tail(tail, double(k + 1), out.cutoff));
            // remainder for order k uses sums[k] = S_{k+1}
            const double remainder = 2.0 * rho_k * out.sums[k].hi() / out.lead;
            if (remainder + coefficient_error <= tol) {
                out.order = k;
                return out;
            }
            coefficient_error += rho_k * out.sums[k].error / out.lead;
            rho_k *= rho;
        }
        extra = std::max(64.0, 2.0 * extra);
    }
    throw Error(ErrorCode::TolUnreachable, "potential tail cannot be certified to the requested tolerance");
}

/// sum_{n >= cutoff} 1/|zeta + lambda_n| for |zeta| <= tail.radius.
inline CertifiedValue multipole_value(const MultipoleTail& tail, const ImHPoint& zeta)
{
    const double r = norm(zeta);
    const double c = r > 0.0 ? dot(zeta, kAxisI) / r : 0.0;
    const double rho = r / tail.lead;
    // Bonnet recurrence for P_k(c); terms (-rho)^k P_k(c) sums[k]
    double p_prev = 1.0;
    double p_curr = c;
    double rho_k = 1.0;
    CompensatedSum sum;
    double coefficient_error = 0.0;
    for (int k = 0; k < tail.order; ++k) {
        double pk;
        if (k == 0) {
            pk = 1.0;
        } else if (k == 1) {
            pk = c;
        } else {
            pk = ((2.0 * k - 1.0) * c * p_curr - (k - 1.0) * p_prev) / k;
            p_prev = p_curr;
            p_curr = pk;
        }
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        sum.add(sign * rho_k * pk * tail.sums[k].value);
        coefficient_error += rho_k * tail.sums[k].error;
        rho_k *= rho;
    }
    const double remainder = 2.0 * rho_k * tail.sums[tail.order].hi();
    return {sum.value() / tail.lead, (remainder + coefficient_error + sum.rounding_bound()) / tail.lead};
}

inline void check_distance(double r)
{
    if (r < kSingularRadius) throw Error(ErrorCode::SingularPoint, "evaluation point coincides with a monopole");
}

/// sum_n 1/|zeta + lambda_n|: explicit points and tail indices below the cutoff
/// exactly, the rest by the multipole expansion.
inline CertifiedValue potential_sum(const MonopoleConfig& config, const ImHPoint& zeta, const MultipoleTail& tail,
                                    double* min_distance = nullptr)
{
    CompensatedSum sum;
    double nearest = std::numeric_limits<double>::infinity();
    auto add = [&](const ImHPoint& v) {
        const double r = norm(v);
        check_distance(r);
        nearest = std::min(nearest, r);
        sum.add(1.0 / r);
    };
    for (const auto& p : config.explicit_points()) add(zeta + p);
    CertifiedValue out{};
    if (config.has_tail()) {
        const double r = norm(zeta);
        if (r > tail.radius * (1.0 + 1e-12)) {
            throw Error(ErrorCode::InvalidArgument, "evaluation point outside the multipole radius");
        }
        const double start = static_cast<double>(config.tail().start_index);
        for (double n = start; n < tail.cutoff; n += 1.0) add(zeta + config.tail_point(n));
        out = multipole_value(tail, zeta);
        nearest = std::min(nearest, tail.lead - r);
    }
    out += sum.certified();
    if (min_distance) *min_distance = nearest;
    return out;
}

// For a tail point m d with m >= 4|zeta|:
//   |(zeta + m d)/|zeta + m d|^3 - d/m^2|_inf <= 12 |zeta| / m^3
inline constexpr double kTailGradConst = 12.0;

inline std::array<CertifiedValue, 3> gradient_sum(const MonopoleConfig& config, const ImHPoint& zeta, double cutoff)
{
    std::array<CompensatedSum, 3> sums;
    auto add = [&](const ImHPoint& v) {
        const double r = norm(v);
        check_distance(r);
        const double w = -1.0 / (r * r * r);
        sums[0].add(w * v.zeta1);
        sums[1].add(w * v.zeta2);
        sums[2].add(w * v.zeta3);
    };
    for (const auto& p : config.explicit_points()) add(zeta + p);
    std::array<CertifiedValue, 3> out{};
    if (config.has_tail()) {
        const double start = static_cast<double>(config.tail().start_index);
        for (double n = start; n < cutoff; n += 1.0) add(zeta + config.tail_point(n));
        const auto s2 = power_sum_tail(config.tail(), 2.0, cutoff);
        const auto s3 = power_sum_tail(config.tail(), 3.0, cutoff);
        const double bound = kTailGradConst * norm(zeta) * s3.hi();
        // the leading tail term points along -d = -i
        out[0] = {0.0, bound};
        out[1] = {-s2.value, s2.error + bound};
        out[2] = {0.0, bound};
    }
    for (int k = 0; k < 3; ++k) out[k] += sums[k].certified();
    return out;
}

inline double gradient_cutoff(const MonopoleConfig& config, const ImHPoint& zeta, double tol)
{
    if (!config.has_tail()) return 0.0;
    const double r = norm(zeta);
    const double base = first_tail_index_beyond(config, 4.0 * r);
    double extra = 0.0;
    for (int iter = 0; iter < 64; ++iter) {
        const double cutoff = base + extra;
        const auto s2 = power_sum_tail(config.tail(), 2.0, cutoff);
        const auto s3 = power_sum_tail(config.tail(), 3.0, cutoff);
        if (s2.error + kTailGradConst * r * s3.hi() <= tol) return cutoff;
        if (extra > 1.0e8) break;
        extra = std::max(64.0, 2.0 * extra);
    }
    throw Error(ErrorCode::TolUnreachable, "gradient tail cannot be certified to the requested tolerance");
}

}  // namespace detail

/// Phi(zeta) = (1/4) sum_n 1/|zeta + lambda_n|, certified to tol.
inline CertifiedValue phi_potential(const MonopoleConfig& config, const ImHPoint& zeta, double tol)
{
    if (!zeta.is_finite()) throw Error(ErrorCode::InvalidArgument, "evaluation point must be finite");
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    const auto tail = detail::make_multipole_tail(config, norm(zeta), 2.0 * tol);
    return 0.25 * detail::potential_sum(config, zeta, tail);
}

inline PotentialSample potential_sample(const MonopoleConfig& config, const ImHPoint& zeta, double tol)
{
    if (!zeta.is_finite()) throw Error(ErrorCode::InvalidArgument, "evaluation point must be finite");
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    const auto tail = detail::make_multipole_tail(config, norm(zeta), 2.0 * tol);
    PotentialSample out;
    out.point = zeta;
    out.value = 0.25 * detail::potential_sum(config, zeta, tail, &out.min_monopole_distance);
    return out;
}

/// grad Phi, componentwise certified.
inline std::array<CertifiedValue, 3> grad_phi(const MonopoleConfig& config, const ImHPoint& zeta, double tol)
{
    if (!zeta.is_finite()) throw Error(ErrorCode::InvalidArgument, "evaluation point must be finite");
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    const double cutoff = detail::gradient_cutoff(config, zeta, 2.0 * tol);
    auto g = detail::gradient_sum(config, zeta, cutoff);
    for (auto& c : g) c = 0.25 * c;
    return g;
}

/// int_{|x| < R} dx / |x - p| for |p| = d.
inline double ball_integral(double d, double R)
{
    if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be > 0");
    if (!(d >= 0.0)) throw Error(ErrorCode::InvalidArgument, "distance must be >= 0");
    constexpr double pi = std::numbers::pi;
    if (d >= R) return (4.0 * pi / 3.0) * R * R * R / d;
    return 2.0 * pi * (R * R - d * d / 3.0);
}

/// Seven-point finite-difference Laplacian of Phi at step h. All seven
/// evaluations share one tail expansion, which is harmonic term by term.
inline double laplacian_check(const MonopoleConfig& config, const ImHPoint& zeta, double h)
{
    if (!zeta.is_finite()) throw Error(ErrorCode::InvalidArgument, "evaluation point must be finite");
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be > 0");
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& p : config.explicit_points()) nearest = std::min(nearest, norm(zeta + p));
    if (nearest < 10.0 * h) throw Error(ErrorCode::SingularPoint, "laplacian stencil too close to a monopole");

    const auto tail = detail::make_multipole_tail(config, norm(zeta) + 2.0 * h, 1e-15);
    auto phi = [&](const ImHPoint& z) { return 0.25 * detail::potential_sum(config, z, tail).value; };

    const double center = phi(zeta);
    double acc = -6.0 * center;
    const std::array<ImHPoint, 3> axes{ImHPoint{h, 0, 0}, ImHPoint{0, h, 0}, ImHPoint{0, 0, h}};
    for (const auto& e : axes) acc += phi(zeta + e) + phi(zeta - e);
    return acc / (h * h);
}

}  // namespace ghg
