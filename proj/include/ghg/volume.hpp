#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ghg/certified.hpp"
#include "ghg/config.hpp"
#include "ghg/growth.hpp"
#include "ghg/potential.hpp"
#include "ghg/quadrature.hpp"
#include "ghg/summation.hpp"

namespace ghg {

/// The cone B_{R,U} = {t w : 0 <= t <= R, w in U} over a cap U of S^2
/// (the full sphere when angle = pi).
struct SectorSpec {
    double R = 1.0;
    ImHPoint axis = kAxisI;
    double angle = std::numbers::pi;

    static SectorSpec full(double R) { return {R, kAxisI, std::numbers::pi}; }
    static SectorSpec cap(double R, const ImHPoint& axis, double angle) { return {R, axis, angle}; }

    bool full_sphere() const { return angle >= std::numbers::pi; }
    double measure() const { return full_sphere() ? 4.0 * std::numbers::pi : 2.0 * std::numbers::pi * (1.0 - std::cos(angle)); }

    void validate() const
    {
        if (!(R > 0.0) || !std::isfinite(R)) throw Error(ErrorCode::InvalidArgument, "sector radius must be > 0");
        if (!(angle > 0.0) || !(angle <= std::numbers::pi)) {
            throw Error(ErrorCode::InvalidArgument, "cap angle must lie in (0, pi]");
        }
        if (!axis.is_finite() || !(norm(axis) > 0.0)) throw Error(ErrorCode::InvalidArgument, "cap axis must be nonzero");
    }
};

inline constexpr double kVolumeLowerConst = std::numbers::pi / 48.0;

/// vol(mu^{-1}(B_R)) = (pi/4) sum_n ball_integral(|lambda_n|, R). Tail points inside
/// the ball are summed one by one; the rest is (4 pi R^3 / 3) S_1.
inline CertifiedValue volume_ball(const MonopoleConfig& config, double R, double tol)
{
    if (!(R > 0.0) || !std::isfinite(R)) throw Error(ErrorCode::InvalidArgument, "ball radius must be > 0");
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    CompensatedSum sum;
    for (double m : config.magnitudes()) sum.add(ball_integral(m, R));
    CertifiedValue out{};
    if (config.has_tail()) {
        const auto& tail = config.tail();
        const double start = static_cast<double>(tail.start_index);
        const double first_out = detail::first_tail_index_beyond(config, R);
        for (double n = start; n < first_out; n += 1.0) sum.add(ball_integral(config.tail_magnitude(n), R));
        out = (4.0 * std::numbers::pi / 3.0 * R * R * R) * power_sum_tail(tail, 1.0, first_out);
    }
    out += sum.certified();
    return (std::numbers::pi / 4.0) * out;
}

/// Adds the flat contribution (pi s / 4) m(B_R) = pi^2 s R^3 / 3 of the Taub-NUT shift.
inline CertifiedValue volume_ball_taubnut(const MonopoleConfig& config, double s, double R, double tol)
{
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "s must be > 0");
    auto out = volume_ball(config, R, tol);
    const double flat = std::numbers::pi * std::numbers::pi * s * R * R * R / 3.0;
    out.value += flat;
    out.error += kRoundingSlack * flat;
    return out;
}

/// C_- m(U) R^2 phi(R) with C_- = pi/48.
inline CertifiedValue sector_volume_lower_bound(const MonopoleConfig& config, const SectorSpec& sector, double tol)
{
    sector.validate();
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    const double factor = kVolumeLowerConst * sector.measure() * sector.R * sector.R;
    return factor * phi_growth(config, sector.R, tol / factor);
}

namespace detail {

/// Arithmetic-geometric mean; 2 pi / agm(sqrt(A + B), sqrt(A - B)) = int_0^{2 pi} dphi / sqrt(A - B cos phi).
inline double agm(double a, double b)
{
    for (int i = 0; i < 64 && std::abs(a - b) > 1e-15 * a; ++i) {
        const double next = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = next;
    }
    return 0.5 * (a + b);
}

/// Legendre P_0..P_n at x.
inline std::vector<double> legendre_table(int n, double x)
{
    std::vector<double> p(static_cast<std::size_t>(n) + 1);
    p[0] = 1.0;
    if (n >= 1) p[1] = x;
    for (int k = 2; k <= n; ++k) p[k] = ((2.0 * k - 1.0) * x * p[k - 1] - (k - 1.0) * p[k - 2]) / k;
    return p;
}

/// 2 pi int_{c0}^1 P_k for k = 0..n, i.e. the integral of P_k(<w, axis>) over the cap.
inline std::vector<double> cap_moments(int n, double c0)
{
    const auto p = legendre_table(n + 1, c0);
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    out[0] = 2.0 * std::numbers::pi * (1.0 - c0);
    for (int k = 1; k <= n; ++k) out[k] = 2.0 * std::numbers::pi * (p[k - 1] - p[k + 1]) / (2.0 * k + 1.0);
    return out;
}

/// int over the sector of 1/|zeta - p| for |p| = d >= 2R, by the exterior expansion
/// integrated termwise (Funk-Hecke on the cap). cos_p = <axis, p/|p|>.
inline CertifiedValue far_sector_integral(double d, double cos_p, const SectorSpec& sector, double c0)
{
    const double R = sector.R;
    const double rho = R / d;
    const double bulk = sector.measure() * R * R * R / 3.0;
    // rho <= 1/2, so the remainder 2 bulk rho^K / d drops below 1e-17 bulk / d by K = 58
    const int order = rho > 0.0 ? std::clamp(int(std::ceil(std::log(5e-18) / std::log(rho))), 1, 58) : 1;
    const auto moments = cap_moments(order, c0);
    const auto pk = legendre_table(order, cos_p);
    CompensatedSum sum;
    double rho_k = 1.0;
    for (int k = 0; k < order; ++k) {
        sum.add(moments[k] * pk[k] * R * R * R / (k + 3.0) * rho_k / d);
        rho_k *= rho;
    }
    return {sum.value(), 2.0 * bulk * rho_k / d + sum.rounding_bound()};
}

/// Same integral for |p| = d < 2R by nested adaptive quadrature in (theta, r); the
/// azimuth is done in closed form.
inline QuadratureResult near_sector_integral(double d, double cos_p, const SectorSpec& sector, double tol)
{
    const double R = sector.R;
    const double theta0 = sector.angle;
    if (d == 0.0) return {sector.measure() * R * R / 2.0, 0.0, 0};
    const double theta_p = std::acos(std::clamp(cos_p, -1.0, 1.0));
    const double inner_tol = 0.1 * tol / theta0;

    QuadratureResult total;
    auto inner = [&](double theta) {
        const double st = std::sin(theta);
        if (st == 0.0) return 0.0;
        const double sm = std::sin(0.5 * (theta - theta_p));
        const double sp = std::sin(0.5 * (theta + theta_p));
        auto f = [&](double r) {
            const double diff = (r - d) * (r - d);
            const double lo = diff + 4.0 * r * d * sm * sm;  // A - B
            const double hi = diff + 4.0 * r * d * sp * sp;  // A + B
            if (lo <= 0.0) return 0.0;
            return r * r * 2.0 * std::numbers::pi / agm(std::sqrt(hi), std::sqrt(lo));
        };
        std::vector<double> cuts;
        if (d < R) cuts.push_back(d);
        const auto res = integrate_adaptive(f, 0.0, R, inner_tol, 1e-12, cuts);
        total.evaluations += res.evaluations;
        return st * res.value;
    };
    std::vector<double> cuts;
    if (theta_p > 0.0 && theta_p < theta0) cuts.push_back(theta_p);
    const auto outer = integrate_adaptive(inner, 0.0, theta0, 0.5 * tol, 1e-12, cuts);
    return {outer.value, outer.error + 0.1 * tol, outer.evaluations + total.evaluations};
}

}  // namespace detail

/// vol(mu^{-1}(B_{R,U})) = (pi/4) sum_n int_{B_{R,U}} dzeta / |zeta + lambda_n|.
/// Monopoles at distance >= 2R use the exterior Legendre expansion, nearer ones
/// nested quadrature. The full sphere reduces to volume_ball.
inline CertifiedValue sector_volume(const MonopoleConfig& config, const SectorSpec& sector, double tol)
{
    sector.validate();
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    if (sector.full_sphere()) return volume_ball(config, sector.R, tol);

    const double R = sector.R;
    const ImHPoint a = (1.0 / norm(sector.axis)) * sector.axis;
    const double c0 = std::cos(sector.angle);
    const double sum_tol = tol * 4.0 / std::numbers::pi;
    const double bulk = sector.measure() * R * R * R / 3.0;

    // near monopoles p = -lambda_n with |p| < 2R
    struct Near {
        double d;
        double cos_p;
    };
    std::vector<Near> near;
    CertifiedValue total{};
    auto place = [&](const ImHPoint& lambda) {
        const double d = norm(lambda);
        const double cos_p = d > 0.0 ? -dot(a, lambda) / d : 1.0;
        if (d >= 2.0 * R) {
            total += detail::far_sector_integral(d, cos_p, sector, c0);
        } else {
            near.push_back({d, cos_p});
        }
    };
    for (const auto& p : config.explicit_points()) place(p);

    if (config.has_tail()) {
        const auto tail = detail::make_multipole_tail(config, R, 0.5 * sum_tol / bulk);
        const double start = static_cast<double>(config.tail().start_index);
        for (double n = start; n < tail.cutoff; n += 1.0) place(config.tail_point(n));
        // tail points sit at -m i, so <axis, p/|p|> = -a_2 for all of them
        const auto moments = detail::cap_moments(tail.order, c0);
        const auto pk = detail::legendre_table(tail.order, -a.zeta2);
        const double rho = R / tail.lead;
        CompensatedSum sum;
        double coefficient_error = 0.0;
        double rho_k = 1.0;
        for (int k = 0; k < tail.order; ++k) {
            const double w = moments[k] * pk[k] * R * R * R / (k + 3.0) * rho_k;
            sum.add(w * tail.sums[k].value);
            coefficient_error += std::abs(w) * tail.sums[k].error;
            rho_k *= rho;
        }
        const double remainder = 2.0 * rho_k * tail.sums[tail.order].hi() * bulk;
        total += CertifiedValue{sum.value() / tail.lead,
                                (remainder + coefficient_error + sum.rounding_bound()) / tail.lead};
    }

    const double each_tol = 0.5 * sum_tol / std::max<std::size_t>(1, near.size());
    for (const auto& n : near) {
        const auto res = detail::near_sector_integral(n.d, n.cos_p, sector, each_tol);
        total += CertifiedValue{res.value, res.error};
    }
    return (std::numbers::pi / 4.0) * total;
}

}  // namespace ghg
