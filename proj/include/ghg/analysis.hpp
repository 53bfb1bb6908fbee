#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ghg/certified.hpp"
#include "ghg/config.hpp"
#include "ghg/distance.hpp"
#include "ghg/growth.hpp"
#include "ghg/parallel.hpp"
#include "ghg/volume.hpp"

namespace ghg {

struct BoundConstants {
    double P_plus = 4.0 * std::numbers::pi * std::numbers::pi;
    double Q_minus = 0.125;
    double C_minus = std::numbers::pi / 48.0;
    double C_plus = (3.0 + std::numbers::sqrt2) * (3.0 + std::numbers::sqrt2);
    double Q_plus = 0.0;
    double m0 = 0.0;
    double P_minus = 0.0;

    /// Derived constants for a given Q_+ (> 2 C_+); the default is 4 C_+.
    static BoundConstants make(std::optional<double> Q_plus = std::nullopt)
    {
        BoundConstants c;
        c.Q_plus = Q_plus.value_or(4.0 * c.C_plus);
        if (!(c.Q_plus > 2.0 * c.C_plus) || !std::isfinite(c.Q_plus)) {
            throw Error(ErrorCode::InvalidArgument, "Q_plus must exceed 2 C_plus");
        }
        c.m0 = 4.0 * std::numbers::pi * (std::sqrt(c.Q_plus) - std::sqrt(2.0 * c.C_plus)) /
               (std::sqrt(c.Q_plus) - std::sqrt(c.Q_minus));
        c.P_minus = c.m0 * c.C_minus;
        return c;
    }

    void validate() const
    {
        const bool ordered = Q_plus > 2.0 * C_plus && 2.0 * C_plus > Q_minus;
        const bool positive = P_plus > 0.0 && Q_minus > 0.0 && C_minus > 0.0 && C_plus > 0.0 && P_minus > 0.0;
        if (!ordered || !positive || !(m0 > 0.0 && m0 < 4.0 * std::numbers::pi)) {
            throw Error(ErrorCode::InvalidArgument, "inconsistent bound constants");
        }
    }

    /// Bound on upper / lower from the comparison of the two compositions:
    /// (Q_+ / Q_-)^3 P_+ / P_-.
    double sandwich_ratio_bound() const { return std::pow(Q_plus / Q_minus, 3) * P_plus / P_minus; }
};

struct GrowthRow {
    double r = 0.0;
    double R = 0.0;        // tau_1^{-1}(r^2)
    double model = 0.0;    // r^2 R
    double R_upper = 0.0;  // tau_{Q-}^{-1}(r^2)
    double upper = 0.0;    // theta_{P+}(R_upper)
    double R_lower = 0.0;  // tau_{Q+}^{-1}(r^2)
    double lower = 0.0;    // theta_{P-}(R_lower)
    CertifiedValue volume_at_R;  // volume_ball(R_upper)
    double identity_error = 0.0;  // |theta_1(R) - model| / model
};

struct GrowthCurve {
    BoundConstants constants;
    double rtol = 0.0;
    std::vector<GrowthRow> rows;
};

namespace detail {

inline void validate_grid(std::span<const double> grid)
{
    if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "grid must be nonempty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw Error(ErrorCode::InvalidArgument, "grid must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "grid must be increasing");
    }
}

inline constexpr double kVolumeTol = 1e-8;

}  // namespace detail

/// Rows (r, r^2 tau^{-1}(r^2), upper and lower compositions) over the grid.
inline GrowthCurve growth_curve(const MonopoleConfig& config, std::span<const double> r_grid,
                                const BoundConstants& constants, double rtol = 1e-10)
{
    detail::validate_grid(r_grid);
    constants.validate();
    GrowthCurve curve{constants, rtol, {}};
    curve.rows = parallel_map(r_grid.size(), [&](std::size_t i) {
        GrowthRow row;
        row.r = r_grid[i];
        const double y = row.r * row.r;
        row.R = tau_inverse(config, 1.0, y, rtol);
        row.model = y * row.R;
        row.identity_error = std::abs(theta(config, 1.0, row.R).value - row.model) / row.model;
        row.R_upper = tau_inverse(config, constants.Q_minus, y, rtol);
        row.upper = theta(config, constants.P_plus, row.R_upper).value;
        row.R_lower = tau_inverse(config, constants.Q_plus, y, rtol);
        row.lower = theta(config, constants.P_minus, row.R_lower).value;
        row.volume_at_R = volume_ball(config, row.R_upper, detail::kVolumeTol * row.upper);
        return row;
    });
    return curve;
}

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // max |log y - fit| over the window
    std::size_t count = 0;
};

inline constexpr std::size_t kMinFitRows = 8;

/// Least-squares slope of log y against log r over rows with r in [lo, hi].
inline ExponentFit fit_exponent(std::span<const double> r, std::span<const double> y, std::pair<double, double> window)
{
    if (r.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "fit needs matching columns");
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < window.first || r[i] > window.second) continue;
        if (!(r[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "fit needs positive data");
        xs.push_back(std::log(r[i]));
        ys.push_back(std::log(y[i]));
    }
    if (xs.size() < kMinFitRows) throw Error(ErrorCode::InsufficientData, "fewer than 8 rows in the fit window");
    const double n = double(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorCode::InsufficientData, "fit window has no spread in r");
    ExponentFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.count = xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fit.residual = std::max(fit.residual, std::abs(ys[i] - (fit.intercept + fit.slope * xs[i])));
    }
    return fit;
}

inline ExponentFit fit_exponent(const GrowthCurve& curve, std::pair<double, double> window)
{
    std::vector<double> r;
    std::vector<double> y;
    for (const auto& row : curve.rows) {
        r.push_back(row.r);
        y.push_back(row.model);
    }
    return fit_exponent(r, y, window);
}

/// Top three decades of a grid.
inline std::pair<double, double> default_fit_window(std::span<const double> grid)
{
    detail::validate_grid(grid);
    return {std::max(grid.front(), grid.back() / 1e3), grid.back()};
}

struct SandwichOptions {
    std::size_t directions = 0;          // 0 skips the sublevel-measure chain
    double max_sublevel_radius = 1e4;    // rows with larger R_lower skip it too
};

struct SandwichRow {
    double r = 0.0;
    bool ordered = false;          // lower <= model <= upper
    bool volume_upper = false;     // volume_ball(R) <= P_+ R^2 phi(R) at R = R_upper
    bool volume_lower = false;     // volume_ball(R) >= (pi^2/12) R^2 phi(R)
    bool ratio_bounded = false;    // upper / lower <= (Q_+/Q_-)^3 P_+/P_-
    std::optional<double> sublevel_measure;  // m(U_{R,Q_+}) at R = R_lower
    std::optional<bool> sublevel_ok;         // m >= m0, so C_- m R^2 phi >= lower
    bool ok = false;
};

/// The computable halves of the volume sandwich, row by row.
inline std::vector<SandwichRow> sandwich_check(const MonopoleConfig& config, std::span<const double> r_grid,
                                               const BoundConstants& constants, const SandwichOptions& options = {})
{
    const auto curve = growth_curve(config, r_grid, constants);
    const double rel = 4.0 * curve.rtol;
    std::vector<SandwichRow> out;
    out.reserve(curve.rows.size());
    for (const auto& g : curve.rows) {
        SandwichRow row;
        row.r = g.r;
        row.ordered = g.lower <= g.model * (1.0 + rel) && g.model <= g.upper * (1.0 + rel);
        const auto phi = phi_growth(config, g.R_upper);
        const double R2 = g.R_upper * g.R_upper;
        row.volume_upper = certified_le(g.volume_at_R, (constants.P_plus * R2) * phi);
        row.volume_lower = certified_le((4.0 * std::numbers::pi * constants.C_minus * R2) * phi, g.volume_at_R);
        row.ratio_bounded = g.upper <= constants.sandwich_ratio_bound() * g.lower * (1.0 + rel);
        if (options.directions > 0 && g.R_lower <= options.max_sublevel_radius) {
            const double m = sphere_sublevel_measure(config, g.R_lower, constants.Q_plus, 0.0, options.directions);
            row.sublevel_measure = m;
            row.sublevel_ok = m >= constants.m0;
        }
        row.ok = row.ordered && row.volume_upper && row.volume_lower && row.ratio_bounded && row.sublevel_ok.value_or(true);
        out.push_back(row);
    }
    return out;
}

struct RatioRow {
    double r = 0.0;
    double R = 0.0;
    double over_r4 = 0.0;         // model / r^4 = R / r^2
    double over_r3 = 0.0;         // model / r^3 = R / r
    double inv_phi = 0.0;         // 1 / phi(R)
    double sqrt_R_over_phi = 0.0;
    double certified_error = 0.0; // combined error for over_r4 vs inv_phi
};

/// model / r^4 and model / r^3 with their closed forms 1/phi(R) and sqrt(R/phi(R)).
inline std::vector<RatioRow> ratio_limits(const MonopoleConfig& config, std::span<const double> r_grid,
                                          double rtol = 1e-10)
{
    detail::validate_grid(r_grid);
    return parallel_map(r_grid.size(), [&](std::size_t i) {
        RatioRow row;
        row.r = r_grid[i];
        row.R = tau_inverse(config, 1.0, row.r * row.r, rtol);
        row.over_r4 = row.R / (row.r * row.r);
        row.over_r3 = row.R / row.r;
        const auto phi = phi_growth(config, row.R);
        row.inv_phi = 1.0 / phi.value;
        row.sqrt_R_over_phi = std::sqrt(row.R / phi.value);
        // |tau(R) - r^2| <= rtol r^2 at the returned R
        row.certified_error = rtol * 1.01 * row.over_r4 + phi.error / (phi.lo() * phi.lo()) +
                              kRoundingSlack * (row.over_r4 + row.inv_phi);
        return row;
    });
}

struct TaubNutRow {
    double r = 0.0;
    double R_hi = 0.0;  // (tau^{(s)}_{Q-})^{-1}(r^2)
    double hi = 0.0;    // theta^{(s)}_{P+}(R_hi) / r^3
    double lo = 0.0;    // volume_ball_taubnut(2 r / sqrt s) / r^3
};

inline double taubnut_limit_value(double s) { return 8.0 * std::numbers::pi * std::numbers::pi / (3.0 * std::sqrt(s)); }

inline std::vector<TaubNutRow> taubnut_limit(const MonopoleConfig& config, double s, std::span<const double> r_grid,
                                             const BoundConstants& constants, double rtol = 1e-10)
{
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "s must be > 0");
    detail::validate_grid(r_grid);
    constants.validate();
    return parallel_map(r_grid.size(), [&](std::size_t i) {
        TaubNutRow row;
        row.r = r_grid[i];
        const double r3 = row.r * row.r * row.r;
        row.R_hi = tau_s_inverse(config, constants.Q_minus, s, row.r * row.r, rtol);
        row.hi = theta_s(config, constants.P_plus, s, row.R_hi).value / r3;
        const double R_lo = 2.0 * row.r / std::sqrt(s);
        row.lo = volume_ball_taubnut(config, s, R_lo, detail::kVolumeTol * r3).value / r3;
        return row;
    });
}

/// Empirical K with model_a <= K model_b on a shared grid.
inline double comparison_constant(const GrowthCurve& a, const GrowthCurve& b)
{
    if (a.rows.size() != b.rows.size() || a.rows.empty()) {
        throw Error(ErrorCode::InvalidArgument, "curves must share a nonempty grid");
    }
    double k = 0.0;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        if (a.rows[i].r != b.rows[i].r) throw Error(ErrorCode::InvalidArgument, "curves must share a grid");
        k = std::max(k, a.rows[i].model / b.rows[i].model);
    }
    return k;
}

/// Strictly monotone trend of a column over rows with r >= from.
template <typename Row, typename Get>
bool monotone_trend(const std::vector<Row>& rows, double from, Get get, bool increasing)
{
    std::optional<double> prev;
    for (const auto& row : rows) {
        if (row.r < from) continue;
        const double v = get(row);
        if (prev && (increasing ? !(v > *prev) : !(v < *prev))) return false;
        prev = v;
    }
    return true;
}

}  // namespace ghg
