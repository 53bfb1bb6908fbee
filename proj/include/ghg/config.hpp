#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ghg/certified.hpp"

namespace ghg {

/// Point of Im H = R^3 in Cartesian coordinates.
struct ImHPoint {
    double zeta1 = 0.0;
    double zeta2 = 0.0;
    double zeta3 = 0.0;

    bool is_finite() const
    {
        return std::isfinite(zeta1) && std::isfinite(zeta2) && std::isfinite(zeta3);
    }

    friend bool operator==(const ImHPoint&, const ImHPoint&) = default;
};

inline ImHPoint operator+(const ImHPoint& a, const ImHPoint& b)
{
    return {a.zeta1 + b.zeta1, a.zeta2 + b.zeta2, a.zeta3 + b.zeta3};
}
inline ImHPoint operator-(const ImHPoint& a, const ImHPoint& b)
{
    return {a.zeta1 - b.zeta1, a.zeta2 - b.zeta2, a.zeta3 - b.zeta3};
}
inline ImHPoint operator*(double k, const ImHPoint& a) { return {k * a.zeta1, k * a.zeta2, k * a.zeta3}; }
inline double dot(const ImHPoint& a, const ImHPoint& b)
{
    return a.zeta1 * b.zeta1 + a.zeta2 * b.zeta2 + a.zeta3 * b.zeta3;
}
inline double norm(const ImHPoint& a) { return std::hypot(a.zeta1, a.zeta2, a.zeta3); }

/// Imaginary unit i, the axis on which generated tails are placed.
inline constexpr ImHPoint kAxisI{0.0, 1.0, 0.0};

enum class TailKind { None, PowerLaw, Exponential };

/// Magnitude law |lambda_n| for the indices n >= start_index.
///
/// PowerLaw: c * n^alpha (alpha > 1). Exponential: c * exp(alpha * n) (alpha > 0).
struct TailModel {
    TailKind kind = TailKind::None;
    double alpha = 0.0;
    double scale = 1.0;
    long long start_index = 0;

    static TailModel none() { return {}; }

    /// Magnitude at a real index x (the continuous interpolant of the law).
    double magnitude(double x) const
    {
        switch (kind) {
        case TailKind::PowerLaw: return scale * std::pow(x, alpha);
        case TailKind::Exponential: return scale * std::exp(alpha * x);
        case TailKind::None: break;
        }
        return 0.0;
    }

    /// Largest integer n with magnitude(n) <= R, or -1 if none (n ranges over n >= 0
    /// for the law itself; callers intersect with [start_index, inf)).
    double last_index_within(double R) const
    {
        double k = -1.0;
        switch (kind) {
        case TailKind::PowerLaw:
            if (R < 0.0) return -1.0;
            k = std::floor(std::pow(R / scale, 1.0 / alpha));
            break;
        case TailKind::Exponential:
            if (R < scale) return -1.0;
            k = std::floor(std::log(R / scale) / alpha);
            break;
        case TailKind::None: return -1.0;
        }
        if (!std::isfinite(k)) return k;
        // The closed-form inverse can be off by one after rounding; correct it
        // against the forward law while indices are exactly representable.
        if (k < 9.0e15) {
            while (k >= 0.0 && magnitude(k) > R) k -= 1.0;
            while (magnitude(k + 1.0) <= R) k += 1.0;
        }
        return k;
    }
};

/// A monopole configuration lambda: an explicit, magnitude-sorted prefix that
/// starts at the origin, followed by an analytic tail on the i-axis.
class MonopoleConfig {
public:
    MonopoleConfig(std::vector<ImHPoint> explicit_points, TailModel tail, std::string family = "finite")
        : points_(std::move(explicit_points)), tail_(tail), family_(std::move(family))
    {
        if (points_.empty()) throw Error(ErrorCode::InvalidArgument, "configuration needs at least one point");
        for (const auto& p : points_) {
            if (!p.is_finite()) throw Error(ErrorCode::InvalidArgument, "non-finite monopole coordinate");
        }
        std::stable_sort(points_.begin(), points_.end(),
                         [](const ImHPoint& a, const ImHPoint& b) { return norm(a) < norm(b); });
        if (norm(points_.front()) != 0.0) {
            throw Error(ErrorCode::InvalidArgument, "configuration must contain the origin (lambda_0 = 0)");
        }
        magnitudes_.reserve(points_.size());
        for (const auto& p : points_) magnitudes_.push_back(norm(p));

        switch (tail_.kind) {
        case TailKind::None: break;
        case TailKind::PowerLaw:
            if (!(tail_.alpha > 1.0)) {
                throw Error(ErrorCode::InvalidArgument, "power-law tail needs alpha > 1 (inadmissible otherwise)");
            }
            break;
        case TailKind::Exponential:
            if (!(tail_.alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "exponential tail needs alpha > 0");
            break;
        }
        if (tail_.kind != TailKind::None) {
            if (!(tail_.scale > 0.0) || !std::isfinite(tail_.scale)) {
                throw Error(ErrorCode::InvalidArgument, "tail scale must be positive and finite");
            }
            if (tail_.start_index < 1) throw Error(ErrorCode::InvalidArgument, "tail start index must be >= 1");
            if (!(tail_.magnitude(static_cast<double>(tail_.start_index)) >= magnitudes_.back())) {
                throw Error(ErrorCode::InvalidArgument, "tail magnitudes must not undercut explicit points");
            }
            auto table = std::make_shared<std::vector<double>>();
            table->reserve(kTailTableSize);
            for (std::size_t k = 0; k < kTailTableSize; ++k) {
                const double m = tail_.magnitude(static_cast<double>(tail_.start_index) + double(k));
                if (!std::isfinite(m)) break;
                table->push_back(m);
            }
            tail_table_ = std::move(table);
        }
    }

    // Tail magnitudes are tabulated for the first indices past start_index.
    static constexpr std::size_t kTailTableSize = std::size_t{1} << 16;

    std::span<const ImHPoint> explicit_points() const { return points_; }
    std::span<const double> magnitudes() const { return magnitudes_; }
    const TailModel& tail() const { return tail_; }
    bool has_tail() const { return tail_.kind != TailKind::None; }
    const std::string& family() const { return family_; }
    double max_explicit_magnitude() const { return magnitudes_.back(); }

    /// |lambda_n| for a tail index n >= start_index (table lookup when available).
    double tail_magnitude(double n) const
    {
        const double k = n - static_cast<double>(tail_.start_index);
        if (tail_table_ && k >= 0.0 && k < static_cast<double>(tail_table_->size())) {
            return (*tail_table_)[static_cast<std::size_t>(k)];
        }
        return tail_.magnitude(n);
    }

    /// lambda_n for a tail index n >= start_index.
    ImHPoint tail_point(double n) const { return tail_magnitude(n) * kAxisI; }

private:
    std::vector<ImHPoint> points_;
    std::vector<double> magnitudes_;
    TailModel tail_;
    std::string family_;
    std::shared_ptr<const std::vector<double>> tail_table_;
};

inline constexpr std::size_t kDefaultExplicitCount = 64;

/// Points 0 and (c n^alpha) i for n = 1..explicit_count-1, with a power-law tail.
inline MonopoleConfig make_power_law(double alpha, double scale, std::size_t explicit_count = kDefaultExplicitCount)
{
    if (!(alpha > 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "power_law needs alpha > 1: sum 1/(1+|lambda_n|) diverges otherwise");
    }
    if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale must be > 0");
    if (explicit_count < 1) throw Error(ErrorCode::InvalidArgument, "explicit_count must be >= 1");
    TailModel tail{TailKind::PowerLaw, alpha, scale, static_cast<long long>(explicit_count)};
    std::vector<ImHPoint> points;
    points.reserve(explicit_count);
    points.push_back({});
    for (std::size_t n = 1; n < explicit_count; ++n) points.push_back(tail.magnitude(double(n)) * kAxisI);
    return MonopoleConfig(std::move(points), tail, "power_law");
}

/// Points 0 and (c e^{alpha n}) i for n = 1..explicit_count-1, with an exponential tail.
inline MonopoleConfig make_exponential(double alpha, double scale, std::size_t explicit_count = kDefaultExplicitCount)
{
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "exponential needs alpha > 0");
    if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale must be > 0");
    if (explicit_count < 1) throw Error(ErrorCode::InvalidArgument, "explicit_count must be >= 1");
    TailModel tail{TailKind::Exponential, alpha, scale, static_cast<long long>(explicit_count)};
    if (!std::isfinite(tail.magnitude(double(explicit_count) + 64.0))) {
        throw Error(ErrorCode::InvalidArgument, "exponential magnitudes overflow; lower alpha or explicit_count");
    }
    std::vector<ImHPoint> points;
    points.reserve(explicit_count);
    points.push_back({});
    for (std::size_t n = 1; n < explicit_count; ++n) points.push_back(tail.magnitude(double(n)) * kAxisI);
    return MonopoleConfig(std::move(points), tail, "exponential");
}

/// The configuration k*lambda (every point and the tail scale multiplied by k > 0).
inline MonopoleConfig scaled(const MonopoleConfig& config, double k)
{
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorCode::InvalidArgument, "scale factor must be > 0");
    std::vector<ImHPoint> points;
    points.reserve(config.explicit_points().size());
    for (const auto& p : config.explicit_points()) points.push_back(k * p);
    TailModel tail = config.tail();
    if (tail.kind != TailKind::None) tail.scale *= k;
    return MonopoleConfig(std::move(points), tail, config.family());
}

inline MonopoleConfig make_finite(std::vector<ImHPoint> points)
{
    if (points.empty()) throw Error(ErrorCode::InvalidArgument, "finite configuration needs at least one point");
    const bool has_origin = std::any_of(points.begin(), points.end(), [](const ImHPoint& p) { return norm(p) == 0.0; });
    if (!has_origin) throw Error(ErrorCode::InvalidArgument, "missing origin normalization (lambda_0 = 0)");
    return MonopoleConfig(std::move(points), TailModel::none(), "finite");
}

/// Number of indices with |lambda_n| <= R. Exact for every tail model.
inline CertifiedValue count_inside(const MonopoleConfig& config, double R)
{
    if (!(R >= 0.0)) throw Error(ErrorCode::InvalidArgument, "count_inside needs R >= 0");
    const auto mags = config.magnitudes();
    double count = static_cast<double>(std::upper_bound(mags.begin(), mags.end(), R) - mags.begin());
    if (config.has_tail()) {
        const double last = config.tail().last_index_within(R);
        const double first = static_cast<double>(config.tail().start_index);
        if (last >= first) count += last - first + 1.0;
    }
    return {count, 0.0};
}

}  // namespace ghg
