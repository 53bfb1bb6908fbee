#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "ghg/certified.hpp"
#include "ghg/config.hpp"

namespace ghg {

/// Neumaier compensated summation that also tracks sum |x_i| for rounding bounds.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
        abs_ += std::abs(x);
    }

    double value() const { return sum_ + comp_; }
    double abs_sum() const { return abs_; }
    double rounding_bound() const { return kRoundingSlack * abs_; }
    CertifiedValue certified() const { return {value(), rounding_bound()}; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
    double abs_ = 0.0;
};

/// sum_{n >= first} (unit / n)^q for q > 1 and first >= 1 (unit = first keeps
/// large exponents in range).
///
/// A short explicit head is followed by Euler-Maclaurin at M with four Bernoulli
/// corrections; x^{-q} is completely monotone, so the remainder is bounded by the
/// first omitted correction (doubled here).
inline CertifiedValue hurwitz_tail(double q, double first, double unit = 1.0)
{
    if (!(q > 1.0)) throw Error(ErrorCode::InvalidArgument, "hurwitz_tail needs q > 1");
    if (!(first >= 1.0)) throw Error(ErrorCode::InvalidArgument, "hurwitz_tail needs first >= 1");

    CompensatedSum head;
    const double m = std::max(first, std::ceil(q) + 12.0);
    for (double n = first; n < m; n += 1.0) head.add(std::pow(unit / n, q));

    static constexpr std::array<double, 6> kBernoulli = {1.0 / 6.0,   -1.0 / 30.0, 1.0 / 42.0,
                                                        -1.0 / 30.0, 5.0 / 66.0,  -691.0 / 2730.0};
    static constexpr std::array<double, 6> kFactorial = {2.0, 24.0, 720.0, 40320.0, 3628800.0, 479001600.0};

    CompensatedSum em;
    const double fm = std::pow(unit / m, q);
    em.add(fm * m / (q - 1.0));
    em.add(0.5 * fm);

    // rising factorial (q)_{2k-1} times (unit/m)^q m^{1-2k}
    double rising = q;
    double power = fm / m;
    double next_term = 0.0;
    for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
        const double term = kBernoulli[k] / kFactorial[k] * rising * power;
        if (k < 4) {
            em.add(term);
        } else {
            next_term = std::max(next_term, std::abs(term));
        }
        const double j = 2.0 * double(k) + 1.0;
        rising *= (q + j) * (q + j + 1.0);
        power /= m * m;
    }

    const double value = head.value() + em.value();
    const double error = 2.0 * next_term + head.rounding_bound() + em.rounding_bound() + kRoundingSlack * value;
    return {value, error};
}

/// sum_{n >= first} |lambda_n|^{-p} over a tail law.
inline CertifiedValue power_sum_tail(const TailModel& tail, double p, double first)
{
    switch (tail.kind) {
    case TailKind::PowerLaw: {
        const double factor = std::pow(tail.scale, -p);
        return factor * hurwitz_tail(tail.alpha * p, first);
    }
    case TailKind::Exponential: {
        // geometric series: c^{-p} e^{-alpha p first} / (1 - e^{-alpha p})
        const double rate = tail.alpha * p;
        const double value = std::pow(tail.scale, -p) * std::exp(-rate * first) / (-std::expm1(-rate));
        return {value, 4.0 * kRoundingSlack * value};
    }
    case TailKind::None: break;
    }
    return {};
}

/// sum_{n >= first} (|lambda_first| / |lambda_n|)^p, bounded for every p >= 1.
inline CertifiedValue normalized_power_sum_tail(const TailModel& tail, double p, double first)
{
    switch (tail.kind) {
    case TailKind::PowerLaw: return hurwitz_tail(tail.alpha * p, first, first);
    case TailKind::Exponential: {
        const double value = 1.0 / (-std::expm1(-tail.alpha * p));
        return {value, 4.0 * kRoundingSlack * value};
    }
    case TailKind::None: break;
    }
    return {};
}

/// A positive decreasing summand g on [x0, inf) described by its tail integral
/// F(x) = int_x^inf g, its first two derivatives, and the points where g'''
/// changes sign (g'' is monotone between consecutive entries). NaN entries are unused.
template <typename F, typename D1, typename D2>
struct SmoothTail {
    F integral;
    D1 d1;
    D2 d2;
    std::array<double, 2> third_zeros;
};

/// Total variation of g'' over [x0, inf), using g''(inf) = 0.
template <typename T>
double second_derivative_variation(const T& law, double x0)
{
    double tv = 0.0;
    double prev = law.d2(x0);
    for (double z : law.third_zeros) {
        if (!(z > x0) || !std::isfinite(z)) continue;
        const double v = law.d2(z);
        tv += std::abs(v - prev);
        prev = v;
    }
    return tv + std::abs(prev);
}

/// Certified sum_{n >= first} g(n).
///
/// After an explicit head, the rest is the midpoint rule over [a - 1/2, inf) with
/// its first correction g'(a - 1/2)/24. Each cell's midpoint defect lies in
/// [min g'', max g''] / 24 over the cell, so the remainder is at most TV(g'')/24.
/// The head grows geometrically until the bound meets tol.
template <typename Term, typename T>
CertifiedValue smooth_tail_sum(const Term& term, const T& law, double first, double tol,
                               double max_explicit = double(1 << 24))
{
    CompensatedSum head;
    double start = first;
    double step = 64.0;
    for (;;) {
        const double x0 = start - 0.5;
        const double integral = law.integral(x0);
        const double correction = law.d1(x0) / 24.0;
        const double remainder = second_derivative_variation(law, x0) / 24.0;
        const double value = integral + correction;
        const double error =
            remainder + head.rounding_bound() + kRoundingSlack * (std::abs(integral) + std::abs(value));
        if (error <= tol) return {head.value() + value, error};
        if (start - first > max_explicit) {
            throw Error(ErrorCode::TolUnreachable, "tail sum cannot reach the requested tolerance");
        }
        const double stop = start + step;
        for (double n = start; n < stop; n += 1.0) head.add(term(n));
        start = stop;
        step *= 2.0;
    }
}

}  // namespace ghg
