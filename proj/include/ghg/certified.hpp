#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ghg {

enum class ErrorCode {
    InvalidArgument,
    SingularPoint,
    TolUnreachable,
    NonConvergence,
    QuadratureFailure,
    InsufficientData,
};

inline const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::TolUnreachable: return "TolUnreachable";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::InsufficientData: return "InsufficientData";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// A real number together with a guaranteed absolute error radius.
///
/// The represented quantity lies in [value - error, value + error]. Arithmetic
/// propagates radii conservatively (first order plus the product of radii for
/// multiplication).
struct CertifiedValue {
    double value = 0.0;
    double error = 0.0;

    double lo() const { return value - error; }
    double hi() const { return value + error; }
    bool contains(double x) const { return std::abs(x - value) <= error; }

    static CertifiedValue from_bounds(double lower, double upper)
    {
        return {0.5 * (lower + upper), 0.5 * (upper - lower)};
    }

    CertifiedValue& operator+=(const CertifiedValue& other)
    {
        value += other.value;
        error += other.error;
        return *this;
    }
};

inline CertifiedValue operator+(CertifiedValue a, const CertifiedValue& b) { return a += b; }

inline CertifiedValue operator-(const CertifiedValue& a, const CertifiedValue& b)
{
    return {a.value - b.value, a.error + b.error};
}

inline CertifiedValue operator*(double k, const CertifiedValue& a)
{
    return {k * a.value, std::abs(k) * a.error};
}

inline CertifiedValue operator*(const CertifiedValue& a, double k) { return k * a; }

inline CertifiedValue operator*(const CertifiedValue& a, const CertifiedValue& b)
{
    return {a.value * b.value,
            std::abs(a.value) * b.error + std::abs(b.value) * a.error + a.error * b.error};
}

/// True when the intervals of a and b intersect.
inline bool overlaps(const CertifiedValue& a, const CertifiedValue& b)
{
    return a.lo() <= b.hi() && b.lo() <= a.hi();
}

/// a <= b is not refuted by the certified intervals.
inline bool certified_le(const CertifiedValue& a, const CertifiedValue& b, double slack = 0.0)
{
    return a.lo() <= b.hi() + slack;
}

// Relative slack charged for compensated summation and libm rounding.
inline constexpr double kRoundingSlack = 16.0 * std::numeric_limits<double>::epsilon();

}  // namespace ghg
