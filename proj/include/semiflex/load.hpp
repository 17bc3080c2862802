#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace semiflex {

/// Exact, non-negative-by-convention CPU quantity (vCPUs).
///
/// Backed by a reduced 64-bit rational. Solver logic compares Loads only
/// through this type; there is no floating-point path except `to_double`,
/// which exists for reporting.
class Load {
public:
    using rep = boost::rational<std::int64_t>;

    constexpr Load() = default;
    Load(std::int64_t whole) : value_(whole) {}  // NOLINT(google-explicit-constructor)
    Load(std::int64_t num, std::int64_t den);
    explicit Load(rep r) : value_(r) {}

    /// Parses "12", "7.2", "0.125" or "2/3". Decimal strings are read exactly.
    static Load parse(std::string_view text);

    std::int64_t numerator() const { return value_.numerator(); }
    std::int64_t denominator() const { return value_.denominator(); }
    const rep& rational() const { return value_; }

    bool is_zero() const { return value_.numerator() == 0; }
    bool is_positive() const { return value_.numerator() > 0; }
    bool is_integer() const { return value_.denominator() == 1; }

    std::int64_t floor() const;
    std::int64_t ceil() const;
    double to_double() const;

    /// Terminating decimal when the denominator has only factors 2 and 5,
    /// otherwise "num/den". `parse(to_string(x)) == x` always holds.
    std::string to_string() const;

    Load& operator+=(const Load& o) { value_ += o.value_; return *this; }
    Load& operator-=(const Load& o) { value_ -= o.value_; return *this; }
    Load& operator*=(const Load& o) { value_ *= o.value_; return *this; }
    Load& operator/=(const Load& o);

    friend Load operator+(Load a, const Load& b) { return a += b; }
    friend Load operator-(Load a, const Load& b) { return a -= b; }
    friend Load operator*(Load a, const Load& b) { return a *= b; }
    friend Load operator/(Load a, const Load& b) { return a /= b; }

    friend bool operator==(const Load& a, const Load& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Load& a, const Load& b) {
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (b.value_ < a.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    rep value_{0};
};

std::ostream& operator<<(std::ostream& os, const Load& l);

inline Load min(const Load& a, const Load& b) { return b < a ? b : a; }
inline Load max(const Load& a, const Load& b) { return a < b ? b : a; }

/// Ceiling of a/b for positive b.
std::int64_t ceil_div(std::int64_t a, std::int64_t b);

}  // namespace semiflex
