#include "semiflex/load.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace semiflex {

namespace {

std::int64_t parse_digits(std::string_view digits, std::string_view whole_text) {
    if (digits.empty()) {
        throw std::invalid_argument("malformed load '" + std::string(whole_text) + "'");
    }
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec == std::errc::result_out_of_range) {
        throw std::out_of_range("load '" + std::string(whole_text) + "' exceeds 64-bit range");
    }
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw std::invalid_argument("malformed load '" + std::string(whole_text) + "'");
    }
    return v;
}

std::int64_t pow10(std::size_t k, std::string_view text) {
    std::int64_t r = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (r > std::numeric_limits<std::int64_t>::max() / 10) {
            throw std::out_of_range("load '" + std::string(text) + "' has too many decimals");
        }
        r *= 10;
    }
    return r;
}

}  // namespace

Load::Load(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("load with zero denominator");
    value_ = rep(num, den);
}

Load& Load::operator/=(const Load& o) {
    if (o.is_zero()) throw std::domain_error("load division by zero");
    value_ /= o.value_;
    return *this;
}

Load Load::parse(std::string_view text) {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::int64_t num = parse_digits(text.substr(0, slash), text);
        std::int64_t den = parse_digits(text.substr(slash + 1), text);
        if (den == 0) throw std::invalid_argument("load '" + std::string(text) + "' has zero denominator");
        return Load(num, den);
    }
    auto dot = text.find('.');
    if (dot == std::string_view::npos) return Load(parse_digits(text, text));
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if (frac_part.empty()) throw std::invalid_argument("malformed load '" + std::string(text) + "'");
    std::int64_t scale = pow10(frac_part.size(), text);
    std::int64_t whole = int_part.empty() ? 0 : parse_digits(int_part, text);
    std::int64_t frac = parse_digits(frac_part, text);
    if (whole > (std::numeric_limits<std::int64_t>::max() - frac) / scale) {
        throw std::out_of_range("load '" + std::string(text) + "' exceeds 64-bit range");
    }
    return Load(whole * scale + frac, scale);
}

std::int64_t Load::floor() const {
    auto n = value_.numerator();
    auto d = value_.denominator();
    auto q = n / d;
    if ((n % d != 0) && (n < 0)) --q;
    return q;
}

std::int64_t Load::ceil() const {
    auto n = value_.numerator();
    auto d = value_.denominator();
    auto q = n / d;
    if ((n % d != 0) && (n > 0)) ++q;
    return q;
}

double Load::to_double() const {
    return static_cast<double>(value_.numerator()) / static_cast<double>(value_.denominator());
}

std::string Load::to_string() const {
    std::int64_t num = value_.numerator();
    std::int64_t den = value_.denominator();
    if (den == 1) return std::to_string(num);

    std::int64_t rest = den;
    int twos = 0;
    int fives = 0;
    while (rest % 2 == 0) { rest /= 2; ++twos; }
    while (rest % 5 == 0) { rest /= 5; ++fives; }
    int digits = std::max(twos, fives);
    if (rest != 1 || digits > 18) {
        return std::to_string(num) + "/" + std::to_string(den);
    }
    // Scale to den' = 10^digits; num * (10^digits / den) must not overflow.
    __int128 scaled = static_cast<__int128>(num) * (pow10(digits, "") / den);
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    __int128 unit = pow10(digits, "");
    auto whole = static_cast<std::int64_t>(scaled / unit);
    auto frac = static_cast<std::int64_t>(scaled % unit);
    std::string frac_text = std::to_string(frac);
    frac_text.insert(0, static_cast<std::size_t>(digits) - frac_text.size(), '0');
    while (!frac_text.empty() && frac_text.back() == '0') frac_text.pop_back();
    return (negative ? "-" : "") + std::to_string(whole) + "." + frac_text;
}

std::ostream& operator<<(std::ostream& os, const Load& l) { return os << l.to_string(); }

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    if (b <= 0) throw std::domain_error("ceil_div by non-positive divisor");
    std::int64_t q = a / b;
    if (a % b != 0 && a > 0) ++q;
    return q;
}

}  // namespace semiflex
