#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace funnel::exact {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Backed by GMP's mpq_t; every operation canonicalizes, so two equal values
/// always share the same numerator/denominator representation.
class Rational {
public:
    Rational() = default;
    Rational(long long value);  // NOLINT(google-explicit-constructor)
    Rational(long long num, long long den);
    explicit Rational(mpq_class value);

    /// Parses "p/q", a signed integer, or a finite decimal such as "-0.125".
    /// Throws std::invalid_argument on malformed input or a zero denominator.
    static Rational parse(std::string_view text);

    /// Exact value of a finite double (every double is a dyadic rational).
    static Rational from_double(double value);

    /// 2^exponent for any integer exponent.
    static Rational pow2(long exponent);

    [[nodiscard]] const mpq_class& raw() const noexcept { return value_; }
    [[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
    [[nodiscard]] mpz_class denominator() const { return value_.get_den(); }

    [[nodiscard]] bool is_integer() const;
    [[nodiscard]] int sign() const noexcept { return sgn(value_); }
    [[nodiscard]] Rational abs() const;

    /// Nearest double (round-to-nearest as done by GMP's conversion).
    [[nodiscard]] double to_double() const;
    /// Largest double not exceeding the value / smallest double not below it.
    [[nodiscard]] double to_double_down() const;
    [[nodiscard]] double to_double_up() const;

    /// Always "p/q", including integers ("3/1") and zero ("0/1").
    [[nodiscard]] std::string str() const;

    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
    friend Rational operator-(const Rational& x) { return Rational(mpq_class(-x.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.str(); }

private:
    mpq_class value_{0};
};

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace funnel::exact
