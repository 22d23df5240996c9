#include "funnel/exact/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace funnel::exact {

namespace {

bool is_digits(std::string_view s)
{
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole)
{
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!is_digits(s)) {
        throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    }
    mpz_class z(std::string(s), 10);
    return negative ? mpz_class(-z) : z;
}

}  // namespace

Rational::Rational(long long value) : value_(mpz_class(std::to_string(value), 10)) {}

Rational::Rational(long long num, long long den)
{
    if (den == 0) {
        throw std::invalid_argument("rational with zero denominator");
    }
    value_ = mpq_class(mpz_class(std::to_string(num), 10), mpz_class(std::to_string(den), 10));
    value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    const std::string_view whole = text;
    if (text.empty()) {
        throw std::invalid_argument("empty rational");
    }

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const mpz_class num = parse_integer(text.substr(0, slash), whole);
        const std::string_view den_text = text.substr(slash + 1);
        if (!is_digits(den_text)) {
            throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
        }
        const mpz_class den(std::string(den_text), 10);
        if (den == 0) {
            throw std::invalid_argument("rational with zero denominator '" + std::string(whole) + "'");
        }
        return Rational(mpq_class(num, den));
    }

    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = text.substr(0, dot);
        const std::string_view frac_part = text.substr(dot + 1);
        bool negative = false;
        if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
            negative = int_part.front() == '-';
            int_part.remove_prefix(1);
        }
        if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !is_digits(int_part)) ||
            (!frac_part.empty() && !is_digits(frac_part))) {
            throw std::invalid_argument("malformed decimal '" + std::string(whole) + "'");
        }
        mpz_class num(std::string(int_part.empty() ? "0" : int_part) + std::string(frac_part), 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
        if (negative) {
            num = -num;
        }
        return Rational(mpq_class(num, den));
    }

    return Rational(mpq_class(parse_integer(text, whole)));
}

Rational Rational::from_double(double value)
{
    if (!std::isfinite(value)) {
        throw std::invalid_argument("non-finite double has no rational value");
    }
    return Rational(mpq_class(value));
}

Rational Rational::pow2(long exponent)
{
    mpz_class p(1);
    const unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), e);
    return exponent >= 0 ? Rational(mpq_class(p)) : Rational(mpq_class(mpz_class(1), p));
}

bool Rational::is_integer() const { return value_.get_den() == 1; }

Rational Rational::abs() const { return Rational(mpq_class(::abs(value_))); }

double Rational::to_double() const { return value_.get_d(); }

double Rational::to_double_down() const
{
    double d = value_.get_d();
    // get_d truncates toward zero; step until the bound holds.
    while (Rational::from_double(d) > *this) {
        d = std::nextafter(d, -INFINITY);
    }
    return d;
}

double Rational::to_double_up() const
{
    double d = value_.get_d();
    while (Rational::from_double(d) < *this) {
        d = std::nextafter(d, INFINITY);
    }
    return d;
}

std::string Rational::str() const
{
    return value_.get_num().get_str(10) + "/" + value_.get_den().get_str(10);
}

Rational& Rational::operator+=(const Rational& rhs)
{
    value_ += rhs.value_;
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs)
{
    value_ -= rhs.value_;
    return *this;
}

Rational& Rational::operator*=(const Rational& rhs)
{
    value_ *= rhs.value_;
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs)
{
    if (sgn(rhs.value_) == 0) {
        throw std::domain_error("rational division by zero");
    }
    value_ /= rhs.value_;
    return *this;
}

}  // namespace funnel::exact
