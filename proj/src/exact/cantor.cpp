#include "funnel/exact/cantor.hpp"

#include <bit>
#include <stdexcept>

namespace funnel::exact {

DyadicIndex dyadic_index_decompose(std::uint64_t i)
{
    if (i == 0) {
        throw std::invalid_argument("dyadic index must be positive");
    }
    const std::uint64_t n = static_cast<std::uint64_t>(std::bit_width(i)) - 1;
    return {n, i - (std::uint64_t{1} << n)};
}

Rational example_center(std::uint64_t i)
{
    const auto [n, k] = dyadic_index_decompose(i);
    return Rational(mpq_class(mpz_class(std::to_string(k), 10))) * Rational::pow2(-static_cast<long>(n));
}

Rational example_radius(std::uint64_t i)
{
    if (i == 0) {
        throw std::invalid_argument("example radius index must be positive");
    }
    return Rational::pow2(-static_cast<long>(i) - 2);
}

IntervalUnion removed_intervals(std::uint64_t n)
{
    IntervalUnion o;
    for (std::uint64_t i = 1; i <= n; ++i) {
        const Rational c = example_center(i);
        const Rational r = example_radius(i);
        o.insert(OpenInterval(c - r, c + r));
    }
    return o;
}

Rational tail_length_bound(std::uint64_t n) { return Rational::pow2(-static_cast<long>(n) - 1); }

MeasureEnclosure k_measure_enclosure(std::uint64_t n)
{
    const Rational upper = Rational(1) - removed_intervals(n).clipped(0, 1).measure();
    return {upper - tail_length_bound(n), upper};
}

std::string to_string(KVerdict v)
{
    switch (v) {
    case KVerdict::certified:
        return "certified";
    case KVerdict::refuted:
        return "refuted";
    case KVerdict::inconclusive:
        return "inconclusive";
    }
    return "inconclusive";
}

namespace {

// |x - x_i| < r_i, i.e. x lies in the i-th removed interval.
bool inside_ball(const Rational& x, std::uint64_t i)
{
    return (x - example_center(i)).abs() < example_radius(i);
}

}  // namespace

KCertificate certify_point_in_k(const Rational& x, std::uint64_t n, std::uint64_t explicit_limit)
{
    if (x < Rational(0) || Rational(1) < x) {
        throw std::invalid_argument("certify_point_in_k needs x in [0, 1], got " + x.str());
    }
    KCertificate cert;

    for (std::uint64_t i = 1; i <= n; ++i) {
        ++cert.explicit_checks;
        if (inside_ball(x, i)) {
            cert.verdict = KVerdict::refuted;
            cert.witness_index = i;
            cert.detail = "x lies in removed interval " + std::to_string(i);
            return cert;
        }
    }

    const mpz_class q = x.denominator();
    const bool dyadic = mpz_popcount(q.get_mpz_t()) == 1;
    if (dyadic && x < Rational(1)) {
        // x = k / 2^m in lowest terms is the center of ball 2^m + k.
        cert.verdict = KVerdict::refuted;
        const std::size_t m = mpz_sizeinbase(q.get_mpz_t(), 2) - 1;
        if (m < 63) {
            const mpz_class index = (mpz_class(1) << m) + x.numerator();
            if (index.fits_ulong_p()) {
                cert.witness_index = index.get_ui();
            }
        }
        cert.detail = "x is the dyadic center " + x.str();
        return cert;
    }

    // From here x is not a center, so |x - k/2^l| >= 1/(q 2^l) at every level
    // l. That beats 2^(-2^l-2) once 2^l + 2 - l >= bits(q), and 2^l - l is
    // nondecreasing, so every level from there on is settled.
    const std::uint64_t bits = mpz_sizeinbase(q.get_mpz_t(), 2);
    std::uint64_t level = 0;
    while (level < 63 && (std::uint64_t{1} << level) + 2 - level < bits) {
        ++level;
    }
    if (level >= 63) {
        cert.detail = "denominator too large for the tail bound";
        return cert;
    }
    const std::uint64_t first_analytic = std::uint64_t{1} << level;
    if (first_analytic > n + 1 && first_analytic - 1 - n > explicit_limit) {
        cert.detail = "explicit tail check exceeds limit";
        return cert;
    }
    for (std::uint64_t i = n + 1; i < first_analytic; ++i) {
        ++cert.explicit_checks;
        if (inside_ball(x, i)) {
            cert.verdict = KVerdict::refuted;
            cert.witness_index = i;
            cert.detail = "x lies in removed interval " + std::to_string(i);
            return cert;
        }
    }
    cert.verdict = KVerdict::certified;
    cert.analytic_level = level;
    cert.detail = "explicit checks up to index " + std::to_string(std::max(n, first_analytic - 1)) +
                  ", separation bound from level " + std::to_string(level);
    return cert;
}

}  // namespace funnel::exact
