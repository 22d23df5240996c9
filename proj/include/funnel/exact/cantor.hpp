#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "funnel/exact/interval_union.hpp"
#include "funnel/exact/rational.hpp"

// The dense-dyadic ball family on the unit segment: index i = 2^n + k gives
// the center x_i = k / 2^n and the radius r_i = 2^(-i-2). The open set O is
// the union of the intervals (x_i - r_i, x_i + r_i); K = [0,1] \ O is a
// compact Cantor-like residual of measure at least 1/2.
namespace funnel::exact {

struct DyadicIndex {
    std::uint64_t level;   // n = floor(log2 i)
    std::uint64_t offset;  // k = i - 2^n, in [0, 2^n)
    friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
};

/// i = 2^n + k. Throws std::invalid_argument for i == 0.
[[nodiscard]] DyadicIndex dyadic_index_decompose(std::uint64_t i);

/// x_i = k / 2^n, in [0, 1).
[[nodiscard]] Rational example_center(std::uint64_t i);

/// r_i = 2^(-i-2).
[[nodiscard]] Rational example_radius(std::uint64_t i);

/// O_N: union of the first n intervals (x_i - r_i, x_i + r_i) on the full line.
[[nodiscard]] IntervalUnion removed_intervals(std::uint64_t n);

/// Sum over i > n of 2 r_i = 2^(-n-1): the most measure the untruncated tail
/// can still remove.
[[nodiscard]] Rational tail_length_bound(std::uint64_t n);

/// Certified enclosure of the measure of K from the first n intervals:
/// upper = 1 - |O_n ∩ [0,1]|, lower = upper - 2^(-n-1).
[[nodiscard]] MeasureEnclosure k_measure_enclosure(std::uint64_t n);

enum class KVerdict { certified, refuted, inconclusive };

[[nodiscard]] std::string to_string(KVerdict v);

struct KCertificate {
    KVerdict verdict = KVerdict::inconclusive;
    /// Index of a ball containing x (refuted only; empty if it overflows 64 bits).
    std::optional<std::uint64_t> witness_index;
    /// Number of indices checked one by one.
    std::uint64_t explicit_checks = 0;
    /// Every level at or above this one is covered by the separation bound
    /// |p/q - k/2^n| >= 1/(q 2^n) (certified only).
    std::uint64_t analytic_level = 0;
    std::string detail;
};

/// Sound decision of x ∈ K for x = p/q ∈ [0, 1].
///
/// Indices up to n are checked exactly. The tail uses the separation bound
/// above, valid at every level where x is not a center; it beats
/// 2^(-2^n-2) >= r_i from a small level on, and the finitely many indices
/// below that level are checked exactly too. Dyadic x are centers and are
/// refuted. More than `explicit_limit` explicit checks yields inconclusive.
[[nodiscard]] KCertificate certify_point_in_k(const Rational& x, std::uint64_t n,
                                              std::uint64_t explicit_limit = std::uint64_t{1} << 20);

}  // namespace funnel::exact
