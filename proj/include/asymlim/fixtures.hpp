#pragma once

// Worked weighted-shift examples with closed-form asymptotic limits.

#include <cmath>
#include <cstdint>

#include "asymlim/operators.hpp"

namespace asymlim::fixtures {

namespace detail {
inline double telescoping_weight(std::int64_t l) {
    const double x = static_cast<double>(l);
    return std::sqrt(x * x - 1.0) / x;
}
}  // namespace detail

/// Bilateral shift on ℤ: e_k ↦ e_{k+1} for k > 0, e_k ↦ ½ e_{k+1} for k ≤ 0.
/// A triangular decomposition with a projection-valued diagonal whose
/// asymptotic limit is not a projection.
inline OrbitShift bilateral_half_shift() {
    return OrbitShift(
        IndexUniverse::integers(), [](Index k) -> std::optional<Index> { return Index{k.row + 1, 0}; },
        [](Index k) { return k.row > 0 ? 1.0 : 0.5; }, {}, "bilateral half shift");
}

/// 1 for k > 0, (1/2)^{2−2k} for k ≤ 0.
inline double bilateral_half_shift_limit(std::int64_t k) {
    return k > 0 ? 1.0 : std::ldexp(1.0, static_cast<int>(2 * k - 2));
}

/// Simple unilateral shift on ℕ.
inline OrbitShift unilateral_shift() {
    return OrbitShift(
        IndexUniverse::naturals(), [](Index k) -> std::optional<Index> { return Index{k.row + 1, 0}; },
        [](Index) { return 1.0; }, {}, "unilateral shift");
}

// Two non-commuting C1· contractions on ℓ²(ℕ×ℕ) with equal asymptotic limits
// whose product has a strictly larger limit.

inline OrbitShift coinciding_first() {
    return OrbitShift(
        IndexUniverse::grid(),
        [](Index e) -> std::optional<Index> { return Index{e.row, e.col + 1}; },
        [](Index e) { return e.col == 1 ? 1.0 : detail::telescoping_weight(e.col); }, {}, "T1");
}

inline OrbitShift coinciding_second() {
    return OrbitShift(
        IndexUniverse::grid(),
        [](Index e) -> std::optional<Index> {
            if (e.row == 1 && e.col == 1) return Index{1, 2};
            if (e.col == 2) return Index{e.row + 1, 1};
            if (e.col == 1) return Index{e.row - 1, 3};
            return Index{e.row, e.col + 1};
        },
        [](Index e) {
            if (e.col == 1) return e.row == 1 ? 1.0 : std::sqrt(3.0) / 2.0;
            if (e.col == 2) return 1.0;
            return detail::telescoping_weight(e.col);
        },
        {}, "T2");
}

/// Common limit of both factors: 1/2 on column 1, (j−1)/j on column j > 1.
inline double coinciding_factor_limit(Index e) {
    return e.col == 1 ? 0.5 : static_cast<double>(e.col - 1) / static_cast<double>(e.col);
}

/// Limit of the product T2·T1: 1 on column 1, (j−1)/j elsewhere.
inline double coinciding_product_limit(Index e) {
    return e.col == 1 ? 1.0 : static_cast<double>(e.col - 1) / static_cast<double>(e.col);
}

// Two stable (C0·) contractions whose product is C1·.

inline OrbitShift stable_first() {
    return OrbitShift(
        IndexUniverse::grid(),
        [](Index e) -> std::optional<Index> { return Index{e.row, e.col + 1}; },
        [](Index e) { return detail::telescoping_weight(e.row + 1); }, {}, "T1");
}

/// e_{i,1} ↦ 0, e_{i,j} ↦ e_{i+1,j−1} for j > 1.
inline OrbitShift stable_second() {
    return OrbitShift(
        IndexUniverse::grid(),
        [](Index e) -> std::optional<Index> {
            if (e.col == 1) return std::nullopt;
            return Index{e.row + 1, e.col - 1};
        },
        [](Index) { return 1.0; }, {}, "T2");
}

/// Limit of T2·T1: i/(i+1).
inline double stable_product_limit(Index e) {
    return static_cast<double>(e.row) / static_cast<double>(e.row + 1);
}

}  // namespace asymlim::fixtures
