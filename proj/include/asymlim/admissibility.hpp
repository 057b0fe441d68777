#pragma once

// Which positive contractions arise as asymptotic limits: exactly those with
// dim H((0,1]) = dim H((δ,1]) for every 0 ≤ δ < 1. Equivalently A = 0, A is a
// non-zero finite-rank projection, or eigenvalues accumulate at 1.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "asymlim/error.hpp"
#include "asymlim/linalg.hpp"
#include "asymlim/spectrum.hpp"

namespace asymlim {

enum class VerdictCase { Zero, FiniteRankProjection, EssentialSpectralRadiusOne, Inadmissible };

inline std::string_view to_string(VerdictCase c) {
    switch (c) {
    case VerdictCase::Zero: return "Zero";
    case VerdictCase::FiniteRankProjection: return "FiniteRankProjection";
    case VerdictCase::EssentialSpectralRadiusOne: return "EssentialSpectralRadiusOne";
    case VerdictCase::Inadmissible: return "Inadmissible";
    }
    return "?";
}

struct AdmissibilityVerdict {
    bool admissible = false;
    VerdictCase verdict_case = VerdictCase::Inadmissible;
    std::string witness;
    std::optional<double> witness_delta;
};

/// A tail whose supremum estimate reaches 1 − kAccumulationGap by the
/// sampling horizon is treated as accumulating at 1.
inline constexpr double kAccumulationGap = 1e-3;

namespace detail {

inline Cardinality tail_dim_above(const Tail& t, double delta) {
    if (t.increasing) {
        for (const std::int64_t j : t.sample_points())
            if (t.at(j) > delta) return Cardinality::aleph0();
        return Cardinality::count(0);
    }
    // No monotonicity: decide by the behaviour just below the horizon.
    bool any_above = false;
    bool any_below = false;
    for (std::int64_t j = std::max(t.start, kTailHorizon - 1000); j <= kTailHorizon; ++j)
        (t.at(j) > delta ? any_above : any_below) = true;
    if (any_above && any_below)
        throw Error(ErrorKind::Undecidable, "tail " + print(t.formula) + " straddles delta = " +
                                                format_double(delta) + " near the sampling horizon");
    if (any_above) return Cardinality::aleph0();
    std::uint64_t n = 0;
    for (std::int64_t j = t.start; j <= kTailHorizon; ++j)
        if (t.at(j) > delta) ++n;
    return Cardinality::count(n);
}

// Estimated supremum of a tail: its horizon value when increasing, else the
// largest sampled value.
inline double tail_sup(const Tail& t) {
    if (t.increasing) return t.at(kTailHorizon < t.start ? t.start : kTailHorizon);
    double s = 0.0;
    for (const std::int64_t j : t.sample_points()) s = std::max(s, t.at(j));
    return s;
}

}  // namespace detail

/// dim H((δ,1]) for a symbolic spectrum.
inline Cardinality dim_above(const SpectrumSpec& spec, double delta) {
    if (!(delta >= 0.0 && delta < 1.0))
        throw Error(ErrorKind::SpecViolation, "delta must lie in [0,1)");
    Cardinality total;
    for (const auto& a : spec.atoms)
        if (a.value > delta) total += a.multiplicity;
    for (const auto& t : spec.tails) total += detail::tail_dim_above(t, delta);
    return total;
}

inline AdmissibilityVerdict check_admissible(const SpectrumSpec& spec) {
    validate(spec);
    const Cardinality mass = dim_above(spec, 0.0);
    if (mass == Cardinality::count(0))
        return {true, VerdictCase::Zero, "dim H((0,1]) = 0", std::nullopt};

    constexpr double one_tol = 1e-12;
    for (const auto& a : spec.atoms)
        if (a.value >= 1.0 - one_tol && a.multiplicity.countably_infinite)
            return {true, VerdictCase::EssentialSpectralRadiusOne,
                    "eigenvalue 1 has infinite multiplicity", std::nullopt};
    for (const auto& t : spec.tails) {
        const double sup = detail::tail_sup(t);
        if (sup >= 1.0 - kAccumulationGap)
            return {true, VerdictCase::EssentialSpectralRadiusOne,
                    "tail " + print(t.formula) + " accumulates at 1 (reaches " + format_double(sup) +
                        " by j = " + std::to_string(kTailHorizon) + ")",
                    std::nullopt};
    }

    // Largest spectral value strictly between 0 and 1.
    double inner = 0.0;
    bool has_inner = !spec.tails.empty();
    for (const auto& a : spec.atoms)
        if (a.value > 0.0 && a.value < 1.0 - one_tol) {
            inner = std::max(inner, a.value);
            has_inner = true;
        }
    for (const auto& t : spec.tails) inner = std::max(inner, detail::tail_sup(t));

    if (!has_inner)
        return {true, VerdictCase::FiniteRankProjection,
                "projection of rank " + mass.to_string(), std::nullopt};

    const double delta = 0.5 * (inner + 1.0);
    const Cardinality above = dim_above(spec, delta);
    return {false, VerdictCase::Inadmissible,
            "dim H((0,1]) = " + mass.to_string() + " but dim H((" + format_double(delta) +
                ",1]) = " + above.to_string(),
            delta};
}

/// Classifies a finite-dimensional positive contraction: only 0 and
/// projections are admissible in finite dimension.
inline AdmissibilityVerdict trichotomy_of(const ComplexMatrix& a, double tol = 1e-8) {
    require_hermitian(a, tol, "trichotomy_of input");
    const RealVector ev = hermitian_eigenvalues(a);
    if (ev.size() > 0 && (ev(0) < -tol || ev(ev.size() - 1) > 1.0 + tol))
        throw Error(ErrorKind::NotContraction, "spectrum leaves [0,1]: [" + format_double(ev(0)) +
                                                   ", " + format_double(ev(ev.size() - 1)) + "]");
    Eigen::Index rank = 0;
    double inner = -1.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) <= tol) continue;
        if (ev(i) >= 1.0 - tol) ++rank;
        else inner = std::max(inner, ev(i));
    }
    if (inner >= 0.0) {
        const double delta = 0.5 * (inner + 1.0);
        return {false, VerdictCase::Inadmissible,
                "eigenvalue " + format_double(inner) + " lies strictly inside (0,1); dim H((" +
                    format_double(delta) + ",1]) = " + std::to_string(rank) + " < dim H((0,1])",
                delta};
    }
    if (rank == 0) return {true, VerdictCase::Zero, "all eigenvalues vanish", std::nullopt};
    return {true, VerdictCase::FiniteRankProjection, "projection of rank " + std::to_string(rank),
            std::nullopt};
}

}  // namespace asymlim
