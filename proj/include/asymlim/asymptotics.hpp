#pragma once

// Asymptotic limits A_T = lim T^{*n} T^n: by repeated squaring for dense
// contractions, and as infinite products of squared weights for orbit shifts.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "asymlim/error.hpp"
#include "asymlim/io.hpp"
#include "asymlim/linalg.hpp"
#include "asymlim/operators.hpp"

namespace asymlim {

struct ConvergenceStep {
    std::uint64_t n = 0;
    double error = 0.0;
    std::optional<double> bound;
    /// ‖Q_k − Q_{k−1}‖ between consecutive squaring iterates, when recorded.
    std::optional<double> diff;
};

struct ConvergenceReport {
    std::vector<ConvergenceStep> steps;
    bool converged = false;
    std::uint64_t final_n = 0;

    bool errors_non_increasing(double slack = 1e-12) const {
        for (std::size_t i = 1; i < steps.size(); ++i)
            if (steps[i].error > steps[i - 1].error + slack) return false;
        return true;
    }

    bool within_bounds(double slack = 1e-10) const {
        for (const auto& s : steps)
            if (s.bound && s.error > *s.bound + slack) return false;
        return true;
    }

    std::string to_json() const {
        std::string out = "{\"converged\": ";
        out += converged ? "true" : "false";
        out += ", \"final_n\": " + std::to_string(final_n) + ", \"steps\": [";
        for (std::size_t i = 0; i < steps.size(); ++i) {
            const auto& s = steps[i];
            out += i ? ", " : "";
            out += "{\"n\": " + std::to_string(s.n) + ", \"error\": " + format_double(s.error) +
                   ", \"bound\": " + (s.bound ? format_double(*s.bound) : std::string("null"));
            if (s.diff) out += ", \"diff\": " + format_double(*s.diff);
            out += "}";
        }
        return out + "]}\n";
    }

    /// Header exactly `n,error,bound`; the bound cell is empty when absent.
    std::string to_csv() const {
        std::string out = "n,error,bound\n";
        for (const auto& s : steps)
            out += std::to_string(s.n) + "," + format_double(s.error) + "," +
                   (s.bound ? format_double(*s.bound) : std::string()) + "\n";
        return out;
    }
};

// ---------------------------------------------------------------------------
// Dense contractions

inline constexpr int kDefaultMaxDoublings = 60;

struct DenseLimit {
    ComplexMatrix limit;
    ConvergenceReport report;
    /// T^{final_n}, the last power formed.
    ComplexMatrix final_power;
    /// Q_k = (T^{2^k})* T^{2^k} for k = 0..K, symmetrized.
    std::vector<ComplexMatrix> iterates;
};

/// Squares T repeatedly; stops at the first k with ‖Q_k − Q_{k−1}‖ ≤ tol.
/// Step errors are measured against the returned limit, so they are
/// non-increasing. If max_doublings is exhausted the report is flagged
/// unconverged and the last iterate is returned.
inline DenseLimit asymptotic_limit_dense(const DenseContraction& t, double tol = kDefaultTol,
                                         int max_doublings = kDefaultMaxDoublings) {
    if (!(tol > 0.0)) throw Error(ErrorKind::SpecViolation, "tol must be positive");
    DenseLimit out;
    ComplexMatrix power = t.matrix();
    out.iterates.push_back(hermitian_part(power.adjoint() * power));
    std::vector<std::optional<double>> diffs{std::nullopt};
    bool converged = false;
    for (int k = 1; k <= max_doublings; ++k) {
        power = power * power;
        ComplexMatrix q = hermitian_part(power.adjoint() * power);
        const double diff = hermitian_norm(q - out.iterates.back());
        out.iterates.push_back(std::move(q));
        diffs.push_back(diff);
        if (diff <= tol) {
            converged = true;
            break;
        }
    }
    out.limit = out.iterates.back();
    out.final_power = std::move(power);
    out.report.converged = converged;
    out.report.final_n = std::uint64_t{1} << (out.iterates.size() - 1);
    for (std::size_t k = 0; k < out.iterates.size(); ++k) {
        ConvergenceStep step;
        step.n = std::uint64_t{1} << k;
        step.error = k + 1 == out.iterates.size() ? 0.0 : hermitian_norm(out.iterates[k] - out.limit);
        step.diff = diffs[k];
        out.report.steps.push_back(step);
    }
    return out;
}

inline void require_converged(const DenseLimit& r, std::string_view what) {
    if (!r.report.converged)
        throw Error(ErrorKind::NoConvergence,
                    std::string(what) + " did not converge after n = " + std::to_string(r.report.final_n));
}

// ---------------------------------------------------------------------------
// Orbit shifts

enum class OrbitStop {
    BelowTolerance,   // partial product fell under tol, limit 0
    OrbitEnds,        // successor undefined, T^n e = 0 from then on
    CycleDecay,       // periodic orbit with cycle product < 1
    CycleUnit,        // periodic orbit with all cycle weights 1
    Stagnated,        // relative decrement < tol for 64 consecutive steps
    Extrapolated,     // tail extrapolation settled within tol
    Inconclusive,     // max_steps exhausted
};

struct OrbitLimit {
    double value = 0.0;
    OrbitStop stop = OrbitStop::Inconclusive;
    std::uint64_t steps = 0;
    /// Partial product when the walk stopped; the limit never exceeds it.
    double upper = 1.0;
};

class InconclusiveError : public Error {
public:
    InconclusiveError(double lower, double upper, std::uint64_t steps)
        : Error(ErrorKind::Inconclusive, "orbit product undecided after " + std::to_string(steps) +
                                             " steps, limit in [" + format_double(lower) + ", " +
                                             format_double(upper) + "]"),
          lower_(lower),
          upper_(upper) {}

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }

private:
    double lower_;
    double upper_;
};

namespace detail {

// Richardson extrapolation of partial products sampled at n, 2n, 4n, ...,
// assuming P(n) = P∞ + c₁/n + c₂/n² + ...
inline double richardson(const std::vector<double>& samples) {
    std::vector<double> row(samples.begin(), samples.end());
    for (std::size_t level = 1; level < row.size(); ++level) {
        const double factor = std::ldexp(1.0, static_cast<int>(level)) - 1.0;
        for (std::size_t i = row.size() - 1; i >= level; --i)
            row[i] = row[i] + (row[i] - row[i - 1]) / factor;
    }
    return row.back();
}

}  // namespace detail

inline constexpr std::uint64_t kDefaultMaxOrbitSteps = std::uint64_t{1} << 20;

/// Walks the orbit idx, σ(idx), σ²(idx), ... accumulating Π weight². Stop
/// rules, checked every step: successor undefined (0); product < tol (0);
/// a cycle (0, or the current product if the cycle carries only unit
/// weights); relative decrement < tol for 64 consecutive steps (current
/// product), provided the latest extrapolation matches it to relative tol. At step counts 16·2^k the partial products are extrapolated
/// (Richardson, up to 5 levels over the latest 6 samples); when two
/// consecutive extrapolations agree to relative tol the extrapolated value,
/// clipped to [0, current product], is returned.
inline OrbitLimit orbit_limit(const OrbitShift& t, Index idx, double tol = kDefaultTol,
                              std::uint64_t max_steps = kDefaultMaxOrbitSteps) {
    if (!(tol > 0.0)) throw Error(ErrorKind::SpecViolation, "tol must be positive");
    t.require_valid(idx);

    double product = 1.0;
    Index cur = idx;
    Index tortoise = idx;
    double tortoise_product = 1.0;
    std::uint64_t brent_power = 1;
    std::uint64_t brent_len = 0;
    int quiet = 0;
    std::vector<double> samples;
    std::uint64_t next_sample = 16;
    std::optional<double> last_estimate;

    // idx is validated above and every successor below, so the raw maps are safe.
    const SuccessorFn& succ = t.successor_fn();
    const WeightFn& weight = t.weight_fn();
    for (std::uint64_t step = 1; step <= max_steps; ++step) {
        const auto next = succ(cur);
        if (!next) return {0.0, OrbitStop::OrbitEnds, step, product};
        if (!t.valid(*next)) (void)t.successor(cur);  // throws with a diagnostic
        const double w = weight(cur);
        if (!(w >= 0.0 && w <= 1.0)) (void)t.weight(cur);
        const double before = product;
        product *= w * w;
        if (product < tol) return {0.0, OrbitStop::BelowTolerance, step, product};
        cur = *next;

        if ((before - product) / before < tol) {
            // Slow tails (1 − w² ~ 1/m³) look quiet long before they settle;
            // only stop once the extrapolated tail agrees too.
            const bool settled = !last_estimate || std::abs(*last_estimate - product) <= tol * product;
            if (++quiet >= 64 && settled) return {product, OrbitStop::Stagnated, step, product};
        } else {
            quiet = 0;
        }

        ++brent_len;
        if (cur == tortoise) {
            if (product == tortoise_product) return {product, OrbitStop::CycleUnit, step, product};
            return {0.0, OrbitStop::CycleDecay, step, product};
        }
        if (brent_len == brent_power) {
            tortoise = cur;
            tortoise_product = product;
            brent_power *= 2;
            brent_len = 0;
        }

        if (step == next_sample) {
            next_sample *= 2;
            samples.push_back(product);
            if (samples.size() > 6) samples.erase(samples.begin());
            if (samples.size() >= 3) {
                const double estimate = detail::richardson(samples);
                if (last_estimate && estimate > 0.0 && *last_estimate > 0.0 &&
                    std::abs(estimate - *last_estimate) <= tol * estimate) {
                    const double value = std::clamp(estimate, 0.0, product);
                    return {value < tol ? 0.0 : value, OrbitStop::Extrapolated, step, product};
                }
                last_estimate = estimate;
            }
        }
    }
    return {0.0, OrbitStop::Inconclusive, max_steps, product};
}

/// Diagonal entry ⟨A_T e_idx, e_idx⟩ of an orbit shift's asymptotic limit.
inline double asymptotic_limit_orbit(const OrbitShift& t, Index idx, double tol = kDefaultTol,
                                     std::uint64_t max_steps = kDefaultMaxOrbitSteps) {
    const OrbitLimit r = orbit_limit(t, idx, tol, max_steps);
    if (r.stop == OrbitStop::Inconclusive) throw InconclusiveError(0.0, r.upper, r.steps);
    return r.value;
}

// ---------------------------------------------------------------------------
// Subspaces and classes

/// Orthonormal basis (columns) of the eigenvectors of `a` with eigenvalue ≤ tol.
inline ComplexMatrix stable_subspace(const ComplexMatrix& a, double tol = kDefaultTol) {
    const HermitianEigen e = hermitian_eigen(a, std::max(tol, kDefaultTol));
    Eigen::Index k = 0;
    while (k < e.values.size() && e.values(k) <= tol) ++k;
    return e.vectors.leftCols(k);
}

/// Orthonormal basis of the eigenvectors of `a` with eigenvalue ≥ 1 − tol.
inline ComplexMatrix isometric_subspace(const ComplexMatrix& a, double tol = kDefaultTol) {
    const HermitianEigen e = hermitian_eigen(a, std::max(tol, kDefaultTol));
    Eigen::Index k = e.values.size();
    while (k > 0 && e.values(k - 1) >= 1.0 - tol) --k;
    return e.vectors.rightCols(e.values.size() - k);
}

enum class ForwardClass { C0dot, C1dot, Mixed };
enum class BackwardClass { Cdot0, Cdot1, Mixed };

inline std::string_view to_string(ForwardClass c) {
    switch (c) {
    case ForwardClass::C0dot: return "C0dot";
    case ForwardClass::C1dot: return "C1dot";
    case ForwardClass::Mixed: return "Mixed";
    }
    return "?";
}

inline std::string_view to_string(BackwardClass c) {
    switch (c) {
    case BackwardClass::Cdot0: return "Cdot0";
    case BackwardClass::Cdot1: return "Cdot1";
    case BackwardClass::Mixed: return "Mixed";
    }
    return "?";
}

struct ContractionClass {
    ForwardClass forward = ForwardClass::Mixed;
    BackwardClass backward = BackwardClass::Mixed;
    Eigen::Index stable_dim = 0;     // dim H₀(T)
    Eigen::Index isometric_dim = 0;  // dim H₁(T)

    /// "C_{ij}" when both halves are pure, otherwise "<forward>/<backward>".
    std::string label() const {
        if (forward != ForwardClass::Mixed && backward != BackwardClass::Mixed)
            return std::string("C_{") + (forward == ForwardClass::C0dot ? "0" : "1") +
                   (backward == BackwardClass::Cdot0 ? "0" : "1") + "}";
        return std::string(to_string(forward)) + "/" + std::string(to_string(backward));
    }
};

inline ContractionClass classify(const DenseContraction& t, double tol = kDefaultTol) {
    const DenseLimit fwd = asymptotic_limit_dense(t, tol);
    require_converged(fwd, "A_T");
    const DenseLimit bwd = asymptotic_limit_dense(t.adjoint(), tol);
    require_converged(bwd, "A_{T*}");
    const Eigen::Index n = t.dim();
    ContractionClass c;
    c.stable_dim = stable_subspace(fwd.limit, tol).cols();
    c.isometric_dim = isometric_subspace(fwd.limit, tol).cols();
    const Eigen::Index back_stable = stable_subspace(bwd.limit, tol).cols();
    c.forward = c.stable_dim == n ? ForwardClass::C0dot
                : c.stable_dim == 0 ? ForwardClass::C1dot
                                    : ForwardClass::Mixed;
    c.backward = back_stable == n ? BackwardClass::Cdot0
                 : back_stable == 0 ? BackwardClass::Cdot1
                                    : BackwardClass::Mixed;
    return c;
}

/// Realization of the isometric asymptote: X⁺ = A_T^{1/2} written in an
/// orthonormal basis R of range(A_T), and the isometry V on that range with
/// V·X⁺ = X⁺·T.
struct IsometricAsymptote {
    ComplexMatrix range_basis;  // n × r, orthonormal columns
    ComplexMatrix intertwiner;  // r × n
    ComplexMatrix isometry;     // r × r
    double intertwining_residual = 0.0;  // ‖V X⁺ − X⁺ T‖
    double isometry_residual = 0.0;      // ‖V*V − I‖
};

inline IsometricAsymptote isometric_asymptote(const DenseContraction& t, double tol = kDefaultTol) {
    const DenseLimit lim = asymptotic_limit_dense(t, tol);
    require_converged(lim, "A_T");
    const HermitianEigen e = hermitian_eigen(lim.limit, kDefaultTol);
    Eigen::Index first = 0;
    while (first < e.values.size() && e.values(first) <= tol) ++first;
    const Eigen::Index r = e.values.size() - first;

    IsometricAsymptote out;
    out.range_basis = e.vectors.rightCols(r);
    RealVector root(r);
    for (Eigen::Index i = 0; i < r; ++i) root(i) = std::sqrt(e.values(first + i));
    out.intertwiner = root.cast<Complex>().asDiagonal() * out.range_basis.adjoint();
    const ComplexMatrix inv_root = root.cwiseInverse().cast<Complex>().asDiagonal();
    out.isometry = out.intertwiner * t.matrix() * out.range_basis * inv_root;
    if (r > 0) {
        out.intertwining_residual =
            operator_norm(out.isometry * out.intertwiner - out.intertwiner * t.matrix());
        out.isometry_residual =
            hermitian_norm(hermitian_part(out.isometry.adjoint() * out.isometry) - identity(r));
    }
    return out;
}

}  // namespace asymlim
