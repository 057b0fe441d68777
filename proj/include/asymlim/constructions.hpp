#pragma once

// Contractions with a prescribed asymptotic limit, Möbius and finite Blaschke
// functional calculus, and monotone transforms of symbolic spectra.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/LU>
#include <Eigen/SparseCore>

#include "asymlim/asymptotics.hpp"
#include "asymlim/error.hpp"
#include "asymlim/expr.hpp"
#include "asymlim/io.hpp"
#include "asymlim/linalg.hpp"
#include "asymlim/operators.hpp"
#include "asymlim/spectrum.hpp"

namespace asymlim {

// ---------------------------------------------------------------------------
// Block construction: X = ⊕ X_j, T|X_j = A_{j+1}^{-1/2} A_j^{1/2} into X_{j+1}.

struct BlockSpec {
    std::vector<ComplexMatrix> blocks;
};

inline constexpr double kOrderSlack = 1e-12;

struct BlockConstruction {
    DenseContraction t;
    ComplexMatrix exact_limit;  // ⊕ A_j
    Eigen::Index block_dim = 0;
    std::size_t block_count = 0;
    std::vector<double> min_eigs;
    std::vector<double> max_eigs;

    /// 1/r̲(A_n) − 1.
    double bound(std::size_t n) const { return 1.0 / min_eigs.at(n) - 1.0; }
};

inline void validate(const BlockSpec& spec, std::vector<double>* min_eigs = nullptr,
                     std::vector<double>* max_eigs = nullptr) {
    auto bad = [](const std::string& why) { return Error(ErrorKind::SpecViolation, why); };
    if (spec.blocks.size() < 2) throw bad("block construction needs at least 2 blocks");
    const Eigen::Index d = spec.blocks.front().rows();
    if (d == 0) throw bad("blocks must be non-empty");
    std::vector<double> lo;
    std::vector<double> hi;
    for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
        const auto& a = spec.blocks[j];
        const std::string name = "A_" + std::to_string(j);
        if (a.rows() != d || a.cols() != d)
            throw bad(name + " has shape " + shape_of(a) + ", expected " + std::to_string(d) + "x" +
                      std::to_string(d));
        require_finite(a, name);
        if (!is_hermitian(a, 1e-10)) throw bad(name + " is not Hermitian");
        const RealVector ev = hermitian_eigenvalues(a);
        if (ev(0) < -kOrderSlack) throw bad(name + " is not positive semidefinite");
        if (ev(d - 1) > 1.0 + kOrderSlack) throw bad(name + " is not a contraction");
        lo.push_back(std::max(0.0, ev(0)));
        hi.push_back(ev(d - 1));
    }
    if (!(lo[1] > kOrderSlack)) throw bad("A_1 must be invertible (minimum eigenvalue > 0)");
    for (std::size_t j = 0; j + 1 < spec.blocks.size(); ++j)
        if (hi[j] > lo[j + 1] + kOrderSlack)
            throw bad("ordering violated: r(A_" + std::to_string(j) + ") = " + format_double(hi[j]) +
                      " exceeds min eigenvalue of A_" + std::to_string(j + 1) + " = " +
                      format_double(lo[j + 1]));
    if (min_eigs) *min_eigs = std::move(lo);
    if (max_eigs) *max_eigs = std::move(hi);
}

/// Truncated to J blocks; the last block is mapped to 0. Unitary legs are
/// the identity.
inline BlockConstruction lemma_block_construction(const BlockSpec& spec) {
    std::vector<double> lo;
    std::vector<double> hi;
    validate(spec, &lo, &hi);
    const std::size_t count = spec.blocks.size();
    const Eigen::Index d = spec.blocks.front().rows();
    const Eigen::Index n = d * static_cast<Eigen::Index>(count);
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (std::size_t j = 0; j + 1 < count; ++j) {
        const ComplexMatrix leg = psd_inv_sqrt(spec.blocks[j + 1], kOrderSlack, 1e-10) *
                                  psd_sqrt(spec.blocks[j], 1e-10);
        const auto r = static_cast<Eigen::Index>(j + 1) * d;
        const auto c = static_cast<Eigen::Index>(j) * d;
        m.block(r, c, d, d) = leg;
    }
    BlockConstruction out{DenseContraction(std::move(m), 1e-10),
                          direct_sum(std::span<const ComplexMatrix>(spec.blocks)),
                          d,
                          count,
                          std::move(lo),
                          std::move(hi)};
    return out;
}

/// Errors ‖P(T^{*n}T^n − A)P‖ on the blocks 0..J−1−n whose n-step images stay
/// inside the truncation, with the bound 1/r̲(A_n) − 1, for n = 1..n_max.
inline ConvergenceReport block_convergence(const BlockConstruction& c, std::size_t n_max) {
    if (n_max == 0 || n_max >= c.block_count)
        throw Error(ErrorKind::SpecViolation, "n_max must lie in [1, J-1] = [1, " +
                                                  std::to_string(c.block_count - 1) + "]");
    ConvergenceReport report;
    const ComplexMatrix& t = c.t.matrix();
    ComplexMatrix power = t;
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (n > 1) power = t * power;
        const Eigen::Index keep = c.block_dim * static_cast<Eigen::Index>(c.block_count - n);
        const ComplexMatrix g = hermitian_part(power.adjoint() * power);
        const ComplexMatrix diff = (g - c.exact_limit).topLeftCorner(keep, keep);
        report.steps.push_back({n, hermitian_norm(hermitian_part(diff)), c.bound(n), std::nullopt});
    }
    report.converged = true;
    report.final_n = n_max;
    return report;
}

// ---------------------------------------------------------------------------
// Diagonal construction on ℕ×ℕ: α_{l,m} = λ_{antidiag(l,m)}, weights
// √(α_{l,m}/α_{l,m+1}).

/// Enumeration of ℕ×ℕ along anti-diagonals: (1,1)=1, (2,1)=2, (1,2)=3, ...
inline std::int64_t antidiag_index(std::int64_t l, std::int64_t m) {
    if (l < 1 || m < 1)
        throw Error(ErrorKind::InvalidIndex, "antidiag_index needs l, m ≥ 1");
    const std::int64_t s = l + m;
    return (s - 1) * (s - 2) / 2 + m;
}

/// λ_1, λ_2, ... given by a formula or an explicit finite list.
class EigenvalueSequence {
public:
    /// λ_j = f(start + j − 1).
    static EigenvalueSequence from_expr(ExprAst f, std::int64_t start = 1) {
        EigenvalueSequence s;
        s.formula_ = std::move(f);
        s.start_ = start;
        return s;
    }

    static EigenvalueSequence from_list(std::vector<double> values) {
        EigenvalueSequence s;
        s.list_ = std::move(values);
        return s;
    }

    double operator()(std::int64_t j) const {
        if (j < 1) throw Error(ErrorKind::InvalidIndex, "eigenvalue index must be ≥ 1");
        if (formula_) return eval(*formula_, start_ + j - 1);
        if (static_cast<std::size_t>(j) > list_.size())
            throw Error(ErrorKind::SpecViolation, "eigenvalue list has " +
                                                      std::to_string(list_.size()) +
                                                      " entries, index " + std::to_string(j) +
                                                      " requested");
        return list_[static_cast<std::size_t>(j - 1)];
    }

    /// Number of known terms; nullopt for formulas.
    std::optional<std::size_t> size() const {
        if (formula_) return std::nullopt;
        return list_.size();
    }

    std::string describe() const {
        if (formula_) return print(*formula_);
        return "list of " + std::to_string(list_.size());
    }

private:
    std::optional<ExprAst> formula_;
    std::int64_t start_ = 1;
    std::vector<double> list_;
};

inline constexpr std::int64_t kUpfrontChecks = 64;

namespace detail {

inline double checked_eigenvalue(const EigenvalueSequence& lambda, std::int64_t j, double floor) {
    const double v = lambda(j);
    if (!(v >= floor && v < 1.0) || v <= 0.0)
        throw Error(ErrorKind::SpecViolation, "eigenvalue λ_" + std::to_string(j) + " = " +
                                                  format_double(v) + " outside [" +
                                                  format_double(floor) + ", 1) ∩ (0, 1)");
    return v;
}

inline void check_prefix(const EigenvalueSequence& lambda, double floor) {
    std::int64_t n = kUpfrontChecks;
    if (const auto sz = lambda.size()) n = std::min<std::int64_t>(n, static_cast<std::int64_t>(*sz));
    double prev = 0.0;
    for (std::int64_t j = 1; j <= n; ++j) {
        const double v = checked_eigenvalue(lambda, j, floor);
        if (v < prev)
            throw Error(ErrorKind::SpecViolation, "eigenvalues decrease at λ_" + std::to_string(j));
        prev = v;
    }
}

// √(α_{l,m}/α_{l,m+1}); the ratio check catches non-monotone sequences lazily.
inline double diagonal_weight(const EigenvalueSequence& lambda, double floor, Index e) {
    const double here = checked_eigenvalue(lambda, antidiag_index(e.row, e.col), floor);
    const double next = checked_eigenvalue(lambda, antidiag_index(e.row, e.col + 1), floor);
    if (here > next)
        throw Error(ErrorKind::SpecViolation,
                    "eigenvalues are not non-decreasing: α" + to_string(e, UniverseKind::Grid) +
                        " = " + format_double(here) + " > α" +
                        to_string(Index{e.row, e.col + 1}, UniverseKind::Grid) + " = " +
                        format_double(next));
    return std::sqrt(here / next);
}

}  // namespace detail

struct DiagonalConstruction {
    OrbitShift t;
    std::function<double(Index)> exact_limit;
    EigenvalueSequence lambda;

    /// 1/λ_n − 1.
    double bound(std::int64_t n) const { return 1.0 / lambda(n) - 1.0; }
};

inline DiagonalConstruction lemma_diagonal_construction(const EigenvalueSequence& lambda) {
    detail::check_prefix(lambda, 0.0);
    OrbitShift t(
        IndexUniverse::grid(),
        [](Index e) -> std::optional<Index> { return Index{e.row, e.col + 1}; },
        [lambda](Index e) { return detail::diagonal_weight(lambda, 0.0, e); }, {},
        "diagonal construction");
    auto limit = [lambda](Index e) {
        return detail::checked_eigenvalue(lambda, antidiag_index(e.row, e.col), 0.0);
    };
    return {std::move(t), std::move(limit), lambda};
}

/// Column 0 carries eigenvalues below b; columns m ≥ 1 follow the diagonal
/// construction for a tail with values in [b, 1).
struct HybridConstruction {
    OrbitShift t;
    std::function<double(Index)> exact_limit;
    EigenvalueSequence lambda;
    std::vector<double> below_b;
    double b = 0.0;

    double bound(std::int64_t n) const { return 1.0 / lambda(n) - 1.0; }
};

inline HybridConstruction hybrid_construction(std::vector<double> below_b, double b,
                                              const EigenvalueSequence& lambda) {
    auto bad = [](const std::string& why) { return Error(ErrorKind::SpecViolation, why); };
    if (!(b > 0.0 && b < 1.0)) throw bad("b must lie in (0,1), got " + format_double(b));
    double top = 0.0;
    for (std::size_t i = 0; i < below_b.size(); ++i) {
        const double a = below_b[i];
        if (!(a >= 0.0 && a < b))
            throw bad("below_b[" + std::to_string(i) + "] = " + format_double(a) + " outside [0, " +
                      format_double(b) + ")");
        top = std::max(top, a);
    }
    detail::check_prefix(lambda, b);
    const auto rows = static_cast<std::int64_t>(below_b.size());
    const double column_bound = std::sqrt(top / b);

    auto values = std::make_shared<const std::vector<double>>(below_b);
    SuccessorFn succ = [](Index e) -> std::optional<Index> { return Index{e.row, e.col + 1}; };
    WeightFn weight = [values, lambda, b, column_bound](Index e) {
        if (e.col > 0) return detail::diagonal_weight(lambda, b, e);
        const double a = (*values)[static_cast<std::size_t>(e.row - 1)];
        const double first = detail::checked_eigenvalue(lambda, antidiag_index(e.row, 1), b);
        const double w = std::sqrt(a / first);
        if (w > column_bound + 1e-15)
            throw Error(ErrorKind::SpecViolation, "column-0 weight " + format_double(w) +
                                                      " exceeds sqrt(max a / b) = " +
                                                      format_double(column_bound));
        return w;
    };
    DomainFn domain = [rows](Index e) { return e.col > 0 || e.row <= rows; };
    auto limit = [values, lambda, b](Index e) {
        if (e.col == 0) return (*values)[static_cast<std::size_t>(e.row - 1)];
        return detail::checked_eigenvalue(lambda, antidiag_index(e.row, e.col), b);
    };
    OrbitShift t(IndexUniverse::grid(0), std::move(succ), std::move(weight), std::move(domain),
                 "hybrid construction");
    return {std::move(t), std::move(limit), lambda, std::move(below_b), b};
}

// ---------------------------------------------------------------------------
// Measured errors on orbit-shift truncations.

namespace detail {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

inline SparseMatrix to_sparse(const ComplexMatrix& m) {
    std::vector<Eigen::Triplet<Complex>> entries;
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            if (m(r, c) != Complex(0.0)) entries.emplace_back(r, c, m(r, c));
    SparseMatrix s(m.rows(), m.cols());
    s.setFromTriplets(entries.begin(), entries.end());
    return s;
}

}  // namespace detail

/// For n = 1..n_max: the largest ‖(T^{*n}T^n − A)e‖ over basis vectors e of
/// the truncation whose first n images stay inside the window (or vanish).
/// The bound column is bound(n).
inline ConvergenceReport grid_convergence(const OrbitShift& t, const Truncation& tr,
                                          const std::function<double(Index)>& exact,
                                          std::int64_t n_max,
                                          const std::function<double(std::int64_t)>& bound) {
    const auto dim = static_cast<Eigen::Index>(tr.basis.size());
    std::map<Index, Eigen::Index> position;
    for (Eigen::Index i = 0; i < dim; ++i) position.emplace(tr.basis[static_cast<std::size_t>(i)], i);

    // Steps each basis vector can take before its orbit leaves the window.
    std::vector<std::int64_t> room(static_cast<std::size_t>(dim), 0);
    for (Eigen::Index i = 0; i < dim; ++i) {
        Index cur = tr.basis[static_cast<std::size_t>(i)];
        std::int64_t k = 0;
        for (; k < n_max; ++k) {
            const auto next = t.successor(cur);
            if (!next) {
                k = n_max;
                break;
            }
            if (!position.count(*next)) break;
            cur = *next;
        }
        room[static_cast<std::size_t>(i)] = k;
    }

    const detail::SparseMatrix s = detail::to_sparse(tr.op.matrix());
    RealVector a(dim);
    for (Eigen::Index i = 0; i < dim; ++i) a(i) = exact(tr.basis[static_cast<std::size_t>(i)]);

    ConvergenceReport report;
    detail::SparseMatrix power = s;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        if (n > 1) power = (s * power).pruned();
        const detail::SparseMatrix g = (detail::SparseMatrix(power.adjoint()) * power).pruned();
        double worst = 0.0;
        for (Eigen::Index c = 0; c < dim; ++c) {
            if (room[static_cast<std::size_t>(c)] < n) continue;
            double sq = 0.0;
            bool diagonal_seen = false;
            for (detail::SparseMatrix::InnerIterator it(g, c); it; ++it) {
                Complex v = it.value();
                if (it.row() == c) {
                    v -= a(c);
                    diagonal_seen = true;
                }
                sq += std::norm(v);
            }
            if (!diagonal_seen) sq += a(c) * a(c);
            worst = std::max(worst, std::sqrt(sq));
        }
        report.steps.push_back({static_cast<std::uint64_t>(n), worst, bound(n), std::nullopt});
    }
    report.converged = true;
    report.final_n = static_cast<std::uint64_t>(n_max);
    return report;
}

/// ‖(T^{*n}T^n − A)e_idx‖ computed on the infinite operator through the orbit.
inline double orbit_power_error(const OrbitShift& t, Index idx, std::int64_t n, double exact) {
    SparseVector v = basis_vector(idx);
    for (std::int64_t k = 0; k < n && !v.empty(); ++k) v = orbit_apply(t, v);
    // Injective successors make T^{*n}T^n diagonal with entry ‖T^n e‖².
    return std::abs(squared_norm(v) - exact);
}

// ---------------------------------------------------------------------------
// Möbius and Blaschke calculus.

struct MobiusParam {
    Complex a;

    explicit MobiusParam(Complex value) : a(value) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || std::abs(a) > 1.0 - 1e-9)
            throw Error(ErrorKind::SpecViolation,
                        "Möbius parameter must satisfy |a| ≤ 1 − 1e-9, got |a| = " +
                            format_double(std::abs(a)));
    }
};

inline constexpr double kResolventConditionCap = 1e12;

/// b_a(T) = (T − aI)(I − āT)^{-1}.
inline DenseContraction mobius(const DenseContraction& t, const MobiusParam& p) {
    const Eigen::Index n = t.dim();
    const ComplexMatrix id = identity(n);
    const ComplexMatrix resolvent = id - std::conj(p.a) * t.matrix();
    const Eigen::PartialPivLU<ComplexMatrix> lu(resolvent);
    const ComplexMatrix inv = lu.inverse();
    const double cond = operator_norm(resolvent) * operator_norm(inv);
    if (!std::isfinite(cond) || cond > kResolventConditionCap)
        throw Error(ErrorKind::NearSingularResolvent,
                    "I − conj(a)·T has condition number " + format_double(cond));
    return DenseContraction((t.matrix() - p.a * id) * inv, 1e-8);
}

/// c·Π b_{a_k}(T), factors multiplied left to right.
inline DenseContraction blaschke_product(const DenseContraction& t, Complex c,
                                         const std::vector<MobiusParam>& roots) {
    if (std::abs(std::abs(c) - 1.0) > 1e-12)
        throw Error(ErrorKind::SpecViolation, "Blaschke constant must be unimodular, |c| = " +
                                                  format_double(std::abs(c)));
    ComplexMatrix acc = c * identity(t.dim());
    for (const auto& root : roots) acc = acc * mobius(t, root).matrix();
    return DenseContraction(std::move(acc), 1e-8);
}

/// Central diagonal discrepancies between A_{b_a(T_N)} and A_{T_N}, for the
/// bilateral half shift T compressed to [−N, N], at indices |k| ≤ N/4.
struct MobiusTruncationResult {
    std::int64_t window = 0;
    /// Between the dense asymptotic limits of the two finite matrices.
    double limit_discrepancy = 0.0;
    /// Between diag (S^h)*S^h and diag (T_N^h)*T_N^h with horizon h = N/8.
    double horizon_discrepancy = 0.0;
    std::int64_t horizon = 0;
};

inline MobiusTruncationResult mobius_truncation_experiment(const OrbitShift& bilateral,
                                                           std::int64_t n, Complex a) {
    const Window w = Window::interval(bilateral.universe(), -n, n);
    const Truncation tr = truncate(bilateral, w);
    const DenseContraction moved = mobius(tr.op, MobiusParam(a));

    MobiusTruncationResult out;
    out.window = n;
    out.horizon = n / 8;
    const DenseLimit plain = asymptotic_limit_dense(tr.op);
    const DenseLimit transformed = asymptotic_limit_dense(moved);

    auto power = [](const ComplexMatrix& m, std::int64_t k) {
        ComplexMatrix p = identity(m.rows());
        for (std::int64_t i = 0; i < k; ++i) p = m * p;
        return p;
    };
    const ComplexMatrix p_plain = power(tr.op.matrix(), out.horizon);
    const ComplexMatrix p_moved = power(moved.matrix(), out.horizon);

    for (std::size_t i = 0; i < tr.basis.size(); ++i) {
        if (std::abs(tr.basis[i].row) > n / 4) continue;
        const auto c = static_cast<Eigen::Index>(i);
        out.limit_discrepancy = std::max(
            out.limit_discrepancy, std::abs(transformed.limit(c, c) - plain.limit(c, c)));
        out.horizon_discrepancy = std::max(
            out.horizon_discrepancy, std::abs(p_moved.col(c).squaredNorm() - p_plain.col(c).squaredNorm()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spectral transforms g(A).

inline constexpr int kTransformSamples = 10'000;

/// Checks g on kTransformSamples equispaced points of [0,1], then maps atoms
/// through g (0 ↦ 0 and 1 ↦ 1 exactly) and composes g with every tail.
/// g's variable is `t`.
inline SpectrumSpec g_transform(const SpectrumSpec& spec, const ExprAst& g) {
    auto bad = [](const std::string& why) {
        return Error(ErrorKind::NotAdmissibleTransform,
                     why + " (sampled at " + std::to_string(kTransformSamples) + " points)");
    };
    const double at0 = eval_real(g, 0.0);
    const double at1 = eval_real(g, 1.0);
    if (std::abs(at0) > 1e-12) throw bad("g(0) = " + format_double(at0) + " ≠ 0");
    if (std::abs(at1 - 1.0) > 1e-12) throw bad("g(1) = " + format_double(at1) + " ≠ 1");
    double prev = at0;
    for (int i = 1; i < kTransformSamples; ++i) {
        const double x = static_cast<double>(i) / (kTransformSamples - 1);
        const double y = eval_real(g, x);
        if (!std::isfinite(y)) throw bad("g is not finite at t = " + format_double(x));
        if (y < prev - 1e-15) throw bad("g decreases near t = " + format_double(x));
        if (i + 1 < kTransformSamples && !(y > 0.0 && y < 1.0))
            throw bad("g(" + format_double(x) + ") = " + format_double(y) + " leaves (0,1)");
        prev = y;
    }

    SpectrumSpec out;
    for (const auto& a : spec.atoms) {
        Atom mapped = a;
        if (a.value != 0.0 && a.value != 1.0) mapped.value = eval_real(g, a.value);
        out.atoms.push_back(mapped);
    }
    for (const auto& t : spec.tails) out.tails.push_back({compose(g, t.formula), t.start, t.increasing});
    return out;
}

}  // namespace asymlim
