#pragma once

// Contractions in three shapes: dense matrices, weighted orbit shifts on a
// countable index set, and block-diagonal sums of either. Orbit shifts are
// compressed to dense matrices on finite windows.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "asymlim/error.hpp"
#include "asymlim/linalg.hpp"

namespace asymlim {

class DenseContraction {
public:
    static constexpr double kDefaultSlack = 1e-10;

    /// Norm of the matrix, when the caller already knows it from structure.
    struct KnownNorm {
        double value;
    };

    explicit DenseContraction(ComplexMatrix matrix, double norm_slack = kDefaultSlack)
        : matrix_(std::move(matrix)), norm_slack_(norm_slack) {
        require_square(matrix_, "contraction matrix");
        require_finite(matrix_, "contraction matrix");
        norm_ = operator_norm(matrix_);
        check_norm();
    }

    DenseContraction(ComplexMatrix matrix, double norm_slack, KnownNorm norm)
        : matrix_(std::move(matrix)), norm_slack_(norm_slack) {
        require_square(matrix_, "contraction matrix");
        require_finite(matrix_, "contraction matrix");
        norm_ = norm.value;
        check_norm();
    }

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    double norm_slack() const noexcept { return norm_slack_; }
    /// Operator norm, computed or supplied at construction.
    double norm() const noexcept { return norm_; }
    Eigen::Index dim() const noexcept { return matrix_.rows(); }

    DenseContraction adjoint() const {
        return DenseContraction(matrix_.adjoint(), norm_slack_, KnownNorm{norm_});
    }

private:
    void check_norm() const {
        if (!(norm_ <= 1.0 + norm_slack_))
            throw Error(ErrorKind::NotContraction,
                        "not a contraction: operator norm " + std::to_string(norm_) +
                            " exceeds 1 + " + std::to_string(norm_slack_));
    }

    ComplexMatrix matrix_;
    double norm_slack_;
    double norm_ = 0.0;
};

// ---------------------------------------------------------------------------
// Index sets

/// A basis label. One-dimensional universes use `row` only and keep `col` at 0.
struct Index {
    std::int64_t row = 0;
    std::int64_t col = 0;

    auto operator<=>(const Index&) const = default;
};

enum class UniverseKind { Naturals, Integers, Grid };

struct IndexUniverse {
    UniverseKind kind = UniverseKind::Naturals;
    std::int64_t first_row = 1;
    std::int64_t first_col = 1;

    static IndexUniverse naturals() { return {UniverseKind::Naturals, 1, 0}; }
    static IndexUniverse integers() { return {UniverseKind::Integers, 0, 0}; }
    /// ℕ × ℕ, optionally with an extra column 0 (`first_col = 0`).
    static IndexUniverse grid(std::int64_t first_col = 1) {
        return {UniverseKind::Grid, 1, first_col};
    }

    bool contains(Index idx) const {
        switch (kind) {
        case UniverseKind::Naturals: return idx.col == 0 && idx.row >= first_row;
        case UniverseKind::Integers: return idx.col == 0;
        case UniverseKind::Grid: return idx.row >= first_row && idx.col >= first_col;
        }
        return false;
    }

    bool operator==(const IndexUniverse&) const = default;
};

inline std::string to_string(Index idx, UniverseKind kind) {
    if (kind == UniverseKind::Grid)
        return "(" + std::to_string(idx.row) + "," + std::to_string(idx.col) + ")";
    return std::to_string(idx.row);
}

/// Finite, lexicographically ordered box of indices, optionally cut by
/// row + col ≤ max_coordinate_sum on grids.
struct Window {
    IndexUniverse universe;
    std::int64_t row_lo = 0;
    std::int64_t row_hi = -1;
    std::int64_t col_lo = 0;
    std::int64_t col_hi = 0;
    std::optional<std::int64_t> max_coordinate_sum;

    static Window interval(IndexUniverse u, std::int64_t lo, std::int64_t hi) {
        return {u, lo, hi, 0, 0, std::nullopt};
    }
    static Window box(IndexUniverse u, std::int64_t row_lo, std::int64_t row_hi,
                      std::int64_t col_lo, std::int64_t col_hi,
                      std::optional<std::int64_t> max_sum = std::nullopt) {
        return {u, row_lo, row_hi, col_lo, col_hi, max_sum};
    }

    bool contains(Index idx) const {
        if (!universe.contains(idx)) return false;
        if (idx.row < row_lo || idx.row > row_hi) return false;
        if (universe.kind == UniverseKind::Grid) {
            if (idx.col < col_lo || idx.col > col_hi) return false;
            if (max_coordinate_sum && idx.row + idx.col > *max_coordinate_sum) return false;
        }
        return true;
    }

    std::vector<Index> indices() const {
        std::vector<Index> out;
        const bool grid = universe.kind == UniverseKind::Grid;
        for (std::int64_t r = row_lo; r <= row_hi; ++r) {
            if (!grid) {
                if (contains({r, 0})) out.push_back({r, 0});
                continue;
            }
            for (std::int64_t c = col_lo; c <= col_hi; ++c)
                if (contains({r, c})) out.push_back({r, c});
        }
        return out;
    }
};

// ---------------------------------------------------------------------------
// Weighted orbit shifts: e_idx ↦ weight(idx)·e_{successor(idx)}, or 0 when the
// successor is undefined.

using SuccessorFn = std::function<std::optional<Index>(Index)>;
using WeightFn = std::function<double(Index)>;
using DomainFn = std::function<bool(Index)>;
using SparseVector = std::map<Index, Complex>;

class OrbitShift {
public:
    OrbitShift(IndexUniverse universe, SuccessorFn successor, WeightFn weight,
               DomainFn domain = {}, std::string name = "orbit shift")
        : universe_(universe),
          successor_(std::move(successor)),
          weight_(std::move(weight)),
          domain_(std::move(domain)),
          name_(std::move(name)) {}

    const IndexUniverse& universe() const noexcept { return universe_; }
    const std::string& name() const noexcept { return name_; }

    bool valid(Index idx) const { return universe_.contains(idx) && (!domain_ || domain_(idx)); }

    void require_valid(Index idx) const {
        if (!valid(idx))
            throw Error(ErrorKind::InvalidIndex,
                        name_ + ": index " + to_string(idx, universe_.kind) + " is not in the domain");
    }

    std::optional<Index> successor(Index idx) const {
        require_valid(idx);
        auto next = successor_(idx);
        if (next && !valid(*next))
            throw Error(ErrorKind::InvalidIndex, name_ + ": successor of " +
                                                     to_string(idx, universe_.kind) + " is " +
                                                     to_string(*next, universe_.kind) +
                                                     ", outside the domain");
        return next;
    }

    double weight(Index idx) const {
        require_valid(idx);
        const double w = weight_(idx);
        if (!(w >= 0.0 && w <= 1.0))
            throw Error(ErrorKind::NotContraction, name_ + ": weight " + std::to_string(w) + " at " +
                                                       to_string(idx, universe_.kind) +
                                                       " is outside [0,1]");
        return w;
    }

    // Raw access for composition (no validation).
    const SuccessorFn& successor_fn() const noexcept { return successor_; }
    const WeightFn& weight_fn() const noexcept { return weight_; }
    const DomainFn& domain_fn() const noexcept { return domain_; }

private:
    IndexUniverse universe_;
    SuccessorFn successor_;
    WeightFn weight_;
    DomainFn domain_;
    std::string name_;
};

inline SparseVector orbit_apply(const OrbitShift& t, const SparseVector& v) {
    SparseVector out;
    for (const auto& [idx, coeff] : v) {
        const auto next = t.successor(idx);
        const double w = t.weight(idx);
        if (!next || coeff == Complex(0.0)) continue;
        out[*next] += w * coeff;
    }
    return out;
}

inline SparseVector basis_vector(Index idx) { return SparseVector{{idx, Complex(1.0)}}; }

inline double squared_norm(const SparseVector& v) {
    double s = 0.0;
    for (const auto& [idx, c] : v) s += std::norm(c);
    return s;
}

/// s∘t: apply t first, then s.
inline OrbitShift orbit_compose(const OrbitShift& s, const OrbitShift& t) {
    if (!(s.universe() == t.universe()))
        throw Error(ErrorKind::DimensionMismatch,
                    "cannot compose orbit shifts over different index universes");
    SuccessorFn succ = [s, t](Index idx) -> std::optional<Index> {
        const auto mid = t.successor(idx);
        if (!mid) return std::nullopt;
        return s.successor(*mid);
    };
    WeightFn weight = [s, t](Index idx) -> double {
        const auto mid = t.successor(idx);
        if (!mid) return 0.0;
        return t.weight(idx) * s.weight(*mid);
    };
    return OrbitShift(t.universe(), std::move(succ), std::move(weight), t.domain_fn(),
                      s.name() + "·" + t.name());
}

/// Checks injectivity of the successor map and weight bounds on a window.
inline void verify_on_window(const OrbitShift& t, const Window& w) {
    std::map<Index, Index> preimage;
    for (const Index idx : w.indices()) {
        if (!t.valid(idx)) continue;
        (void)t.weight(idx);
        const auto next = t.successor(idx);
        if (!next) continue;
        const auto [it, inserted] = preimage.emplace(*next, idx);
        if (!inserted)
            throw Error(ErrorKind::InjectivityViolation,
                        t.name() + ": " + to_string(it->second, t.universe().kind) + " and " +
                            to_string(idx, t.universe().kind) + " share successor " +
                            to_string(*next, t.universe().kind));
    }
}

inline constexpr Eigen::Index kDefaultDenseCap = 4096;

struct Truncation {
    DenseContraction op;
    bool boundary_leak = false;
    std::vector<Index> basis;  // lexicographic
};

/// Compression P_W T P_W in the window's lexicographic basis.
inline Truncation truncate(const OrbitShift& t, const Window& w,
                           Eigen::Index dense_cap = kDefaultDenseCap) {
    if (!(w.universe == t.universe()))
        throw Error(ErrorKind::DimensionMismatch, "window universe differs from " + t.name());
    std::vector<Index> basis;
    for (const Index idx : w.indices())
        if (t.valid(idx)) basis.push_back(idx);
    if (basis.empty()) throw Error(ErrorKind::InvalidIndex, "truncation window is empty");
    if (static_cast<Eigen::Index>(basis.size()) > dense_cap)
        throw Error(ErrorKind::WindowTooLarge, "window has " + std::to_string(basis.size()) +
                                                   " indices, cap is " + std::to_string(dense_cap));
    verify_on_window(t, w);

    std::map<Index, Eigen::Index> position;
    for (std::size_t i = 0; i < basis.size(); ++i)
        position.emplace(basis[i], static_cast<Eigen::Index>(i));

    const auto n = static_cast<Eigen::Index>(basis.size());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    bool leak = false;
    double max_weight = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) {
        const auto next = t.successor(basis[static_cast<std::size_t>(c)]);
        if (!next) continue;
        const double wt = t.weight(basis[static_cast<std::size_t>(c)]);
        const auto it = position.find(*next);
        if (it == position.end()) {
            leak = true;
            continue;
        }
        m(it->second, c) = wt;
        max_weight = std::max(max_weight, wt);
    }
    // Injective successors give orthogonal columns, so the norm is the largest weight.
    return Truncation{DenseContraction(std::move(m), 1e-12, DenseContraction::KnownNorm{max_weight}),
                      leak, std::move(basis)};
}

// ---------------------------------------------------------------------------

using OperatorBlock = std::variant<DenseContraction, OrbitShift>;

struct BlockDiagonalOperator {
    std::vector<OperatorBlock> blocks;
};

struct BlockTruncation {
    DenseContraction op;
    bool boundary_leak = false;
    std::vector<Eigen::Index> offsets;  // starting row of each block
};

/// Dense blocks pass through; every orbit-shift block is compressed to `w`.
inline BlockTruncation truncate(const BlockDiagonalOperator& t, const Window& w,
                                Eigen::Index dense_cap = kDefaultDenseCap) {
    std::vector<ComplexMatrix> parts;
    std::vector<Eigen::Index> offsets;
    bool leak = false;
    Eigen::Index total = 0;
    for (const auto& block : t.blocks) {
        offsets.push_back(total);
        if (const auto* dense = std::get_if<DenseContraction>(&block)) {
            parts.push_back(dense->matrix());
        } else {
            auto tr = truncate(std::get<OrbitShift>(block), w, dense_cap);
            leak = leak || tr.boundary_leak;
            parts.push_back(tr.op.matrix());
        }
        total += parts.back().rows();
        if (total > dense_cap)
            throw Error(ErrorKind::WindowTooLarge, "block-diagonal truncation exceeds dense cap " +
                                                       std::to_string(dense_cap));
    }
    ComplexMatrix m = direct_sum(parts);
    return BlockTruncation{DenseContraction(std::move(m), 1e-10), leak, std::move(offsets)};
}

/// Direct sum of dense contractions.
inline DenseContraction direct_sum(std::span<const DenseContraction> blocks) {
    std::vector<ComplexMatrix> parts;
    double slack = 0.0;
    for (const auto& b : blocks) {
        parts.push_back(b.matrix());
        slack = std::max(slack, b.norm_slack());
    }
    return DenseContraction(direct_sum(std::span<const ComplexMatrix>(parts)), slack);
}

}  // namespace asymlim
