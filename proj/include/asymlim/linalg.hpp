#pragma once

// Dense complex linear algebra: products, adjoints, norms, Hermitian spectral
// decomposition, PSD functional calculus and Loewner-order comparison.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "asymlim/error.hpp"

namespace asymlim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-10;

/// Eigenvalues ascending; eigenvectors are the orthonormal columns of `vectors`.
struct HermitianEigen {
    RealVector values;
    ComplexMatrix vectors;
};

inline std::string shape_of(const ComplexMatrix& a) {
    return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

inline bool all_finite(const ComplexMatrix& a) {
    for (Eigen::Index c = 0; c < a.cols(); ++c)
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            if (!std::isfinite(a(r, c).real()) || !std::isfinite(a(r, c).imag())) return false;
    return true;
}

inline void require_finite(const ComplexMatrix& a, std::string_view what) {
    if (!all_finite(a))
        throw Error(ErrorKind::NonFinite, std::string(what) + " has a NaN or infinite entry");
}

inline void require_square(const ComplexMatrix& a, std::string_view what) {
    if (a.rows() != a.cols())
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + " must be square, got " + shape_of(a));
}

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

inline ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw Error(ErrorKind::DimensionMismatch,
                    "cannot multiply " + shape_of(a) + " by " + shape_of(b));
    return a * b;
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) { return a.adjoint(); }

/// (a + a*) / 2
inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    return (a + a.adjoint()) * 0.5;
}

/// Eigenvalues (ascending) of the Hermitian part of `h`. No symmetry check.
inline RealVector hermitian_eigenvalues(const ComplexMatrix& h) {
    if (h.rows() == 0) return RealVector{};
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

/// Spectral norm of a matrix already known to be Hermitian.
inline double hermitian_norm(const ComplexMatrix& h) {
    if (h.size() == 0) return 0.0;
    const RealVector ev = hermitian_eigenvalues(h);
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

/// Largest singular value, from the top eigenvalue of a*a.
inline double operator_norm(const ComplexMatrix& a) {
    if (a.size() == 0) return 0.0;
    const ComplexMatrix gram = a.cols() <= a.rows() ? ComplexMatrix(a.adjoint() * a)
                                                    : ComplexMatrix(a * a.adjoint());
    const RealVector ev = hermitian_eigenvalues(gram);
    return std::sqrt(std::max(0.0, ev(ev.size() - 1)));
}

/// ‖a − a*‖ in operator norm; a must be square.
inline double hermitian_defect(const ComplexMatrix& a) {
    const ComplexMatrix skew = a - a.adjoint();
    const double frob = skew.norm();
    if (frob == 0.0) return 0.0;
    // i·skew is Hermitian, so its spectral norm is the largest |eigenvalue|.
    return hermitian_norm(Complex(0.0, 1.0) * skew);
}

inline bool is_hermitian(const ComplexMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    const ComplexMatrix skew = a - a.adjoint();
    if (skew.norm() <= tol) return true;
    return hermitian_defect(a) <= tol;
}

inline void require_hermitian(const ComplexMatrix& a, double tol, std::string_view what) {
    require_square(a, what);
    if (!is_hermitian(a, tol))
        throw Error(ErrorKind::NotHermitian, std::string(what) + " deviates from its adjoint by " +
                                                 std::to_string(hermitian_defect(a)) +
                                                 " (tol " + std::to_string(tol) + ")");
}

namespace detail {

// Index of the first component whose modulus exceeds `threshold`.
inline Eigen::Index first_significant(const ComplexVector& v, double threshold = 1e-8) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > threshold) return i;
    return v.size();
}

inline void normalize_phase(ComplexVector& v) {
    const Eigen::Index k = first_significant(v);
    if (k == v.size()) return;
    const Complex z = v(k);
    v *= std::conj(z) / std::abs(z);
    v(k) = Complex(v(k).real(), 0.0);
}

// Replaces the columns of `block` (an orthonormal basis of one eigenspace) by a
// basis that depends only on the eigenspace: Gram-Schmidt over the columns of
// its projector, in index order.
inline ComplexMatrix canonical_basis(const ComplexMatrix& block) {
    const Eigen::Index n = block.rows();
    const Eigen::Index k = block.cols();
    const ComplexMatrix projector = block * block.adjoint();
    const double accept = 0.5 / std::sqrt(static_cast<double>(n));
    ComplexMatrix out(n, k);
    Eigen::Index found = 0;
    for (Eigen::Index i = 0; i < n && found < k; ++i) {
        ComplexVector v = projector.col(i);
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index q = 0; q < found; ++q) v -= out.col(q) * out.col(q).dot(v);
        const double norm = v.norm();
        if (norm < accept) continue;
        out.col(found++) = v / norm;
    }
    if (found < k) return block;  // unreachable in exact arithmetic
    return out;
}

}  // namespace detail

/// Hermitian eigendecomposition with deterministic output: eigenvalues
/// ascending, each eigenvector phase-normalized so its first significant
/// component is real positive, and degenerate eigenspaces (gap ≤ 1e-9 relative)
/// spanned by a canonical basis sorted by first significant component.
inline HermitianEigen hermitian_eigen(const ComplexMatrix& a, double tol = kDefaultTol) {
    require_hermitian(a, tol, "hermitian_eigen input");
    HermitianEigen out;
    if (a.rows() == 0) return out;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();

    const Eigen::Index n = a.rows();
    const double scale = std::max(1.0, out.values.cwiseAbs().maxCoeff());
    const double gap = 1e-9 * scale;
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index stop = start + 1;
        while (stop < n && out.values(stop) - out.values(stop - 1) <= gap) ++stop;
        const Eigen::Index width = stop - start;
        if (width > 1) {
            ComplexMatrix basis = detail::canonical_basis(out.vectors.middleCols(start, width));
            std::vector<ComplexVector> cols;
            for (Eigen::Index c = 0; c < width; ++c) {
                ComplexVector v = basis.col(c);
                detail::normalize_phase(v);
                cols.push_back(std::move(v));
            }
            std::stable_sort(cols.begin(), cols.end(),
                             [](const ComplexVector& x, const ComplexVector& y) {
                                 const auto ix = detail::first_significant(x);
                                 const auto iy = detail::first_significant(y);
                                 if (ix != iy) return ix < iy;
                                 return std::abs(x(ix)) > std::abs(y(iy));
                             });
            for (Eigen::Index c = 0; c < width; ++c) out.vectors.col(start + c) = cols[c];
        } else {
            ComplexVector v = out.vectors.col(start);
            detail::normalize_phase(v);
            out.vectors.col(start) = v;
        }
        start = stop;
    }
    return out;
}

/// f(h) for Hermitian h, via the spectral decomposition. Result is Hermitian.
inline ComplexMatrix hermitian_function(const ComplexMatrix& h,
                                        const std::function<double(double)>& f) {
    if (h.rows() == 0) return h;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h));
    RealVector mapped = solver.eigenvalues();
    for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = f(mapped(i));
    const ComplexMatrix& v = solver.eigenvectors();
    return hermitian_part(v * mapped.cast<Complex>().asDiagonal() * v.adjoint());
}

/// Square root of a PSD matrix. Eigenvalues in [−tol, 0) are clamped to 0.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& a, double tol = kDefaultTol) {
    require_hermitian(a, tol, "psd_sqrt input");
    if (a.rows() == 0) return a;
    const RealVector ev = hermitian_eigenvalues(a);
    if (ev(0) < -tol)
        throw Error(ErrorKind::NotPsd,
                    "minimum eigenvalue " + std::to_string(ev(0)) + " below -" + std::to_string(tol));
    return hermitian_function(a, [](double x) { return std::sqrt(std::max(0.0, x)); });
}

/// Inverse square root of a positive definite matrix whose spectrum is bounded
/// below by `floor`.
inline ComplexMatrix psd_inv_sqrt(const ComplexMatrix& a, double floor,
                                  double hermitian_tol = kDefaultTol) {
    require_hermitian(a, hermitian_tol, "psd_inv_sqrt input");
    if (a.rows() == 0) return a;
    const RealVector ev = hermitian_eigenvalues(a);
    if (ev(0) < floor) throw SingularBelowFloorError(ev(0), floor);
    return hermitian_function(a, [](double x) { return 1.0 / std::sqrt(x); });
}

/// a ≤ b in the Loewner order, i.e. λ_min(b − a) ≥ −tol.
inline bool loewner_leq(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kDefaultTol) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorKind::DimensionMismatch,
                    "loewner_leq operands " + shape_of(a) + " and " + shape_of(b));
    require_hermitian(a, tol, "loewner_leq lhs");
    require_hermitian(b, tol, "loewner_leq rhs");
    if (a.rows() == 0) return true;
    return hermitian_eigenvalues(b - a)(0) >= -tol;
}

inline ComplexMatrix direct_sum(std::span<const ComplexMatrix> blocks) {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    ComplexMatrix out = ComplexMatrix::Zero(rows, cols);
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

inline ComplexMatrix diagonal_matrix(std::span<const double> values) {
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                                            static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = values[i];
    return out;
}

inline ComplexMatrix diagonal_matrix(std::initializer_list<double> values) {
    return diagonal_matrix(std::span<const double>(values.begin(), values.size()));
}

}  // namespace asymlim
