#pragma once

// Reproducible random matrices. The generator is a 64-bit LCG with
// a = 6364136223846793005, c = 1442695040888963407; uniforms take the top 53
// bits and normals come from Box–Muller. Seeds therefore reproduce across
// implementations that follow the same convention.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>

#include <Eigen/QR>

#include "asymlim/linalg.hpp"

namespace asymlim {

class Lcg64 {
public:
    explicit Lcg64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(uniform() * static_cast<double>(hi - lo + 1));
    }

    double normal() {
        if (spare_) {
            const double v = *spare_;
            spare_.reset();
            return v;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    Complex complex_normal() {
        const double re = normal();
        return {re, normal()};
    }

private:
    std::uint64_t state_;
    std::optional<double> spare_;
};

inline ComplexMatrix random_gaussian(Lcg64& rng, Eigen::Index n) {
    ComplexMatrix g(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r) g(r, c) = rng.complex_normal();
    return g;
}

/// G / (‖G‖(1 + u)) with G complex Gaussian and u uniform in [0,1).
inline ComplexMatrix random_contraction(Lcg64& rng, Eigen::Index n) {
    const ComplexMatrix g = random_gaussian(rng, n);
    const double u = rng.uniform();
    return g / (operator_norm(g) * (1.0 + u));
}

/// Haar-distributed unitary: QR of a Gaussian matrix with R's diagonal phases
/// moved into Q.
inline ComplexMatrix random_unitary(Lcg64& rng, Eigen::Index n) {
    const ComplexMatrix g = random_gaussian(rng, n);
    const Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * identity(n);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mag = std::abs(r(i, i));
        if (mag > 0.0) q.col(i) *= r(i, i) / mag;
    }
    return q;
}

inline ComplexMatrix random_hermitian(Lcg64& rng, Eigen::Index n) {
    return hermitian_part(random_gaussian(rng, n));
}

/// W diag(λ) W* with λ uniform in [0, 1].
inline ComplexMatrix random_psd_contraction(Lcg64& rng, Eigen::Index n) {
    const ComplexMatrix w = random_unitary(rng, n);
    RealVector lambda(n);
    for (Eigen::Index i = 0; i < n; ++i) lambda(i) = rng.uniform();
    return hermitian_part(w * lambda.cast<Complex>().asDiagonal() * w.adjoint());
}

/// W (U ⊕ C) W* with U unitary of size k and C a strict contraction, so the
/// asymptotic limit is a projection of rank k.
inline ComplexMatrix random_contraction_with_unitary_part(Lcg64& rng, Eigen::Index n,
                                                          Eigen::Index k) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    if (k > 0) m.topLeftCorner(k, k) = random_unitary(rng, k);
    if (n > k) m.bottomRightCorner(n - k, n - k) = random_contraction(rng, n - k);
    const ComplexMatrix w = random_unitary(rng, n);
    return w * m * w.adjoint();
}

}  // namespace asymlim
