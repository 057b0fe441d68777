#pragma once

// Built-in check suites: closed-form examples and randomized properties.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "asymlim/asymptotics.hpp"
#include "asymlim/constructions.hpp"
#include "asymlim/fixtures.hpp"
#include "asymlim/io.hpp"
#include "asymlim/random.hpp"

namespace asymlim {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

inline bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

/// Aligned two-column table, one row per check.
inline std::string format_table(const std::vector<CheckResult>& results) {
    std::size_t width = 5;
    for (const auto& r : results) width = std::max(width, r.name.size());
    std::string out = "check" + std::string(width - 5, ' ') + "  result  detail\n";
    for (const auto& r : results)
        out += r.name + std::string(width - r.name.size(), ' ') + "  " +
               (r.passed ? "PASS  " : "FAIL  ") + "  " + r.detail + "\n";
    return out;
}

namespace detail {

// Largest |orbit limit − expected| over a grid block, as a check.
template <class Expected>
CheckResult grid_check(std::string name, const OrbitShift& t, std::int64_t size, double tol,
                       Expected expected) {
    double worst = 0.0;
    Index where{1, 1};
    for (std::int64_t i = 1; i <= size; ++i)
        for (std::int64_t j = 1; j <= size; ++j) {
            const double got = asymptotic_limit_orbit(t, {i, j});
            const double err = std::abs(got - expected(Index{i, j}));
            if (err > worst) {
                worst = err;
                where = {i, j};
            }
        }
    return {std::move(name), worst <= tol,
            "max error " + format_double(worst) + " at " + to_string(where, UniverseKind::Grid)};
}

}  // namespace detail

/// Orbit-product limits of the worked shifts against their closed forms.
inline std::vector<CheckResult> verify_examples(std::int64_t size = 12) {
    std::vector<CheckResult> out;
    {
        const OrbitShift t = fixtures::bilateral_half_shift();
        double worst = 0.0;
        for (std::int64_t k = -20; k <= 20; ++k) {
            const double got = asymptotic_limit_orbit(t, {k, 0}, 1e-15);
            worst = std::max(worst, std::abs(got - fixtures::bilateral_half_shift_limit(k)));
        }
        out.push_back({"bilateral half shift", worst == 0.0, "max error " + format_double(worst)});
    }
    const OrbitShift t1 = fixtures::coinciding_first();
    const OrbitShift t2 = fixtures::coinciding_second();
    out.push_back(detail::grid_check("coinciding T1", t1, size, 1e-10, fixtures::coinciding_factor_limit));
    out.push_back(detail::grid_check("coinciding T2", t2, size, 1e-10, fixtures::coinciding_factor_limit));
    out.push_back(detail::grid_check("coinciding T2*T1", orbit_compose(t2, t1), size, 1e-10,
                                     fixtures::coinciding_product_limit));

    const OrbitShift s1 = fixtures::stable_first();
    const OrbitShift s2 = fixtures::stable_second();
    out.push_back(detail::grid_check("stable T1", s1, size, 0.0, [](Index) { return 0.0; }));
    out.push_back(detail::grid_check("stable T2", s2, size, 0.0, [](Index) { return 0.0; }));
    out.push_back(detail::grid_check("stable T2*T1", orbit_compose(s2, s1), size, 1e-10,
                                     fixtures::stable_product_limit));
    return out;
}

/// p(T) = Σ c_k T^k with Σ|c_k| = 1 (a contraction by von Neumann's
/// inequality); half the time a unimodular monomial, which keeps the unitary
/// part of T alive.
inline ComplexMatrix random_polynomial_of(Lcg64& rng, const ComplexMatrix& t) {
    const Eigen::Index n = t.rows();
    std::vector<Complex> c(4, Complex(0.0));
    if (rng.uniform() < 0.5) {
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        c[static_cast<std::size_t>(rng.integer(1, 3))] = std::polar(1.0, phase);
    } else {
        double total = 0.0;
        for (auto& x : c) {
            x = rng.complex_normal();
            total += std::abs(x);
        }
        for (auto& x : c) x /= total;
    }
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    ComplexMatrix power = identity(n);
    for (const Complex& ck : c) {
        out += ck * power;
        power = power * t;
    }
    return out;
}

/// A random contraction of dimension 2..max_dim: strict with probability
/// 1/3, otherwise with a unitary summand of random rank.
inline ComplexMatrix random_test_contraction(Lcg64& rng, Eigen::Index max_dim = 8) {
    const Eigen::Index n = rng.integer(2, max_dim);
    if (rng.uniform() < 1.0 / 3.0) return random_contraction(rng, n);
    return random_contraction_with_unitary_part(rng, n, rng.integer(1, n));
}

inline std::vector<CheckResult> verify_props(std::uint64_t seed, int trials = 20) {
    Lcg64 rng(seed);
    std::vector<CheckResult> out;
    auto record = [&](std::string name, int failures, double worst) {
        out.push_back({std::move(name), failures == 0,
                       std::to_string(trials - failures) + "/" + std::to_string(trials) +
                           " trials, worst " + format_double(worst)});
    };

    {
        int fails = 0;
        double worst = 0.0;
        for (int i = 0; i < trials; ++i) {
            const DenseContraction t(random_test_contraction(rng), 1e-8);
            const DenseLimit lim = asymptotic_limit_dense(t);
            for (std::size_t k = 1; k < lim.iterates.size(); ++k) {
                const double gap = hermitian_eigenvalues(lim.iterates[k - 1] - lim.iterates[k])(0);
                worst = std::min(worst, gap);
            }
            if (!loewner_leq(lim.limit, lim.iterates.front(), 1e-8)) ++fails;
        }
        if (worst < -1e-8) fails = std::max(fails, 1);
        record("Loewner monotonicity", fails, worst);
    }
    {
        int fails = 0;
        double worst = 0.0;
        for (int i = 0; i < trials; ++i) {
            const DenseContraction t(random_test_contraction(rng), 1e-8);
            const DenseLimit lim = asymptotic_limit_dense(t);
            const double defect = hermitian_norm(hermitian_part(lim.limit * lim.limit - lim.limit));
            worst = std::max(worst, defect);
            if (!lim.report.converged || defect > 1e-6) ++fails;
        }
        record("projection law", fails, worst);
    }
    {
        int fails = 0;
        double worst = 0.0;
        for (int i = 0; i < trials; ++i) {
            const ComplexMatrix m = random_test_contraction(rng);
            const ComplexMatrix u = random_unitary(rng, m.rows());
            const DenseLimit a = asymptotic_limit_dense(DenseContraction(m, 1e-8));
            const DenseLimit b = asymptotic_limit_dense(DenseContraction(u * m * u.adjoint(), 1e-8));
            const double err = operator_norm(b.limit - u * a.limit * u.adjoint());
            worst = std::max(worst, err);
            if (err > 1e-8) ++fails;
        }
        record("unitary conjugation", fails, worst);
    }
    {
        int fails = 0;
        double worst = 0.0;
        for (int i = 0; i < trials; ++i) {
            const DenseContraction t(random_test_contraction(rng), 1e-8);
            const Complex a = std::polar(rng.uniform(0.0, 0.9), rng.uniform(0.0, 2.0 * std::numbers::pi));
            const DenseContraction back = mobius(mobius(t, MobiusParam(a)), MobiusParam(-a));
            const double err = operator_norm(back.matrix() - t.matrix());
            worst = std::max(worst, err);
            if (err > 1e-9) ++fails;
        }
        record("Mobius involution", fails, worst);
    }
    {
        int fails = 0;
        double worst = 0.0;
        for (int i = 0; i < trials; ++i) {
            const ComplexMatrix t = random_test_contraction(rng);
            const ComplexMatrix p = random_polynomial_of(rng, t);
            const ComplexMatrix q = random_polynomial_of(rng, t);
            const DenseLimit ap = asymptotic_limit_dense(DenseContraction(p, 1e-8));
            const DenseLimit aq = asymptotic_limit_dense(DenseContraction(q, 1e-8));
            const DenseLimit apq = asymptotic_limit_dense(DenseContraction(p * q, 1e-8));
            const double gap = std::min(hermitian_eigenvalues(ap.limit - apq.limit)(0),
                                        hermitian_eigenvalues(aq.limit - apq.limit)(0));
            worst = std::min(worst, gap);
            if (gap < -1e-8) ++fails;
        }
        record("commuting product", fails, worst);
    }
    return out;
}

}  // namespace asymlim
