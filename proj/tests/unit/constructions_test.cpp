#include <gtest/gtest.h>

#include <cmath>

#include "asymlim/admissibility.hpp"
#include "asymlim/constructions.hpp"
#include "asymlim/random.hpp"

using namespace asymlim;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no exception";
    return ErrorKind::MalformedInput;
}

BlockSpec scalar_blocks(std::initializer_list<double> values) {
    BlockSpec s;
    for (const double v : values) s.blocks.push_back(diagonal_matrix({v}));
    return s;
}

EigenvalueSequence seq(const char* text) { return EigenvalueSequence::from_expr(parse(text)); }

ComplexMatrix scalar(Complex z) { return ComplexMatrix::Constant(1, 1, z); }

}  // namespace

TEST(BlockConstruction, ScalarLadder) {
    const auto c = lemma_block_construction(scalar_blocks({0.5, 2.0 / 3, 0.75, 0.8}));
    EXPECT_EQ(c.t.dim(), 4);
    const auto r = block_convergence(c, 2);
    ASSERT_EQ(r.steps.size(), 2u);
    EXPECT_NEAR(*r.steps[1].bound, 1.0 / 3.0, 1e-15);
    EXPECT_LE(r.steps[1].error, 1.0 / 3.0);

    // Oracle: T^{*2}T^2 on block j is a_j / a_{j+2}.
    const double a[] = {0.5, 2.0 / 3, 0.75, 0.8};
    const double want = std::max(std::abs(a[0] / a[2] - a[0]), std::abs(a[1] / a[3] - a[1]));
    EXPECT_NEAR(r.steps[1].error, want, 1e-14);
    EXPECT_TRUE(r.within_bounds());
}

TEST(BlockConstruction, IdentityBlocksGiveIsometricShift) {
    BlockSpec s;
    for (int j = 0; j < 4; ++j) s.blocks.push_back(identity(2));
    const auto c = lemma_block_construction(s);
    for (const auto& step : block_convergence(c, 3).steps) EXPECT_LE(step.error, 1e-14);
}

TEST(BlockConstruction, MatrixBlocksMatchDenseOracle) {
    // A_j = (1 − 2^{-(j+1)}) P + (1 − 2^{-(j+2)}) (I − P) for a fixed projection P.
    Lcg64 rng(12);
    const ComplexMatrix u = random_unitary(rng, 3);
    BlockSpec s;
    for (int j = 0; j < 5; ++j) {
        const double lo = 1.0 - std::ldexp(1.0, -(j + 1));
        const double hi = 1.0 - std::ldexp(1.0, -(j + 2));
        s.blocks.push_back(hermitian_part(u * diagonal_matrix({lo, hi, hi}) * u.adjoint()));
    }
    const auto c = lemma_block_construction(s);
    const auto r = block_convergence(c, 4);
    const ComplexMatrix& t = c.t.matrix();
    ComplexMatrix p = t;
    for (std::size_t n = 1; n <= 4; ++n) {
        if (n > 1) p = t * p;
        const Eigen::Index keep = 3 * static_cast<Eigen::Index>(5 - n);
        const double want = operator_norm((p.adjoint() * p - c.exact_limit).topLeftCorner(keep, keep));
        EXPECT_NEAR(r.steps[n - 1].error, want, 1e-12) << "n = " << n;
        EXPECT_LE(r.steps[n - 1].error, *r.steps[n - 1].bound + 1e-12);
    }
}

TEST(BlockConstruction, RejectsBadSpecs) {
    EXPECT_EQ(kind_of([] { lemma_block_construction(scalar_blocks({0.5, 0.4})); }), ErrorKind::SpecViolation);
    EXPECT_EQ(kind_of([] { lemma_block_construction(scalar_blocks({0.0, 0.0, 0.5})); }),
              ErrorKind::SpecViolation);
    EXPECT_EQ(kind_of([] { lemma_block_construction(scalar_blocks({0.5})); }), ErrorKind::SpecViolation);
    EXPECT_EQ(kind_of([] { lemma_block_construction(scalar_blocks({0.5, 1.5})); }), ErrorKind::SpecViolation);
    BlockSpec mixed{{identity(1), identity(2)}};
    EXPECT_EQ(kind_of([&] { lemma_block_construction(mixed); }), ErrorKind::SpecViolation);
    const auto c = lemma_block_construction(scalar_blocks({0.5, 0.6, 0.7}));
    EXPECT_EQ(kind_of([&] { block_convergence(c, 3); }), ErrorKind::SpecViolation);
}

TEST(AntidiagIndex, FirstDiagonals) {
    EXPECT_EQ(antidiag_index(1, 1), 1);
    EXPECT_EQ(antidiag_index(2, 1), 2);
    EXPECT_EQ(antidiag_index(1, 2), 3);
    EXPECT_EQ(antidiag_index(3, 1), 4);
    EXPECT_EQ(antidiag_index(2, 2), 5);
    EXPECT_EQ(antidiag_index(1, 3), 6);
    EXPECT_EQ(kind_of([] { antidiag_index(0, 1); }), ErrorKind::InvalidIndex);
}

TEST(AntidiagIndex, IsABijectionOnACorner) {
    std::vector<int> hits(5051, 0);
    for (std::int64_t s = 2; s <= 101; ++s)
        for (std::int64_t l = 1; l < s; ++l) ++hits[static_cast<std::size_t>(antidiag_index(l, s - l))];
    for (std::size_t k = 1; k < hits.size(); ++k) EXPECT_EQ(hits[k], 1) << k;
}

TEST(DiagonalConstruction, Weights) {
    const auto c = lemma_diagonal_construction(seq("j/(j+1)"));
    EXPECT_NEAR(c.t.weight({1, 1}), std::sqrt(2.0 / 3.0), 1e-15);
    EXPECT_EQ(c.t.successor({1, 1}), (Index{1, 2}));
    EXPECT_EQ(c.exact_limit({1, 1}), 0.5);
    EXPECT_EQ(c.exact_limit({2, 1}), 2.0 / 3.0);
}

TEST(DiagonalConstruction, PowerErrorWithinBound) {
    const auto c = lemma_diagonal_construction(seq("j/(j+1)"));
    const double err = orbit_power_error(c.t, {1, 1}, 4, c.exact_limit({1, 1}));
    // ‖T^4 e_{1,1}‖² = α_{1,1}/α_{1,5} = (1/2)(16/15).
    EXPECT_NEAR(err, 0.5 * (16.0 / 15.0) - 0.5, 1e-15);
    EXPECT_LE(err, c.bound(4));
    EXPECT_EQ(c.bound(4), 0.25);
}

TEST(DiagonalConstruction, OrbitLimitReproducesEigenvalues) {
    const auto c = lemma_diagonal_construction(seq("j/(j+1)"));
    for (std::int64_t l = 1; l <= 3; ++l)
        for (std::int64_t m = 1; m <= 3; ++m)
            EXPECT_NEAR(asymptotic_limit_orbit(c.t, {l, m}), c.exact_limit({l, m}), 1e-10) << l << "," << m;
}

TEST(DiagonalConstruction, GridConvergenceWithinBound) {
    const auto c = lemma_diagonal_construction(seq("1 - 1/(j+1)^2"));
    const Truncation tr = truncate(c.t, Window::box(c.t.universe(), 1, 12, 1, 12, 12));
    const auto r = grid_convergence(c.t, tr, c.exact_limit, 10, [&](std::int64_t n) { return c.bound(n); });
    EXPECT_TRUE(r.within_bounds());
    EXPECT_TRUE(r.errors_non_increasing());
    EXPECT_GT(r.steps.front().error, 0.0);
}

TEST(DiagonalConstruction, RejectsNonMonotone) {
    EXPECT_EQ(kind_of([] { lemma_diagonal_construction(EigenvalueSequence::from_list({0.5, 0.4, 0.6})); }),
              ErrorKind::SpecViolation);
    EXPECT_EQ(kind_of([] { lemma_diagonal_construction(seq("1/(j+1)")); }), ErrorKind::SpecViolation);
    EXPECT_EQ(kind_of([] { lemma_diagonal_construction(seq("j/j")); }), ErrorKind::SpecViolation);
}

TEST(DiagonalConstruction, ShortListRunsOutLazily) {
    const auto c = lemma_diagonal_construction(EigenvalueSequence::from_list({0.5, 0.6, 0.7}));
    EXPECT_NEAR(c.t.weight({1, 1}), std::sqrt(0.5 / 0.7), 1e-15);
    EXPECT_EQ(kind_of([&] { c.t.weight({1, 2}); }), ErrorKind::SpecViolation);
}

TEST(HybridConstruction, ColumnZero) {
    const auto c = hybrid_construction({0.1, 0.0}, 0.5, seq("(j+1)/(j+2)"));
    const double first = 2.0 / 3.0;  // α_{1,1} = λ_1
    EXPECT_NEAR(c.t.weight({1, 0}), std::sqrt(0.1 / first), 1e-15);
    EXPECT_EQ(c.t.weight({2, 0}), 0.0);
    EXPECT_EQ(c.exact_limit({1, 0}), 0.1);
    EXPECT_EQ(c.exact_limit({2, 0}), 0.0);
    EXPECT_FALSE(c.t.valid({3, 0}));
    EXPECT_TRUE(c.t.valid({3, 1}));
    EXPECT_NEAR(asymptotic_limit_orbit(c.t, {1, 0}), 0.1, 1e-10);
    EXPECT_EQ(asymptotic_limit_orbit(c.t, {2, 0}), 0.0);
}

TEST(HybridConstruction, ErrorWithinBound) {
    const auto c = hybrid_construction({0.1, 0.0, 0.3}, 0.5, seq("(j+1)/(j+2)"));
    const Truncation tr = truncate(c.t, Window::box(c.t.universe(), 1, 14, 0, 14, 14));
    const auto r = grid_convergence(c.t, tr, c.exact_limit, 12, [&](std::int64_t n) { return c.bound(n); });
    EXPECT_TRUE(r.within_bounds());
    EXPECT_LE(r.steps[9].error, 1.0 / (11.0 / 12.0) - 1.0 + 1e-12);
}

TEST(HybridConstruction, RejectsBadSpecs) {
    EXPECT_EQ(kind_of([] { hybrid_construction({0.6}, 0.5, seq("(j+1)/(j+2)")); }), ErrorKind::SpecViolation);
    EXPECT_EQ(kind_of([] { hybrid_construction({0.1}, 0.9, seq("(j+1)/(j+2)")); }), ErrorKind::SpecViolation);
    EXPECT_EQ(kind_of([] { hybrid_construction({0.1}, 1.0, seq("(j+1)/(j+2)")); }), ErrorKind::SpecViolation);
}

TEST(Mobius, ZeroParameterIsIdentityMap) {
    Lcg64 rng(20);
    const DenseContraction t(random_contraction(rng, 4));
    EXPECT_LE(operator_norm(mobius(t, MobiusParam(0.0)).matrix() - t.matrix()), 1e-14);
}

TEST(Mobius, SendsAToZero) {
    const Complex a(0.3, 0.4);
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = a;
    d(1, 1) = 0.2;
    const auto m = mobius(DenseContraction(d), MobiusParam(a));
    EXPECT_LE(std::abs(m.matrix()(0, 0)), 1e-15);
    EXPECT_LE(std::abs(m.matrix()(1, 1) - (0.2 - a) / (1.0 - std::conj(a) * 0.2)), 1e-15);
}

TEST(Mobius, InvolutionAndContractivity) {
    Lcg64 rng(21);
    for (int i = 0; i < 20; ++i) {
        const DenseContraction t(random_contraction_with_unitary_part(rng, 5, rng.integer(0, 5)), 1e-8);
        const Complex a = std::polar(rng.uniform(0.0, 0.9), rng.uniform(0.0, 6.28));
        const auto m = mobius(t, MobiusParam(a));
        EXPECT_LE(operator_norm(m.matrix()), 1.0 + 1e-9);
        EXPECT_LE(operator_norm(mobius(m, MobiusParam(-a)).matrix() - t.matrix()), 1e-9);
    }
}

TEST(Mobius, ParameterRange) {
    EXPECT_NO_THROW(MobiusParam(0.99));
    EXPECT_EQ(kind_of([] { MobiusParam(1.0 - 1e-10); }), ErrorKind::SpecViolation);
    EXPECT_EQ(kind_of([] { MobiusParam(Complex(0.0, 1.0)); }), ErrorKind::SpecViolation);
}

TEST(Blaschke, Powers) {
    Lcg64 rng(22);
    const DenseContraction t(random_contraction(rng, 4));
    EXPECT_LE(operator_norm(blaschke_product(t, 1.0, {MobiusParam(0.0)}).matrix() - t.matrix()), 1e-14);
    EXPECT_LE(operator_norm(blaschke_product(t, 1.0, {MobiusParam(0.0), MobiusParam(0.0)}).matrix() -
                            t.matrix() * t.matrix()),
              1e-14);
}

TEST(Blaschke, ScalarOracle) {
    const Complex z(0.1, -0.6);
    const Complex c = std::polar(1.0, 0.7);
    const Complex a1(0.5, 0.2);
    const Complex a2(-0.3, 0.0);
    auto b = [](Complex a, Complex x) { return (x - a) / (1.0 - std::conj(a) * x); };
    const auto got = blaschke_product(DenseContraction(scalar(z)), c, {MobiusParam(a1), MobiusParam(a2)});
    EXPECT_LE(std::abs(got.matrix()(0, 0) - c * b(a1, z) * b(a2, z)), 1e-15);
}

TEST(Blaschke, RejectsNonUnimodularConstant) {
    EXPECT_EQ(kind_of([] { blaschke_product(DenseContraction(identity(2) * 0.5), 0.5, {}); }),
              ErrorKind::SpecViolation);
}

TEST(GTransform, MapsAtoms) {
    SpectrumSpec s{{{0.5, Cardinality::count(2)}, {1.0, Cardinality::count(1)}, {0.0, Cardinality::aleph0()}}, {}};
    const auto out = g_transform(s, parse("t^2", 't'));
    EXPECT_EQ(out.atoms[0].value, 0.25);
    EXPECT_EQ(out.atoms[0].multiplicity, Cardinality::count(2));
    EXPECT_EQ(out.atoms[1].value, 1.0);
    EXPECT_EQ(out.atoms[2].value, 0.0);
}

TEST(GTransform, IdentityKeepsTails) {
    SpectrumSpec s{{{0.3, Cardinality::count(1)}}, {Tail{parse("j/(j+1)"), 2, true}}};
    const auto out = g_transform(s, parse("t", 't'));
    EXPECT_EQ(out.atoms[0].value, 0.3);
    for (std::int64_t j : {2, 10, 1000}) EXPECT_EQ(out.tails[0].at(j), s.tails[0].at(j));
    EXPECT_EQ(out.tails[0].start, 2);
}

TEST(GTransform, PreservesAdmissibility) {
    SpectrumSpec s{{}, {Tail{parse("j/(j+1)"), 1, true}}};
    const auto out = g_transform(s, parse("sqrt(t)", 't'));
    EXPECT_NEAR(out.tails[0].at(1), std::sqrt(0.5), 1e-15);
    EXPECT_EQ(check_admissible(out).verdict_case, VerdictCase::EssentialSpectralRadiusOne);
}

TEST(GTransform, RejectsBadFunctions) {
    const SpectrumSpec s{{{0.5, Cardinality::count(1)}}, {}};
    for (const char* g : {"t + 0.1", "t/2", "5*t - 12*t^2 + 8*t^3", "t^400"}) {
        try {
            g_transform(s, parse(g, 't'));
            ADD_FAILURE() << g;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::NotAdmissibleTransform) << g;
            EXPECT_NE(std::string(e.what()).find("sampled at 10000 points"), std::string::npos);
        }
    }
}
