#include <gtest/gtest.h>

#include "asymlim/admissibility.hpp"
#include "asymlim/asymptotics.hpp"
#include "asymlim/random.hpp"

using namespace asymlim;

namespace {

SpectrumSpec from(const std::string& text) { return spectrum_from_json(nlohmann::json::parse(text)); }

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

}  // namespace

TEST(DimAbove, Examples) {
    EXPECT_EQ(dim_above(from(R"({"atoms": [{"value": 1, "mult": 3}]})"), 0.5), Cardinality::count(3));
    EXPECT_EQ(dim_above(from(R"js({"tails": [{"expr": "j/(j+1)", "increasing": true}]})js"), 0.99),
              Cardinality::aleph0());
    EXPECT_EQ(dim_above(from(R"({"atoms": [{"value": 0.3, "mult": 5}]})"), 0.5), Cardinality::count(0));
    EXPECT_EQ(dim_above(from(R"({"atoms": [{"value": 0.3, "mult": 5}, {"value": 0.7, "mult": "inf"}]})"), 0.5),
              Cardinality::aleph0());
}

TEST(DimAbove, DecreasingTailCountsFinitely) {
    // 1/(j+1) > 0.2 exactly for j = 1..3.
    EXPECT_EQ(dim_above(from(R"js({"tails": [{"expr": "1/(j+1)"}]})js"), 0.2), Cardinality::count(3));
}

TEST(DimAbove, RejectsDeltaOutsideRange) {
    const auto s = from(R"({"atoms": [{"value": 1}]})");
    EXPECT_EQ(kind_of([&] { dim_above(s, 1.0); }), ErrorKind::SpecViolation);
    EXPECT_EQ(kind_of([&] { dim_above(s, -0.1); }), ErrorKind::SpecViolation);
}

TEST(DimAbove, OscillatingTailIsUndecidable) {
    const auto s = from(R"js({"tails": [{"expr": "0.5 + 0.4*(-1)^j"}]})js");
    EXPECT_EQ(kind_of([&] { dim_above(s, 0.5); }), ErrorKind::Undecidable);
    EXPECT_EQ(dim_above(s, 0.95), Cardinality::count(0));
}

TEST(CheckAdmissible, Verdicts) {
    const auto frp = check_admissible(from(R"({"atoms": [{"value": 1, "mult": 2}, {"value": 0, "mult": "inf"}]})"));
    EXPECT_TRUE(frp.admissible);
    EXPECT_EQ(frp.verdict_case, VerdictCase::FiniteRankProjection);

    const auto half = check_admissible(from(R"({"atoms": [{"value": 0.5}]})"));
    EXPECT_FALSE(half.admissible);
    EXPECT_EQ(half.verdict_case, VerdictCase::Inadmissible);
    ASSERT_TRUE(half.witness_delta);
    EXPECT_EQ(*half.witness_delta, 0.75);

    const auto tail = check_admissible(from(R"js({"tails": [{"expr": "j/(j+1)", "increasing": true}]})js"));
    EXPECT_TRUE(tail.admissible);
    EXPECT_EQ(tail.verdict_case, VerdictCase::EssentialSpectralRadiusOne);

    const auto zero = check_admissible(from(R"({"atoms": [{"value": 0, "mult": "inf"}]})"));
    EXPECT_EQ(zero.verdict_case, VerdictCase::Zero);
    EXPECT_EQ(check_admissible(from("{}")).verdict_case, VerdictCase::Zero);

    const auto ones = check_admissible(from(R"({"atoms": [{"value": 1, "mult": "inf"}, {"value": 0.2}]})"));
    EXPECT_TRUE(ones.admissible);
    EXPECT_EQ(ones.verdict_case, VerdictCase::EssentialSpectralRadiusOne);
}

TEST(CheckAdmissible, TailBoundedAwayFromOne) {
    const auto v = check_admissible(from(R"js({"tails": [{"expr": "0.5 - 1/(j+3)", "increasing": true}]})js"));
    EXPECT_FALSE(v.admissible);
    ASSERT_TRUE(v.witness_delta);
    EXPECT_GT(*v.witness_delta, 0.5);
    EXPECT_LT(*v.witness_delta, 1.0);
}

TEST(CheckAdmissible, InvalidSpec) {
    EXPECT_EQ(kind_of([] { check_admissible(from(R"({"atoms": [{"value": 2}]})")); }), ErrorKind::SpecViolation);
}

TEST(Trichotomy, Examples) {
    EXPECT_EQ(trichotomy_of(diagonal_matrix({1, 0})).verdict_case, VerdictCase::FiniteRankProjection);
    EXPECT_EQ(trichotomy_of(ComplexMatrix::Zero(3, 3)).verdict_case, VerdictCase::Zero);
    const auto v = trichotomy_of(diagonal_matrix({1, 0.5}));
    EXPECT_FALSE(v.admissible);
    EXPECT_EQ(*v.witness_delta, 0.75);
}

TEST(Trichotomy, Errors) {
    ComplexMatrix n = ComplexMatrix::Zero(2, 2);
    n(0, 1) = 1.0;
    EXPECT_EQ(kind_of([&] { trichotomy_of(n); }), ErrorKind::NotHermitian);
    EXPECT_EQ(kind_of([] { trichotomy_of(diagonal_matrix({1.5, 0})); }), ErrorKind::NotContraction);
    EXPECT_EQ(kind_of([] { trichotomy_of(diagonal_matrix({-0.5, 0})); }), ErrorKind::NotContraction);
}

TEST(Trichotomy, DenseLimitsAreAdmissible) {
    Lcg64 rng(30);
    for (int i = 0; i < 30; ++i) {
        const Eigen::Index n = rng.integer(2, 7);
        const Eigen::Index k = rng.integer(0, n);
        const DenseContraction t(random_contraction_with_unitary_part(rng, n, k), 1e-8);
        const DenseLimit lim = asymptotic_limit_dense(t);
        ASSERT_TRUE(lim.report.converged);
        const auto v = trichotomy_of(lim.limit, 1e-6);
        EXPECT_TRUE(v.admissible) << v.witness;
        EXPECT_EQ(v.verdict_case, k == 0 ? VerdictCase::Zero : VerdictCase::FiniteRankProjection);
    }
}
