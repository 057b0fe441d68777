#include <gtest/gtest.h>

#include <cmath>

#include "asymlim/expr.hpp"
#include "asymlim/random.hpp"

using namespace asymlim;
using K = ExprAst::Kind;

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

// Random well-formed expression text.
std::string random_text(Lcg64& rng, int depth) {
    if (depth == 0 || rng.uniform() < 0.3) {
        switch (rng.integer(0, 2)) {
        case 0: return "j";
        case 1: return std::to_string(rng.integer(0, 9));
        default: return std::to_string(rng.integer(0, 9)) + "." + std::to_string(rng.integer(0, 99));
        }
    }
    switch (rng.integer(0, 6)) {
    case 0: return "(" + random_text(rng, depth - 1) + ")";
    case 1: return "-" + random_text(rng, depth - 1);
    case 2: return "sqrt(" + random_text(rng, depth - 1) + ")";
    default: {
        const char ops[] = {'+', '-', '*', '/', '^'};
        return random_text(rng, depth - 1) + " " + ops[rng.integer(0, 4)] + " " + random_text(rng, depth - 1);
    }
    }
}

}  // namespace

TEST(Parse, Fraction) {
    const auto e = parse("j/(j+1)");
    const auto& r = e.root();
    ASSERT_EQ(r->kind, K::Binary);
    EXPECT_EQ(r->op, BinaryOp::Div);
    EXPECT_EQ(r->lhs->kind, K::Variable);
    EXPECT_EQ(r->rhs->op, BinaryOp::Add);
    EXPECT_EQ(r->rhs->rhs->value, 1.0);
}

TEST(Parse, SqrtWeight) {
    const auto r = parse("sqrt(j^2-1)/j").root();
    ASSERT_EQ(r->op, BinaryOp::Div);
    ASSERT_EQ(r->lhs->kind, K::Sqrt);
    const auto& inner = r->lhs->lhs;
    EXPECT_EQ(inner->op, BinaryOp::Sub);
    EXPECT_EQ(inner->lhs->op, BinaryOp::Pow);
    EXPECT_EQ(r->rhs->kind, K::Variable);
}

TEST(Parse, NegatedExponent) {
    const auto r = parse("1 - 2^(-j)").root();
    ASSERT_EQ(r->op, BinaryOp::Sub);
    ASSERT_EQ(r->rhs->op, BinaryOp::Pow);
    EXPECT_EQ(r->rhs->rhs->kind, K::Negate);
    EXPECT_EQ(r->rhs->rhs->lhs->kind, K::Variable);
}

TEST(Parse, WhitespaceInsensitive) {
    EXPECT_EQ(parse("  j /( j + 1 ) "), parse("j/(j+1)"));
}

TEST(Parse, SyntaxErrors) {
    try {
        parse("j/(j+1");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SyntaxError);
        EXPECT_EQ(e.offset(), 6u);
        EXPECT_EQ(e.expected(), std::vector<std::string>{"')'"});
    }
    try {
        parse("2 * k");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.offset(), 4u);
        EXPECT_EQ(e.expected().size(), 5u);
    }
    EXPECT_EQ(kind_of([] { parse(""); }), ErrorKind::SyntaxError);
    EXPECT_EQ(kind_of([] { parse("1.") ; }), ErrorKind::SyntaxError);
    EXPECT_EQ(kind_of([] { parse("j j"); }), ErrorKind::SyntaxError);
    EXPECT_EQ(kind_of([] { parse("jj"); }), ErrorKind::SyntaxError);
}

TEST(Parse, OtherVariable) {
    const auto g = parse("t^2", 't');
    EXPECT_EQ(eval_real(g, 0.5), 0.25);
    EXPECT_EQ(kind_of([] { parse("t^2"); }), ErrorKind::SyntaxError);
}

TEST(Eval, Examples) {
    EXPECT_EQ(eval(parse("j/(j+1)"), 1), 0.5);
    EXPECT_NEAR(eval(parse("sqrt(j^2-1)/j"), 2), std::sqrt(3.0) / 2.0, 1e-15);
    EXPECT_EQ(eval(parse("1 - 2^(-j)"), 3), 0.875);
}

TEST(Eval, Precedence) {
    EXPECT_EQ(eval(parse("2+3*4"), 1), 14.0);
    EXPECT_EQ(eval(parse("2^3^2"), 1), 512.0);
    EXPECT_EQ(eval(parse("-2^2"), 1), 4.0);  // unary minus is an atom
    EXPECT_EQ(eval(parse("8/4/2"), 1), 1.0);
    EXPECT_EQ(eval(parse("8-4-2"), 1), 2.0);
}

TEST(Eval, Errors) {
    try {
        eval(parse("1/(j-1)"), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DivisionByZero);
        EXPECT_NE(std::string(e.what()).find("(j - 1)"), std::string::npos);
    }
    try {
        eval(parse("sqrt(1 - j)"), 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DomainError);
        EXPECT_NE(std::string(e.what()).find("sqrt((1 - j))"), std::string::npos);
    }
    EXPECT_EQ(kind_of([] { eval(parse("(-1)^0.5"), 1); }), ErrorKind::DomainError);
}

TEST(Print, CanonicalForm) {
    EXPECT_EQ(print(parse("j/(j+1)")), "(j / (j + 1))");
    EXPECT_EQ(print(parse("-j")), "(-j)");
    EXPECT_EQ(print(parse("sqrt(0.25)")), "sqrt(0.25)");
}

TEST(Print, ParsePrintFixpoint) {
    Lcg64 rng(42);
    for (int i = 0; i < 500; ++i) {
        const auto e = parse(random_text(rng, 5));
        const auto again = parse(print(e));
        EXPECT_EQ(again, e) << print(e);
        EXPECT_EQ(print(again), print(e));
    }
}

TEST(Compose, SubstitutesVariable) {
    const auto g = parse("t^2", 't');
    const auto f = parse("j/(j+1)");
    const auto h = compose(g, f);
    EXPECT_EQ(h.variable(), 'j');
    EXPECT_EQ(eval(h, 1), 0.25);
    EXPECT_EQ(compose(parse("t", 't'), f), f);
}
