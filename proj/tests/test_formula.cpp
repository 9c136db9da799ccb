// Formula parsing, printing, evaluation, and the random generator.
#include "doctest.h"

#include "mvchi/formula.hpp"
#include "mvchi/errors.hpp"
#include "mvchi/rng.hpp"

#include <functional>

using namespace mvchi;

TEST_CASE("parser respects precedence and associativity") {
    auto f = parse_formula("x1 + !x1");
    CHECK(f->kind == NodeKind::OPlus);
    CHECK(f->left->kind == NodeKind::Var);
    CHECK(f->right->kind == NodeKind::Neg);

    auto g = parse_formula("2.x1");
    CHECK(g->kind == NodeKind::Scalar);
    CHECK(g->scalar == 2);
    CHECK(g->left->kind == NodeKind::Var);

    auto h = parse_formula("x1 * x2 | 0");
    CHECK(h->kind == NodeKind::Join);
    CHECK(h->left->kind == NodeKind::OTimes);
    CHECK(h->right->kind == NodeKind::Const0);

    // binary operators associate to the left
    auto m = parse_formula("x1 - x2 - x3");
    CHECK(m->kind == NodeKind::Minus);
    CHECK(m->left->kind == NodeKind::Minus);
    CHECK(m->right->kind == NodeKind::Var);
    CHECK(m->right->var == 3);

    // precedence chain: | loosest, then &, -, +, *
    auto p = parse_formula("x1 | x2 & x3 - x4 + x5 * x6");
    CHECK(p->kind == NodeKind::Join);
    CHECK(p->right->kind == NodeKind::Meet);
    CHECK(p->right->right->kind == NodeKind::Minus);
    CHECK(p->right->right->right->kind == NodeKind::OPlus);
    CHECK(p->right->right->right->right->kind == NodeKind::OTimes);
}

TEST_CASE("parser reports positions for malformed input") {
    CHECK_THROWS_AS(parse_formula("x0"), ParseError);
    CHECK_THROWS_AS(parse_formula("x"), ParseError);
    CHECK_THROWS_AS(parse_formula("2"), ParseError);
    CHECK_THROWS_AS(parse_formula("0.x1"), ParseError);
    CHECK_THROWS_AS(parse_formula("x1 +"), ParseError);
    CHECK_THROWS_AS(parse_formula("(x1"), ParseError);
    CHECK_THROWS_AS(parse_formula("x1 x2"), ParseError);
    CHECK_THROWS_AS(parse_formula(""), ParseError);
    CHECK_THROWS_AS(parse_formula("x1 ? x2"), ParseError);

    try {
        parse_formula("x1 + @");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position == 5);
    }
}

TEST_CASE("printer emits minimal parentheses") {
    CHECK(print_formula(Formula::oplus(Formula::variable(1),
                                       Formula::neg(Formula::variable(1)))) == "x1 + !x1");
    CHECK(print_formula(Formula::constant0()) == "0");
    CHECK(print_formula(Formula::scalar_mult(3, Formula::variable(2))) == "3.x2");
    CHECK(print_formula(parse_formula("!(x1 + x2)")) == "!(x1 + x2)");
    CHECK(print_formula(parse_formula("(x1 | x2) & x3")) == "(x1 | x2) & x3");
    CHECK(print_formula(parse_formula("x1 | (x2 & x3)")) == "x1 | x2 & x3");
    CHECK(print_formula(parse_formula("x1 - (x2 - x3)")) == "x1 - (x2 - x3)");
    CHECK(print_formula(parse_formula("2.3.x1")) == "2.3.x1");
}

TEST_CASE("print/parse roundtrip on random formulas") {
    SplitMix64 rng(2024);
    FormulaGenOptions opts;
    opts.vars = 3;
    opts.max_size = 30;
    for (int trial = 0; trial < 500; ++trial) {
        auto f = random_formula(rng, opts);
        auto g = parse_formula(print_formula(f));
        CHECK(structurally_equal(f, g));
    }
}

TEST_CASE("evaluation follows Lukasiewicz semantics") {
    CHECK(evaluate(parse_formula("!x1"), {Rat(1, 3)}) == Rat(2, 3));
    CHECK(evaluate(parse_formula("x1 + x1"), {Rat(3, 4)}) == Rat(1));
    CHECK(evaluate(parse_formula("x1 * x2"), {Rat(3, 4), Rat(1, 2)}) == Rat(1, 4));
    CHECK(evaluate(parse_formula("x1 | x2"), {Rat(1, 3), Rat(1, 2)}) == Rat(1, 2));
    CHECK(evaluate(parse_formula("x1 & x2"), {Rat(1, 3), Rat(1, 2)}) == Rat(1, 3));
    CHECK(evaluate(parse_formula("x1 - x2"), {Rat(1, 3), Rat(1, 2)}) == Rat(0));
    CHECK(evaluate(parse_formula("x1 - x2"), {Rat(1, 2), Rat(1, 3)}) == Rat(1, 6));
    CHECK(evaluate(parse_formula("3.x1"), {Rat(1, 4)}) == Rat(3, 4));
    CHECK(evaluate(parse_formula("3.x1"), {Rat(1, 2)}) == Rat(1));
    CHECK(evaluate(parse_formula("0"), {}) == Rat(0));
    CHECK(evaluate(parse_formula("1"), {}) == Rat(1));
}

TEST_CASE("evaluation validates its point argument") {
    CHECK_THROWS_AS(evaluate(parse_formula("x1 + x2"), {Rat(1, 2)}), DomainError);
    CHECK_THROWS_AS(evaluate(parse_formula("x1"), {Rat(3, 2)}), DomainError);
    // extra coordinates beyond the formula's variables are fine
    CHECK(evaluate(parse_formula("x1"), {Rat(1, 2), Rat(1)}) == Rat(1, 2));
}

TEST_CASE("MV identities hold at random rational points") {
    SplitMix64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Rat> p{rng.unit_rational(20), rng.unit_rational(20)};
        auto at = [&](const char* s) { return evaluate(parse_formula(s), p); };
        CHECK(at("!!x1") == at("x1"));
        CHECK(at("x1 + x2") == at("!(!x1 * !x2)"));
        CHECK(at("x1 - x2") == at("x1 * !x2"));
        CHECK(at("x1 | x2") == at("(x1 - x2) + x2"));
        CHECK(at("x1 & x2") == at("!(!x1 | !x2)"));
    }
}

TEST_CASE("scalar evaluation matches its additive expansion") {
    SplitMix64 rng(99);
    for (int n = 1; n <= 8; ++n) {
        auto f = Formula::scalar_mult(n, Formula::otimes(Formula::variable(1),
                                                         Formula::variable(2)));
        auto g = expand_scalars(f);
        CHECK(max_var_index(g) == 2);
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<Rat> p{rng.unit_rational(16), rng.unit_rational(16)};
            CHECK(evaluate(f, p) == evaluate(g, p));
        }
    }
}

TEST_CASE("expand_scalars removes every scalar node") {
    auto f = parse_formula("2.(x1 | 3.x2) - 4.x1");
    auto g = expand_scalars(f);
    std::function<bool(const FormulaPtr&)> clean = [&](const FormulaPtr& h) {
        if (!h) return true;
        if (h->kind == NodeKind::Scalar) return false;
        return clean(h->left) && clean(h->right);
    };
    CHECK(clean(g));
    SplitMix64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rat> p{rng.unit_rational(10), rng.unit_rational(10)};
        CHECK(evaluate(f, p) == evaluate(g, p));
    }
}

TEST_CASE("random generator respects the size budget and is deterministic") {
    FormulaGenOptions opts;
    opts.vars = 2;
    opts.max_size = 25;
    SplitMix64 a(31337), b(31337);
    for (int trial = 0; trial < 200; ++trial) {
        auto f = random_formula(a, opts);
        auto g = random_formula(b, opts);
        CHECK(structurally_equal(f, g));
        CHECK(node_count(f) <= 25);
        CHECK(max_var_index(f) <= 2);
    }
}
