// The Euler characteristic valuation: geometric and recursive pipelines.
#include "doctest.h"

#include <vector>

#include "mvchi/errors.hpp"
#include "mvchi/valuation.hpp"
#include "pl1d_oracle.hpp"

using namespace mvchi;

namespace {

FormulaPtr F(const char* s) { return parse_formula(s); }

// |2x - 1|
const char* kAbs = "(x1*x1) | !(x1+x1)";
// max(|2x-1|, |2y-1|): support is the square minus its center
const char* kSquareMinusCenter = "((x1*x1) | !(x1+x1)) | ((x2*x2) | !(x2+x2))";

long long E_both(const char* phi, int d) {
    return euler_valuation(F(phi), nullptr, d, Method::Both).E;
}

} // namespace

TEST_CASE("named instances, both methods agreeing") {
    CHECK(E_both("0", 1) == 0);
    CHECK(E_both("1", 1) == 1);
    CHECK(E_both("1", 2) == 1);
    CHECK(E_both("x1", 1) == 1);
    CHECK(E_both(kAbs, 1) == 2);
    CHECK(E_both(kSquareMinusCenter, 2) == 0);
    CHECK(E_both("x1 + x2", 2) == 1);
}

TEST_CASE("the constant 1 in three variables") {
    CHECK(euler_valuation(F("1"), nullptr, 3, Method::Both).E == 1);
}

TEST_CASE("theory restriction: x1 over the two-point theory") {
    auto r = euler_valuation(F("x1"), F("x1 | !x1"), 1, Method::Both);
    CHECK(r.E == 1);
    CHECK(r.theory.has_value());
    CHECK(*r.theory == "x1 | !x1");
    CHECK_FALSE(r.inconsistent_theory);
    // the support within P = {0, 1} is the single model x = 1
    CHECK(r.oneset_faces == std::vector<long long>{1, 0});
}

TEST_CASE("n bound from hat decompositions") {
    auto id = linearize_formula(F("x1"), 1);
    CHECK(n_bound(hat_decomposition(id)) == 1);

    Triangulation split = blow_up(kuhn_triangulation(1), 0, 1);
    auto tent = hat_function(split, 2);
    CHECK(n_bound(hat_decomposition(tent)) == 2);

    HatDecomposition manual{split, {HatTerm{2, Int(3), Int(2)}}};
    CHECK(n_bound(manual) == 1);

    HatDecomposition empty{split, {}};
    CHECK_THROWS_AS((void)n_bound(empty), DomainError);
}

TEST_CASE("zero function: flagged report with E = 0") {
    auto r = euler_valuation(F("x1 * !x1 * !x1"), nullptr, 1, Method::Auto);
    CHECK(r.E == 0);
    CHECK(r.zero_function);
    CHECK(r.n_bound == 0);
    CHECK(r.oneset_faces == std::vector<long long>{0, 0});
    auto j = report_to_json(r);
    CHECK(j["flags"]["zero_function"] == true);
    CHECK(j["E"] == 0);
}

TEST_CASE("inconsistent theory: flagged report with E = 0") {
    auto r = euler_valuation(F("x1"), F("0"), 1, Method::Geometric);
    CHECK(r.E == 0);
    CHECK(r.inconsistent_theory);
    CHECK_FALSE(r.zero_function);
    CHECK(r.n_bound == 0);
    auto j = report_to_json(r);
    CHECK(j["flags"]["inconsistent_theory"] == true);
    CHECK(j["method"] == "geometric");
}

TEST_CASE("report JSON: field order, exact values") {
    auto r = euler_valuation(F("x1"), nullptr, 1, Method::Geometric);
    CHECK(report_to_json(r).dump() ==
          "{\"formula\":\"x1\",\"theory\":null,\"dim\":1,\"method\":\"geometric\","
          "\"E\":1,\"n_bound\":1,\"triangulation\":{\"vertices\":3,"
          "\"maximal_simplexes\":2,\"max_denominator\":\"2\"},\"oneset_faces\":[2,1]}");
}

TEST_CASE("stabilization: chi(oneset(k.a)) is constant past the bound") {
    auto xs = stabilization_check(F("x1"), 1, Int(2), Int(5));
    REQUIRE(xs.size() == 4);
    for (const auto& [k, chi] : xs) CHECK(chi == 1);

    auto abs2 = stabilization_check(F(kAbs), 1, Int(2), Int(5));
    for (const auto& [k, chi] : abs2) CHECK(chi == 2);

    auto zero = stabilization_check(F("0"), 1);
    REQUIRE(zero.size() == 4);
    CHECK(zero.front().first == 1);
    for (const auto& [k, chi] : zero) CHECK(chi == 0);

    auto def = stabilization_check(F("x1"), 1);
    CHECK(def.front().first == 2); // n = 1
    for (const auto& [k, chi] : def) CHECK(chi == 1);

    CHECK_THROWS_AS((void)stabilization_check(F("x1"), 1, Int(0), Int(1)), DomainError);
}

TEST_CASE("rep-level methods survive further refinement of the carrier") {
    auto rep = linearize_formula(F(kAbs), 1);
    CHECK(euler_geometric_rep(rep) == 2);
    CHECK(euler_recursive_rep(rep) == 2);

    SplitMix64 rng(404);
    Triangulation t = rep.triangulation;
    std::vector<Rat> vals = rep.values;
    for (int i = 0; i < 4; ++i) {
        auto edges = all_edges(t);
        auto e = edges[static_cast<std::size_t>(
            rng.below(static_cast<std::uint64_t>(edges.size())))];
        const Int di = t.vertex(e.first).den, dj = t.vertex(e.second).den;
        Rat mid = (Rat(di) * vals[static_cast<std::size_t>(e.first)] +
                   Rat(dj) * vals[static_cast<std::size_t>(e.second)]) /
                  Rat(di + dj);
        t = blow_up(std::move(t), e.first, e.second);
        vals.push_back(mid);
    }
    McNaughtonRep refined{std::move(t), std::move(vals)};
    CHECK(euler_geometric_rep(refined) == 2);
    CHECK(euler_recursive_rep(refined) == 2);
}

TEST_CASE("every hat of random regular triangulations has E = 1") {
    for (int d = 1; d <= 2; ++d) {
        SplitMix64 rng(7100 + static_cast<std::uint64_t>(d));
        for (int trial = 0; trial < 4; ++trial) {
            Triangulation t = kuhn_triangulation(d);
            int blows = 1 + static_cast<int>(rng.below(4));
            for (int i = 0; i < blows; ++i) {
                auto edges = all_edges(t);
                auto e = edges[static_cast<std::size_t>(
                    rng.below(static_cast<std::uint64_t>(edges.size())))];
                t = blow_up(std::move(t), e.first, e.second);
            }
            for (int v = 0; v < static_cast<int>(t.vertex_count()); ++v) {
                auto hat = hat_function(t, v);
                CHECK(euler_geometric_rep(hat) == 1);
                CHECK(euler_recursive_rep(hat) == 1);
            }
        }
    }
}

TEST_CASE("valuation laws on random formula pairs") {
    FormulaGenOptions gopts;
    gopts.max_size = 10;
    for (int d = 1; d <= 2; ++d) {
        gopts.vars = d;
        SplitMix64 gen(8200 + static_cast<std::uint64_t>(d));
        for (int trial = 0; trial < 8; ++trial) {
            auto p = random_formula(gen, gopts);
            auto q = random_formula(gen, gopts);
            long long e_p = euler_valuation(p, nullptr, d, Method::Both).E;
            long long e_q = euler_valuation(q, nullptr, d, Method::Both).E;
            long long e_join =
                euler_valuation(Formula::join(p, q), nullptr, d, Method::Both).E;
            long long e_meet =
                euler_valuation(Formula::meet(p, q), nullptr, d, Method::Both).E;
            long long e_oplus =
                euler_valuation(Formula::oplus(p, q), nullptr, d, Method::Both).E;
            CHECK(e_oplus == e_join);          // idempotency
            CHECK(e_join + e_meet == e_p + e_q); // additivity
        }
    }
}

TEST_CASE("one-variable formulas match the breakpoint oracle") {
    // sanity-pin the oracle itself first
    CHECK(pl1d::support_components(pl1d::from_formula(F("0"))) == 0);
    CHECK(pl1d::support_components(pl1d::from_formula(F("1"))) == 1);
    CHECK(pl1d::support_components(pl1d::from_formula(F("x1"))) == 1);
    CHECK(pl1d::support_components(pl1d::from_formula(F("x1 & !x1"))) == 1);
    CHECK(pl1d::support_components(pl1d::from_formula(F(kAbs))) == 2);

    FormulaGenOptions gopts;
    gopts.vars = 1;
    gopts.max_size = 14;
    SplitMix64 gen(9300);
    for (int trial = 0; trial < 25; ++trial) {
        auto f = random_formula(gen, gopts);
        long long expected = pl1d::support_components(pl1d::from_formula(f));
        CHECK(euler_valuation(f, nullptr, 1, Method::Both).E == expected);
    }
}

TEST_CASE("the recursion node budget is enforced") {
    auto rep = linearize_formula(F(kAbs), 1);
    ValuationOptions opts;
    opts.max_recursion_nodes = 1;
    CHECK_THROWS_AS((void)euler_recursive_rep(rep, opts), ResourceLimitError);
}

TEST_CASE("dimension must cover the variables") {
    CHECK_THROWS_AS((void)euler_valuation(F("x2"), nullptr, 1, Method::Geometric),
                    DomainError);
}
