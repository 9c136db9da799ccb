#include "doctest.h"

#include <algorithm>
#include <vector>

#include "mvchi/errors.hpp"
#include "mvchi/linearize.hpp"
#include "mvchi/rng.hpp"

using namespace mvchi;

namespace {

HomogeneousPoint pt(std::initializer_list<Rat> coords) {
    return to_homogeneous(std::vector<Rat>(coords));
}

Simplex seg(const Rat& a, const Rat& b) {
    return Simplex({pt({a}), pt({b})});
}

bool has_vertex(const Triangulation& t, std::initializer_list<Rat> coords) {
    return t.find_vertex(to_homogeneous(std::vector<Rat>(coords))).has_value();
}

std::vector<Rat> values_in_point_order(const Triangulation& t, const std::vector<Rat>& vals) {
    std::vector<int> order(static_cast<int>(t.vertex_count()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return t.vertex(a) < t.vertex(b); });
    std::vector<Rat> out;
    out.reserve(order.size());
    for (int i : order) out.push_back(vals[static_cast<std::size_t>(i)]);
    return out;
}

} // namespace

TEST_CASE("symbolic evaluation: affine formulas come back as one functional") {
    auto f = parse_formula("!x1");
    auto r = symbolic_eval(f, seg(Rat(0), Rat(1)));
    REQUIRE(std::holds_alternative<AffineFunctional>(r));
    const auto& a = std::get<AffineFunctional>(r);
    CHECK(a.coeffs == std::vector<Int>{Int(-1)});
    CHECK(a.constant == 1);
    CHECK(a.value_at(pt({Rat(1, 3)})) == Rat(2, 3));
    CHECK(a.sign_at(pt({Rat(1)})) == 0);
    CHECK(a.sign_at(pt({Rat(1, 2)})) == 1);
}

TEST_CASE("symbolic evaluation: truncation with mixed signs reports the witness") {
    auto f = parse_formula("x1 + x1");
    auto r = symbolic_eval(f, seg(Rat(0), Rat(1)));
    REQUIRE(std::holds_alternative<NeedsSplit>(r));
    const auto& w = std::get<NeedsSplit>(r).witness; // 2x - 1
    CHECK(w.coeffs == std::vector<Int>{Int(2)});
    CHECK(w.constant == -1);
}

TEST_CASE("symbolic evaluation: the same truncation is resolved on a smaller simplex") {
    auto f = parse_formula("x1 + x1");
    auto r = symbolic_eval(f, seg(Rat(1, 2), Rat(1)));
    REQUIRE(std::holds_alternative<AffineFunctional>(r));
    const auto& a = std::get<AffineFunctional>(r);
    CHECK(a.coeffs == std::vector<Int>{Int(0)});
    CHECK(a.constant == 1);

    auto r2 = symbolic_eval(f, seg(Rat(0), Rat(1, 2)));
    REQUIRE(std::holds_alternative<AffineFunctional>(r2));
    const auto& b = std::get<AffineFunctional>(r2);
    CHECK(b.coeffs == std::vector<Int>{Int(2)});
    CHECK(b.constant == 0);
}

TEST_CASE("symbolic evaluation rejects a simplex of too-small dimension") {
    auto f = parse_formula("x2");
    CHECK_THROWS_AS((void)symbolic_eval(f, seg(Rat(0), Rat(1))), DomainError);
}

TEST_CASE("linearizing x1 + x1 splits the segment at one half") {
    auto rep = linearize_formula(parse_formula("x1 + x1"), 1);
    REQUIRE(rep.triangulation.vertex_count() == 3);
    CHECK(has_vertex(rep.triangulation, {Rat(1, 2)}));
    CHECK(values_in_point_order(rep.triangulation, rep.values) ==
          std::vector<Rat>{Rat(0), Rat(1), Rat(1)});
    CHECK(is_regular(rep.triangulation));
    CHECK(is_valid_complex(rep.triangulation));
}

TEST_CASE("linearizing an already-affine formula keeps the Kuhn seed") {
    auto rep = linearize_formula(parse_formula("!x1"), 1);
    CHECK(rep.triangulation.vertex_count() == 2);
    CHECK(values_in_point_order(rep.triangulation, rep.values) ==
          std::vector<Rat>{Rat(1), Rat(0)});
}

TEST_CASE("linearizing (x1*x1) | !(x1+x1) pins the values at 0, 1/2, 1") {
    auto rep = linearize_formula(parse_formula("(x1*x1) | !(x1+x1)"), 1);
    CHECK(has_vertex(rep.triangulation, {Rat(1, 2)}));
    CHECK(evaluate_rep(rep, {Rat(0)}) == Rat(1));
    CHECK(evaluate_rep(rep, {Rat(1, 2)}) == Rat(0));
    CHECK(evaluate_rep(rep, {Rat(1)}) == Rat(1));
    CHECK(is_regular(rep.triangulation));
    CHECK(is_valid_complex(rep.triangulation));
    CHECK(total_volume(rep.triangulation) == Rat(1));
}

TEST_CASE("scalar multiples linearize through their expansion") {
    auto rep = linearize_formula(parse_formula("3.x1"), 1);
    CHECK(has_vertex(rep.triangulation, {Rat(1, 3)}));
    for (int num = 0; num <= 12; ++num) {
        Rat x(num, 12);
        Rat tripled = Rat(3) * x;
        CHECK(evaluate_rep(rep, {x}) == (tripled > 1 ? Rat(1) : tripled));
    }
}

TEST_CASE("linearizing x1 + x2 adds the center of the square") {
    auto rep = linearize_formula(parse_formula("x1 + x2"), 2);
    CHECK(rep.triangulation.vertex_count() == 5);
    CHECK(has_vertex(rep.triangulation, {Rat(1, 2), Rat(1, 2)}));
    CHECK(is_regular(rep.triangulation));
    CHECK(is_valid_complex(rep.triangulation));
    CHECK(total_volume(rep.triangulation) == Rat(1));
    CHECK(evaluate_rep(rep, {Rat(1, 3), Rat(1, 4)}) == Rat(7, 12));
    CHECK(evaluate_rep(rep, {Rat(2, 3), Rat(3, 4)}) == Rat(1));
}

TEST_CASE("joint linearization is faithful for every input formula") {
    std::vector<FormulaPtr> fs = {parse_formula("x1 + x2"), parse_formula("x1 * x2"),
                                  parse_formula("x1 & !x2")};
    auto joint = linearizing_triangulation(fs, 2);
    REQUIRE(joint.values.size() == fs.size());
    std::vector<McNaughtonRep> reps;
    for (const auto& vals : joint.values)
        reps.push_back(McNaughtonRep{joint.triangulation, vals});
    SplitMix64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Rat> p = {rng.unit_rational(9), rng.unit_rational(9)};
        for (std::size_t i = 0; i < fs.size(); ++i)
            CHECK(evaluate_rep(reps[i], p) == evaluate(fs[i], p));
    }
}

TEST_CASE("linearization is deterministic") {
    auto f = parse_formula("(x1 + x2) * !(x1 * x1) | x2");
    auto a = linearize_formula(f, 2);
    auto b = linearize_formula(f, 2);
    CHECK(triangulation_to_json(a.triangulation) == triangulation_to_json(b.triangulation));
    CHECK(a.values == b.values);
}

TEST_CASE("random formulas: the representation agrees with direct evaluation") {
    FormulaGenOptions opts;
    opts.max_size = 14;
    for (int d = 1; d <= 2; ++d) {
        opts.vars = d;
        SplitMix64 gen(1000 + static_cast<std::uint64_t>(d));
        for (int trial = 0; trial < 8; ++trial) {
            auto f = random_formula(gen, opts);
            auto rep = linearize_formula(f, d);
            CHECK(is_regular(rep.triangulation));
            SplitMix64 pts(50 + static_cast<std::uint64_t>(trial));
            for (int i = 0; i < 25; ++i) {
                std::vector<Rat> p;
                for (int c = 0; c < d; ++c) p.push_back(pts.unit_rational(8));
                CHECK(evaluate_rep(rep, p) == evaluate(f, p));
            }
        }
    }
}

TEST_CASE("the blow-up budget is enforced and reports the partial triangulation") {
    LinearizeOptions opts;
    opts.max_blow_ups = 0;
    try {
        (void)linearize_formula(parse_formula("x1 + x1"), 1, opts);
        FAIL("expected ResourceLimitError");
    } catch (const ResourceLimitError& e) {
        REQUIRE(e.partial != nullptr);
        CHECK(e.partial->vertex_count() == 2);
    }
}

TEST_CASE("restricting to the trivial theory keeps everything") {
    auto joint = linearizing_triangulation({parse_formula("x1 + x1"), parse_formula("1")}, 1);
    auto r = restrict_to_theory(joint, 1);
    CHECK(r.triangulation.vertex_count() == joint.triangulation.vertex_count());
    CHECK(r.values[0] == joint.values[0]);
    CHECK(euler_characteristic(r.triangulation) == 1);
}

TEST_CASE("restricting to x1 | !x1 leaves the two endpoints") {
    auto joint = linearizing_triangulation({parse_formula("x1"), parse_formula("x1 | !x1")}, 1);
    auto r = restrict_to_theory(joint, 1);
    REQUIRE(r.triangulation.vertex_count() == 2);
    CHECK(r.triangulation.maximal_simplexes() ==
          std::vector<std::vector<int>>{{0}, {1}});
    CHECK(values_in_point_order(r.triangulation, r.values[0]) ==
          std::vector<Rat>{Rat(0), Rat(1)});
    CHECK(euler_characteristic(r.triangulation) == 2);
}

TEST_CASE("an unsatisfiable theory is rejected") {
    auto joint = linearizing_triangulation({parse_formula("x1"), parse_formula("0")}, 1);
    CHECK_THROWS_AS((void)restrict_to_theory(joint, 1), InconsistentTheoryError);
    CHECK_THROWS_AS((void)restrict_to_theory(joint, 2), DomainError);
}

TEST_CASE("refining to level 3 exposes the threshold {x >= 1/3}") {
    auto rep = linearize_formula(parse_formula("x1"), 1);
    auto fine = refine_uplevel(rep, Int(3));
    CHECK(has_vertex(fine.triangulation, {Rat(1, 3)}));
    CHECK(is_regular(fine.triangulation));
    // after refinement, min(1, 3a) takes its vertex-wise clamp and its oneset
    // is a union of faces
    std::vector<Rat> clamped;
    for (const Rat& v : fine.values) {
        Rat scaled = Rat(3) * v;
        clamped.push_back(scaled > 1 ? Rat(1) : scaled);
    }
    auto one = subcomplex_where(fine.triangulation, clamped, Rat(1));
    CHECK(one.euler == 1);
    int idx = *fine.triangulation.find_vertex(pt({Rat(1, 3)}));
    bool touches_third = false;
    for (const auto& g : one.generators)
        touches_third = touches_third ||
                        std::find(g.begin(), g.end(), idx) != g.end();
    CHECK(touches_third);
    // values are carried by interpolation
    CHECK(evaluate_rep(fine, {Rat(1, 5)}) == Rat(1, 5));
    CHECK(evaluate_rep(fine, {Rat(2, 3)}) == Rat(2, 3));
}

TEST_CASE("refining with k = 1 is a no-op when the oneset is already a face") {
    auto rep = linearize_formula(parse_formula("x1"), 1);
    auto fine = refine_uplevel(rep, Int(1));
    CHECK(fine.triangulation.vertex_count() == rep.triangulation.vertex_count());
    CHECK_THROWS_AS((void)refine_uplevel(rep, Int(0)), DomainError);
}

TEST_CASE("evaluating outside the carrier is an error") {
    auto rep = linearize_formula(parse_formula("x1"), 1);
    CHECK_THROWS_AS((void)evaluate_rep(rep, {Rat(2)}), DomainError);
}
