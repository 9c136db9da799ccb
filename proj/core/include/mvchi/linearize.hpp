/**
 * From formulas to piecewise-linear representations: symbolic evaluation of
 * a formula over a single simplex, and the subdivision loop that refines a
 * Kuhn seed by Farey blow-ups until every formula is affine on every maximal
 * simplex. The result pairs a regular triangulation with exact vertex
 * values; affine interpolation over the simplexes reproduces the formula's
 * semantics everywhere.
 */

#ifndef MVCHI_LINEARIZE_HPP
#define MVCHI_LINEARIZE_HPP

#include <variant>
#include <vector>

#include "mvchi/complex.hpp"
#include "mvchi/formula.hpp"

namespace mvchi {

/// x -> coeffs.x + constant with integer coefficients (the pieces of
/// McNaughton functions are integral).
struct AffineFunctional {
    std::vector<Int> coeffs;
    Int constant;

    Rat value_at(const HomogeneousPoint& v) const;

    /// Sign of the value at v, computed in integers: coeffs.v + constant.den.
    int sign_at(const HomogeneousPoint& v) const;
};

/// A truncation/comparison node whose witness changes sign strictly inside
/// the simplex; the simplex must be subdivided before the formula is affine.
struct NeedsSplit {
    AffineFunctional witness;
};

using SymbolicResult = std::variant<AffineFunctional, NeedsSplit>;

/**
 * Bottom-up affine evaluation of f over the simplex s. At each truncation
 * node the branch is decided by the witness's signs at the vertices of s
 * (an affine function on a simplex is sign-determined by its vertex values);
 * strictly mixed signs yield NeedsSplit with the offending witness.
 * Scalar nodes are expanded first. The simplex's points must have dimension
 * at least max_var_index(f).
 */
SymbolicResult symbolic_eval(const FormulaPtr& f, const Simplex& s);

/// A function as exact vertex values over a regular triangulation, affinely
/// interpolated inside each simplex.
struct McNaughtonRep {
    Triangulation triangulation;
    std::vector<Rat> values;
};

struct LinearizeOptions {
    /// Safety cap on blow-ups; exceeding it raises ResourceLimitError
    /// carrying the partial triangulation.
    long long max_blow_ups = 1'000'000;
};

/// Several functions sharing one linearizing triangulation.
struct JointLinearization {
    Triangulation triangulation;
    std::vector<std::vector<Rat>> values; // values[i][v] = f_i at vertex v
};

/**
 * The common refinement loop: starting from kuhn_triangulation(d), while any
 * formula fails to be affine on some maximal simplex, take the first such
 * simplex in canonical order (simplexes compared by their sorted point
 * tuples), its first formula with a split witness, and the canonically
 * smallest edge on which the witness strictly changes sign; blow up there.
 * Deterministic; terminates by Farey descent.
 *
 * d must be >= every variable index (DomainError otherwise).
 */
JointLinearization linearizing_triangulation(const std::vector<FormulaPtr>& fs, int d,
                                             const LinearizeOptions& opts = {});

/// Single-formula convenience over the same loop.
McNaughtonRep linearize_formula(const FormulaPtr& f, int d,
                                const LinearizeOptions& opts = {});

/// A joint linearization cut down to the oneset of one of its formulas.
struct TheoryRestriction {
    Triangulation triangulation;          // the models of the theory
    std::vector<int> vertex_map;          // new index -> host index
    std::vector<std::vector<Rat>> values; // all formulas, restricted
};

/**
 * Restricts a joint linearization to P = {theta = 1}, the models of the
 * theory formula at theta_index. P is a regular complex (a subcomplex of a
 * regular triangulation); the other formulas keep their vertex values.
 * Throws InconsistentTheoryError when P is empty.
 */
TheoryRestriction restrict_to_theory(const JointLinearization& joint,
                                     std::size_t theta_index);

/**
 * Refines rep's triangulation by Farey blow-ups until {a >= 1/k} is a union
 * of faces: afterwards no maximal simplex has vertices with k a(v) - 1 of
 * strictly mixed signs, so min(1, k a) is linear over every simplex and its
 * oneset is the vertex-wise trace. Returns a's representation over the
 * refinement (values carried by affine interpolation). k must be positive.
 */
McNaughtonRep refine_uplevel(const McNaughtonRep& rep, const Int& k,
                             const LinearizeOptions& opts = {});

/// Exact value of the represented function at p; DomainError if p lies
/// outside the carrier. Linear scan; meant for tests and spot checks.
Rat evaluate_rep(const McNaughtonRep& rep, const std::vector<Rat>& p);

} // namespace mvchi

#endif // MVCHI_LINEARIZE_HPP
