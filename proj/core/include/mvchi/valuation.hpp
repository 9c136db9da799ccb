/**
 * The Euler characteristic valuation E on finitely presented MV-algebras,
 * computed two independent ways:
 *
 *  - geometric: E(a) = chi(oneset((n+1).a)) where n is the smallest level
 *    at which the support and the uplevel set are homotopy equivalent,
 *    read off a hat decomposition of a;
 *  - recursive: decompose a into distinct Schauder hats and reduce
 *    E(b0 + b1 + ... + bu) = 1 + E(b1 + ... + bu) - E(c1 + ... + cu)
 *    via basis reduction, with E(empty) = 0 and E(single hat) = 1.
 *
 * Both produce exact integers and must agree; "both" asserts that.
 */

#ifndef MVCHI_VALUATION_HPP
#define MVCHI_VALUATION_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvchi/schauder.hpp"

namespace mvchi {

enum class Method { Auto, Geometric, Recursive, Both };

/// "geometric", "recursive", "both", "auto"
std::string method_name(Method m);

struct ValuationOptions {
    LinearizeOptions linearize{};
    /// Options for the basis reductions inside the recursive method; the
    /// seed is varied per recursion node, deterministically. Sampled
    /// identity checks default to off here (the exact vertex-wise check
    /// still runs at every node); standalone basis_reduction keeps them on.
    ReductionOptions reduction{.identity_samples = 0};
    /// Cap on recursion nodes of the recursive method (it is exponential in
    /// the number of hats); exceeding it raises ResourceLimitError.
    long long max_recursion_nodes = 200'000;
    /// Auto resolves to Both when the decomposition has at most this many
    /// hats, else to Geometric.
    std::size_t both_threshold = 12;
};

struct TriangulationStats {
    long long vertices = 0;
    long long maximal_simplexes = 0;
    Int max_denominator{1};
};

struct ValuationReport {
    std::string formula;
    std::optional<std::string> theory;
    int dim = 0;
    Method method = Method::Geometric; // resolved; never Auto
    long long E = 0;
    Int n_bound{0}; // 0 when the function is zero or the theory inconsistent
    TriangulationStats triangulation;
    std::vector<long long> oneset_faces; // per dimension 0..dim
    bool zero_function = false;
    bool inconsistent_theory = false;
};

/**
 * The level bound n = max over terms of ceil(d_i / m_i): the smallest n
 * with n * m_i/d_i >= 1 for every hat term, so that the support of a and
 * oneset((n+1).a) are homotopy equivalent. DomainError on an empty
 * decomposition (the zero function short-circuits to E = 0 instead).
 */
Int n_bound(const HatDecomposition& dec);

/**
 * Geometric pipeline over an explicit representation (the carrier may be a
 * proper subcomplex of the cube): decompose, bound n, refine until
 * {a >= 1/(n+1)} is a union of faces, return its Euler characteristic.
 */
long long euler_geometric_rep(const McNaughtonRep& rep, const ValuationOptions& opts = {});

/**
 * Recursive scheme over an explicit representation: drop multiplicities
 * (E is idempotent), then recurse on the set of distinct hats via basis
 * reduction. ResourceLimitError when the node budget runs out.
 */
long long euler_recursive_rep(const McNaughtonRep& rep, const ValuationOptions& opts = {});

/**
 * Full pipeline: jointly linearize phi (and theta when non-null), restrict
 * to the models of theta, compute E by the requested method, and assemble
 * the report. Method::Both computes both and fails hard (InternalError) on
 * disagreement; Method::Auto picks Both or Geometric by decomposition size.
 * An unsatisfiable theta or an identically-zero function yields E = 0 with
 * the corresponding flag set rather than an error.
 */
ValuationReport euler_valuation(const FormulaPtr& phi, const FormulaPtr& theta, int d,
                                Method method = Method::Auto,
                                const ValuationOptions& opts = {});

/// euler_valuation pinned to the geometric pipeline.
ValuationReport euler_geometric(const FormulaPtr& phi, const FormulaPtr& theta, int d,
                                const ValuationOptions& opts = {});

/// euler_valuation pinned to the recursive scheme.
ValuationReport euler_recursive(const FormulaPtr& phi, const FormulaPtr& theta, int d,
                                const ValuationOptions& opts = {});

/**
 * The root step of the recursive scheme, exposed for tracing: the basis
 * reduction at the canonically smallest peak of rep's decomposition,
 * against the remaining peaks in canonical order. DomainError when the
 * decomposition is empty (the zero function has no reduction step).
 */
ReductionTrace root_reduction(const McNaughtonRep& rep, const ReductionOptions& opts = {});

/**
 * chi(oneset(k.phi)) = chi({phi >= 1/k}) for each k in [k_lo, k_hi]; the
 * values stabilize (all equal) once k exceeds the decomposition's n bound.
 */
std::vector<std::pair<Int, long long>> stabilization_check(const FormulaPtr& f, int d,
                                                           const Int& k_lo, const Int& k_hi,
                                                           const ValuationOptions& opts = {});

/// stabilization_check over the default range [n+1, n+4] (n = 0 for the
/// zero function).
std::vector<std::pair<Int, long long>> stabilization_check(const FormulaPtr& f, int d,
                                                           const ValuationOptions& opts = {});

/// Report serialization; see docs/formats.md for the schema.
nlohmann::ordered_json report_to_json(const ValuationReport& r);

} // namespace mvchi

#endif // MVCHI_VALUATION_HPP
