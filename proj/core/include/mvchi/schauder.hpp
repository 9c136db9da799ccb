/**
 * Schauder hats over regular triangulations, decomposition of triangulation-
 * linear functions into hat combinations, and the basis-reduction procedure
 * that rewrites min(b_0, b_1 + ... + b_u) as a sum of hats over a refined
 * triangulation. All arithmetic is exact.
 */

#ifndef MVCHI_SCHAUDER_HPP
#define MVCHI_SCHAUDER_HPP

#include <cstdint>
#include <vector>

#include "mvchi/linearize.hpp"
#include "mvchi/rng.hpp"

namespace mvchi {

/**
 * The Schauder hat of t at vertex v: the function that is 1/den(v) at v and
 * 0 at every other vertex, affinely interpolated. Its support is the star
 * of v and its maximum value is 1/den(v).
 */
McNaughtonRep hat_function(const Triangulation& t, int v);

/// One summand of a hat decomposition: multiplicity * (hat at vertex).
struct HatTerm {
    int vertex;
    Int multiplicity; // m = den(vertex) * a(vertex), always >= 1 here
    Int denominator;  // den(vertex)
};

/// a = sum of m_i * hat_{v_i}; the sum never exceeds 1 pointwise, so the
/// truncated and the plain sum coincide.
struct HatDecomposition {
    Triangulation triangulation;
    std::vector<HatTerm> terms;
};

/**
 * Decomposes a function given by vertex values over a regular triangulation
 * into its unique hat combination: term (v, m, d) for every vertex with
 * a(v) = m/d != 0, d = den(v). Empty exactly when a is identically zero.
 * DomainError if a value lies outside [0,1]; InternalError if den(v) * a(v)
 * fails to be an integer (the input was not linear over a regular complex).
 */
HatDecomposition hat_decomposition(const McNaughtonRep& a);

/// One step of basis reduction.
struct ReductionStep {
    int k;          // 1-based position in `rest`
    int vertex;     // v_k
    bool blew_up;   // conv(v_0, v_k) was an edge, subdivided at its mediant
    int mediant;    // index of the mediant vertex when blew_up, else -1
    bool c_nonzero; // whether c_k = b_k /\ b_0^{k-1} is nonzero
};

/**
 * Result of basis reduction: the refined triangulation, the peak vertices
 * of the nonzero c_k (each a hat of the final triangulation, pairwise
 * distinct), and the step-by-step record.
 */
struct ReductionTrace {
    Triangulation triangulation;
    int b0 = -1; // the pivot vertex: every blown edge is (b0, step.vertex)
    std::vector<int> c_vertices;
    std::vector<ReductionStep> steps;
};

struct ReductionOptions {
    /// Random carrier points at which the reduction identity
    /// min(b_0, sum b_k) = sum c_k is verified (on top of the exact
    /// vertex-wise check); 0 disables the sampling.
    int identity_samples = 4;
    std::uint64_t rng_seed = 0;
};

/**
 * Basis reduction: for k = 1..u in the given order, if conv(v_0, v_k) is an
 * edge of the current triangulation, blow it up at its Farey mediant; then
 * c_k = b_k /\ b_0^{k-1} vertex-wise and b_0^k = b_0^{k-1} - c_k. The b's
 * are the hats of the INPUT triangulation, carried through the refinements
 * by interpolation. Postconditions verified at runtime (InternalError on
 * violation): every nonzero c_k is a hat of the final triangulation, their
 * peaks are pairwise distinct, and min(b_0, sum b_k) = sum c_k exactly at
 * all vertices and at sampled points.
 *
 * b0 and the entries of rest must be distinct vertex indices of t.
 */
ReductionTrace basis_reduction(const Triangulation& t, int b0, const std::vector<int>& rest,
                               const ReductionOptions& opts = {});

/**
 * A random rational point of the carrier: a uniformly chosen maximal simplex,
 * then a rational convex combination with integer weights in [0, max_weight]
 * (not all zero). Deterministic given the generator state.
 */
std::vector<Rat> random_carrier_point(const Triangulation& t, SplitMix64& rng,
                                      std::uint64_t max_weight = 7);

/// Step list, c-hat peaks, and the final triangulation as JSON.
nlohmann::ordered_json reduction_trace_to_json(const ReductionTrace& trace);

} // namespace mvchi

#endif // MVCHI_SCHAUDER_HPP
