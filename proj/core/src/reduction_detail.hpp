/**
 * Internal in-place core of the basis reduction, shared between the public
 * basis_reduction (which runs it on a fresh copy) and the recursive
 * valuation (which runs it directly on one mutable complex and rolls the
 * blow-ups back afterwards, avoiding a full copy per recursion node).
 * Not installed; include via relative path only.
 */

#ifndef MVCHI_REDUCTION_DETAIL_HPP
#define MVCHI_REDUCTION_DETAIL_HPP

#include <set>
#include <vector>

#include "mvchi/schauder.hpp"

namespace mvchi::detail {

/// Net effect of one reduction's blow-ups, enough to roll the complex back.
struct BlowUpLog {
    std::size_t orig_vertex_count = 0;
    std::set<std::vector<int>> net_added;   // tuples created and still present
    std::set<std::vector<int>> net_removed; // pre-existing tuples replaced
};

/// A ReductionTrace minus the triangulation, which the in-place caller
/// already holds.
struct ReductionCore {
    int b0 = -1;
    std::vector<int> c_vertices;
    std::vector<ReductionStep> steps;
};

/**
 * The reduction of basis_reduction performed directly on `cur`, which ends
 * in the blown-up state the c-hats live on. When `log` is non-null it
 * records how to undo the blow-ups via revert_blow_ups. Same validation,
 * verification, and results as basis_reduction.
 */
ReductionCore reduce_in_place(Triangulation& cur, int b0, const std::vector<int>& rest,
                              const ReductionOptions& opts, BlowUpLog* log);

/// Restores `cur` to its state before the reduction that filled `log`.
void revert_blow_ups(Triangulation& cur, const BlowUpLog& log);

} // namespace mvchi::detail

#endif
