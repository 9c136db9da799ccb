/**
 * Simplicial complexes with rational vertices: regular (unimodular)
 * triangulations of the unit cube, Farey blow-ups, face enumeration,
 * subcomplex extraction, and the combinatorial Euler characteristic.
 *
 * A Triangulation stores an ambient dimension, an indexed vertex array of
 * homogeneous points, and the inclusion-maximal simplexes as sorted tuples
 * of vertex indices. The complex it denotes is the closure of the maximal
 * list under faces; maximal simplexes of different dimensions may coexist
 * (subcomplexes of the cube are not pure in general). Vertex indices are
 * stable: blow_up appends the mediant at the end and never renumbers.
 */

#ifndef MVCHI_COMPLEX_HPP
#define MVCHI_COMPLEX_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvchi/errors.hpp"
#include "mvchi/numeric.hpp"

namespace mvchi {

/// A k-simplex as its k+1 distinct vertices, sorted in canonical point order.
struct Simplex {
    std::vector<HomogeneousPoint> vertices;

    explicit Simplex(std::vector<HomogeneousPoint> verts);
    std::size_t dim() const { return vertices.size() - 1; }
};

class Triangulation;
struct BlowUpResult;
BlowUpResult blow_up_detailed(Triangulation&& t, int i, int j);

class Triangulation {
public:
    /**
     * Builds a complex from an indexed vertex set and its maximal simplexes.
     * Tuples are sorted and the tuple list is sorted lexicographically.
     * Throws StructuralError on out-of-range or repeated indices, repeated
     * tuples, a tuple that is a face of another, or vertices of the wrong
     * dimension.
     */
    Triangulation(int ambient_dim, std::vector<HomogeneousPoint> vertices,
                  std::vector<std::vector<int>> maximal);

    int ambient_dim() const { return dim_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    const HomogeneousPoint& vertex(int i) const { return vertices_.at(static_cast<std::size_t>(i)); }
    const std::vector<HomogeneousPoint>& vertices() const { return vertices_; }

    /**
     * Maximal simplexes as sorted index tuples, lexicographically ordered.
     * The list is materialized lazily after mutations; the reference is
     * invalidated by any mutation of the complex.
     */
    const std::vector<std::vector<int>>& maximal_simplexes() const;

    /// Number of maximal simplexes (without materializing the sorted list).
    std::size_t simplex_count() const { return live_count_; }

    /**
     * The maximal simplexes containing vertex v, lexicographically ordered.
     * Costs the degree of v, not the size of the complex.
     */
    std::vector<std::vector<int>> incident_simplexes(int v) const;

    std::optional<int> find_vertex(const HomogeneousPoint& p) const;

    /// True iff {i,j} is a face of some maximal simplex.
    bool has_edge(int i, int j) const;

    /**
     * Reverts a run of blow-ups in place: truncates the vertex array to
     * orig_vertex_count, deletes the tuples in `drop` and reinstates the
     * tuples in `restore`. Both lists must be lexicographically sorted and
     * must describe the net effect of blow-ups performed on this complex
     * (drop = tuples created and still present, restore = original tuples
     * that were replaced), as recorded from BlowUpResult. Throws
     * StructuralError when a dropped tuple is absent, a restored tuple is
     * already present, or a restored tuple references a truncated vertex.
     */
    void revert_to(std::size_t orig_vertex_count,
                   const std::vector<std::vector<int>>& drop,
                   const std::vector<std::vector<int>>& restore);

    /// The points of an index tuple, canonically sorted.
    Simplex simplex_points(const std::vector<int>& tuple) const;

private:
    Triangulation() : dim_(0) {}

    /**
     * Simplexes live in stable slots so that a blow-up touches only the star
     * of its edge: slots_[id] is a sorted tuple, an empty tuple is a dead
     * slot, and slot ids are never reused. star_[v] lists the slots whose
     * tuple contains v; entries go stale when their slot dies (liveness is
     * exactly "the slot is non-empty") and are pruned opportunistically.
     * The lexicographically sorted view is cached and rebuilt on demand.
     */
    int dim_;
    std::vector<HomogeneousPoint> vertices_;
    std::vector<std::vector<int>> slots_;
    std::vector<std::vector<int>> star_;
    std::size_t live_count_ = 0;
    std::map<HomogeneousPoint, int> index_;
    mutable std::vector<std::vector<int>> cache_;
    mutable bool cache_valid_ = false;

    void add_slot(std::vector<int> tuple);

    friend struct BlowUpResult;
    friend BlowUpResult blow_up_detailed(Triangulation&& t, int i, int j);
};

/**
 * The standard triangulation of [0,1]^d into d! unimodular simplexes, one
 * chain per coordinate permutation, over the 2^d lattice corners.
 * d must lie in [1, 8]; the cap keeps the seed complex enumerable.
 */
Triangulation kuhn_triangulation(int d);

/**
 * Unimodularity test: every maximal k-simplex's (k+1)x(d+1) homogeneous
 * vertex matrix has gcd of its maximal minors equal to 1. For full-dim
 * simplexes this is |det| = 1.
 */
bool is_regular(const Triangulation& t);

struct BlowUpResult {
    Triangulation triangulation;
    int mediant_index;
    /// Maximal simplexes replaced / created, as index tuples of the result.
    std::vector<std::vector<int>> removed;
    std::vector<std::vector<int>> added;
};

/**
 * Stellar subdivision of the edge {i,j} at its Farey mediant: every maximal
 * simplex containing the edge is replaced by two copies with the mediant
 * substituted for one endpoint in turn. The carrier and its Euler
 * characteristic are unchanged, and regularity is preserved.
 *
 * The mediant is appended at index vertex_count(); all existing indices
 * remain valid. Throws StructuralError if {i,j} is not an edge.
 * The rvalue overloads reuse the argument's storage.
 */
BlowUpResult blow_up_detailed(const Triangulation& t, int i, int j);
BlowUpResult blow_up_detailed(Triangulation&& t, int i, int j);
Triangulation blow_up(const Triangulation& t, int i, int j);
Triangulation blow_up(Triangulation&& t, int i, int j);

/// All edges (1-faces) of the complex as index pairs (i < j), sorted.
std::vector<std::pair<int, int>> all_edges(const Triangulation& t);

/// Number of k-faces for k = 0..ambient_dim, deduplicated across simplexes.
std::vector<long long> face_counts(const Triangulation& t);

/// Alternating face count: sum over k of (-1)^k (number of k-faces).
long long euler_characteristic(const Triangulation& t);

/**
 * A subcomplex of a host triangulation, described by its inclusion-maximal
 * faces (index tuples into the host). Face counts are precomputed; empty
 * subcomplexes have euler = 0.
 */
struct Subcomplex {
    std::vector<std::vector<int>> generators;
    std::vector<long long> counts; // counts[k] = number of k-faces
    long long euler = 0;

    bool empty() const { return generators.empty(); }
};

/**
 * The faces on which a t-linear function equals `target`, which must be 0 or
 * 1. Because the function's range lies in [0,1], the extreme value is
 * attained on each simplex exactly on the face spanned by the vertices
 * attaining it, so the vertex-wise trace is the honest level set.
 * vals must hold one value in [0,1] per vertex; DomainError otherwise.
 */
Subcomplex subcomplex_where(const Triangulation& t, const std::vector<Rat>& vals,
                            const Rat& target);

/**
 * A sub-Triangulation materialized from maximal faces of a host complex.
 * vertex_map[new_index] = host index; vertices keep their host order.
 */
struct SubTriangulation {
    Triangulation triangulation;
    std::vector<int> vertex_map;
};

SubTriangulation restrict_triangulation(const Triangulation& t,
                                        const std::vector<std::vector<int>>& generators);

/**
 * Exact barycentric coordinates of p with respect to a simplex, or nullopt
 * when p lies outside the simplex (or off its affine hull).
 */
std::optional<std::vector<Rat>>
barycentric_coordinates(const std::vector<HomogeneousPoint>& simplex,
                        const std::vector<Rat>& p);

/// First maximal simplex containing p, with barycentric coordinates.
std::optional<std::pair<std::size_t, std::vector<Rat>>>
locate_point(const Triangulation& t, const std::vector<Rat>& p);

/**
 * Exact pairwise intersection check: any two maximal simplexes must meet in
 * a common face (possibly empty), and every maximal simplex must be affinely
 * independent. Certifies that the stored data is a simplicial complex.
 * O(n^2) exact linear programs; intended for tests and spot checks.
 * On failure, *why (if given) names the offending pair.
 */
bool is_valid_complex(const Triangulation& t, std::string* why = nullptr);

/// Total Euclidean volume of the full-dimensional maximal simplexes.
Rat total_volume(const Triangulation& t);

/// {"dim": d, "vertices": [...], "simplices": [[...], ...]} with vertices in
/// canonical order, tuples ascending, tuple list lexicographic.
nlohmann::ordered_json triangulation_to_json(const Triangulation& t);
Triangulation triangulation_from_json(const nlohmann::json& j);

} // namespace mvchi

#endif // MVCHI_COMPLEX_HPP
