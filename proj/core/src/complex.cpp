#include "mvchi/complex.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>

namespace mvchi {

namespace {

int checked_index(int i, std::size_t n, const char* what) {
    if (i < 0 || static_cast<std::size_t>(i) >= n)
        throw StructuralError(std::string(what) + ": vertex index " + std::to_string(i) +
                              " out of range");
    return i;
}

bool tuple_contains(const std::vector<int>& tuple, int v) {
    return std::binary_search(tuple.begin(), tuple.end(), v);
}

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Exact integer determinant (fraction-free Bareiss elimination).
Int det_int(std::vector<std::vector<Int>> m) {
    const std::size_t n = m.size();
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t piv = k;
        while (piv < n && m[piv][k] == 0) ++piv;
        if (piv == n) return Int(0);
        if (piv != k) {
            std::swap(m[piv], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    Int d = m[n - 1][n - 1];
    return sign < 0 ? Int(-d) : d;
}

/// Homogeneous row (coords..., den) of one vertex.
std::vector<Int> homogeneous_row(const HomogeneousPoint& v) {
    std::vector<Int> row = v.coords;
    row.push_back(v.den);
    return row;
}

/**
 * gcd of all r x r column minors of an r x C integer matrix (r <= C).
 * Zero iff every minor vanishes, i.e. the rows are affinely dependent.
 * Early-exits once the gcd reaches 1.
 */
Int maximal_minor_gcd(const std::vector<std::vector<Int>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t cols = rows[0].size();
    std::vector<std::size_t> pick(r);
    std::iota(pick.begin(), pick.end(), 0);
    Int g = 0;
    while (true) {
        std::vector<std::vector<Int>> sub(r, std::vector<Int>(r));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                sub[i][j] = rows[i][pick[j]];
        g = boost::multiprecision::gcd(g, boost::multiprecision::abs(det_int(std::move(sub))));
        if (g == 1) return g;
        // next combination
        std::size_t i = r;
        while (i-- > 0) {
            if (pick[i] + (r - i) < cols) {
                ++pick[i];
                for (std::size_t j = i + 1; j < r; ++j) pick[j] = pick[j - 1] + 1;
                break;
            }
            if (i == 0) return g;
        }
    }
}

Int simplex_minor_gcd(const Triangulation& t, const std::vector<int>& tuple) {
    std::vector<std::vector<Int>> rows;
    rows.reserve(tuple.size());
    for (int i : tuple) rows.push_back(homogeneous_row(t.vertex(i)));
    return maximal_minor_gcd(rows);
}

} // namespace

Simplex::Simplex(std::vector<HomogeneousPoint> verts) : vertices(std::move(verts)) {
    if (vertices.empty()) throw StructuralError("a simplex needs at least one vertex");
    std::sort(vertices.begin(), vertices.end());
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
        if (vertices[i] == vertices[i + 1])
            throw StructuralError("repeated vertex in simplex");
}

Triangulation::Triangulation(int ambient_dim, std::vector<HomogeneousPoint> vertices,
                             std::vector<std::vector<int>> maximal)
    : dim_(ambient_dim), vertices_(std::move(vertices)) {
    if (dim_ < 1) throw StructuralError("ambient dimension must be at least 1");
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const HomogeneousPoint& v = vertices_[i];
        if (static_cast<int>(v.dim()) != dim_)
            throw StructuralError("vertex dimension does not match the complex");
        if (v.den <= 0) throw StructuralError("vertex denominator must be positive");
        auto [it, fresh] = index_.emplace(v, static_cast<int>(i));
        if (!fresh) throw StructuralError("repeated vertex point in vertex array");
    }
    for (auto& tuple : maximal) {
        if (tuple.empty()) throw StructuralError("empty simplex tuple");
        if (tuple.size() > static_cast<std::size_t>(dim_) + 1)
            throw StructuralError("simplex has more vertices than the ambient dimension allows");
        std::sort(tuple.begin(), tuple.end());
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            checked_index(tuple[i], vertices_.size(), "triangulation");
            if (i > 0 && tuple[i] == tuple[i - 1])
                throw StructuralError("repeated vertex index in simplex tuple");
        }
    }
    std::sort(maximal.begin(), maximal.end());
    for (std::size_t i = 0; i + 1 < maximal.size(); ++i)
        if (maximal[i] == maximal[i + 1])
            throw StructuralError("repeated maximal simplex");

    // Maximality: no tuple may be a face of another. Tuples of equal size are
    // distinct by the check above, so only mixed sizes need a scan.
    std::set<std::size_t> sizes;
    for (const auto& tuple : maximal) sizes.insert(tuple.size());
    if (sizes.size() > 1) {
        for (std::size_t s : sizes) {
            std::set<std::vector<int>> faces_of_larger;
            for (const auto& big : maximal) {
                if (big.size() <= s) continue;
                // all s-subsets of big
                std::vector<std::size_t> pick(s);
                std::iota(pick.begin(), pick.end(), 0);
                while (true) {
                    std::vector<int> face(s);
                    for (std::size_t i = 0; i < s; ++i) face[i] = big[pick[i]];
                    faces_of_larger.insert(std::move(face));
                    std::size_t i = s;
                    bool done = true;
                    while (i-- > 0) {
                        if (pick[i] + (s - i) < big.size()) {
                            ++pick[i];
                            for (std::size_t j = i + 1; j < s; ++j) pick[j] = pick[j - 1] + 1;
                            done = false;
                            break;
                        }
                        if (i == 0) break;
                    }
                    if (done) break;
                }
            }
            for (const auto& tuple : maximal)
                if (tuple.size() == s && faces_of_larger.count(tuple))
                    throw StructuralError("a listed simplex is a face of another");
        }
    }

    cache_ = maximal; // already sorted
    cache_valid_ = true;
    slots_ = std::move(maximal);
    live_count_ = slots_.size();
    star_.resize(vertices_.size());
    for (std::size_t id = 0; id < slots_.size(); ++id)
        for (int v : slots_[id]) star_[static_cast<std::size_t>(v)].push_back(static_cast<int>(id));
}

const std::vector<std::vector<int>>& Triangulation::maximal_simplexes() const {
    if (!cache_valid_) {
        cache_.clear();
        cache_.reserve(live_count_);
        for (const auto& tuple : slots_)
            if (!tuple.empty()) cache_.push_back(tuple);
        std::sort(cache_.begin(), cache_.end());
        cache_valid_ = true;
    }
    return cache_;
}

std::vector<std::vector<int>> Triangulation::incident_simplexes(int v) const {
    checked_index(v, vertices_.size(), "incident_simplexes");
    std::vector<std::vector<int>> out;
    for (int id : star_[static_cast<std::size_t>(v)]) {
        const auto& tuple = slots_[static_cast<std::size_t>(id)];
        if (!tuple.empty()) out.push_back(tuple);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void Triangulation::add_slot(std::vector<int> tuple) {
    const int id = static_cast<int>(slots_.size());
    for (int v : tuple) star_[static_cast<std::size_t>(v)].push_back(id);
    slots_.push_back(std::move(tuple));
    ++live_count_;
    cache_valid_ = false;
}

std::optional<int> Triangulation::find_vertex(const HomogeneousPoint& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool Triangulation::has_edge(int i, int j) const {
    checked_index(i, vertices_.size(), "has_edge");
    checked_index(j, vertices_.size(), "has_edge");
    for (int id : star_[static_cast<std::size_t>(i)]) {
        const auto& tuple = slots_[static_cast<std::size_t>(id)];
        if (tuple.empty()) continue;
        if (j == i || tuple_contains(tuple, j)) return true;
    }
    return false;
}

Simplex Triangulation::simplex_points(const std::vector<int>& tuple) const {
    std::vector<HomogeneousPoint> pts;
    pts.reserve(tuple.size());
    for (int i : tuple) pts.push_back(vertex(checked_index(i, vertices_.size(), "simplex_points")));
    return Simplex(std::move(pts));
}

void Triangulation::revert_to(std::size_t orig_vertex_count,
                              const std::vector<std::vector<int>>& drop,
                              const std::vector<std::vector<int>>& restore) {
    if (orig_vertex_count > vertices_.size())
        throw StructuralError("revert_to: vertex count exceeds the current complex");
    for (const auto& tuple : restore) {
        if (tuple.empty()) throw StructuralError("revert_to: empty restored tuple");
        for (int v : tuple)
            if (v < 0 || static_cast<std::size_t>(v) >= orig_vertex_count)
                throw StructuralError("revert_to: restored tuple references a truncated vertex");
    }
    // A tuple's slot is found through the star of its largest vertex: that is
    // the most recently created vertex of the tuple, whose star is smallest.
    auto find_slot = [&](const std::vector<int>& tuple) -> int {
        if (tuple.empty() || tuple.back() < 0 ||
            static_cast<std::size_t>(tuple.back()) >= star_.size())
            return -1;
        for (int id : star_[static_cast<std::size_t>(tuple.back())])
            if (slots_[static_cast<std::size_t>(id)] == tuple) return id;
        return -1;
    };
    for (const auto& tuple : drop) {
        int id = find_slot(tuple);
        if (id < 0) throw StructuralError("revert_to: dropped tuple is not present");
        slots_[static_cast<std::size_t>(id)].clear();
        --live_count_;
    }
    for (const auto& tuple : restore) {
        if (find_slot(tuple) >= 0)
            throw StructuralError("revert_to: restored tuple is already present");
        add_slot(tuple);
    }
    for (std::size_t v = orig_vertex_count; v < vertices_.size(); ++v) index_.erase(vertices_[v]);
    vertices_.resize(orig_vertex_count);
    star_.resize(orig_vertex_count);
    cache_valid_ = false;
}

Triangulation kuhn_triangulation(int d) {
    if (d < 1 || d > 8)
        throw DomainError("kuhn_triangulation: dimension must lie in [1, 8]");
    std::vector<HomogeneousPoint> corners;
    corners.reserve(std::size_t(1) << d);
    for (int mask = 0; mask < (1 << d); ++mask) {
        HomogeneousPoint v;
        v.den = 1;
        v.coords.resize(static_cast<std::size_t>(d));
        for (int t = 0; t < d; ++t)
            v.coords[static_cast<std::size_t>(t)] = (mask >> (d - 1 - t)) & 1;
        corners.push_back(std::move(v));
    }
    std::vector<std::vector<int>> maximal;
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        std::vector<int> tuple{0};
        int mask = 0;
        for (int t = 0; t < d; ++t) {
            mask |= 1 << (d - 1 - perm[static_cast<std::size_t>(t)]);
            tuple.push_back(mask);
        }
        maximal.push_back(std::move(tuple));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return Triangulation(d, std::move(corners), std::move(maximal));
}

bool is_regular(const Triangulation& t) {
    for (const auto& tuple : t.maximal_simplexes())
        if (simplex_minor_gcd(t, tuple) != 1) return false;
    return true;
}

BlowUpResult blow_up_detailed(Triangulation&& t, int i, int j) {
    checked_index(i, t.vertices_.size(), "blow_up");
    checked_index(j, t.vertices_.size(), "blow_up");
    if (i == j) throw StructuralError("blow_up: edge endpoints must differ");
    HomogeneousPoint mediant = farey_mediant(t.vertices_[static_cast<std::size_t>(i)],
                                             t.vertices_[static_cast<std::size_t>(j)]);
    if (t.index_.count(mediant))
        throw InternalError("blow_up: mediant already a vertex; the complex is not valid");

    // The star of the edge, collected from the smaller endpoint list; dead
    // entries met along the way are pruned from the walked list.
    int base = t.star_[static_cast<std::size_t>(i)].size() <=
                       t.star_[static_cast<std::size_t>(j)].size()
                   ? i
                   : j;
    int other = base == i ? j : i;
    std::vector<int>& walk = t.star_[static_cast<std::size_t>(base)];
    std::vector<int> hits;
    std::size_t live = 0;
    for (int id : walk) {
        const auto& tuple = t.slots_[static_cast<std::size_t>(id)];
        if (tuple.empty()) continue;
        walk[live++] = id;
        if (tuple_contains(tuple, other)) hits.push_back(id);
    }
    walk.resize(live);
    if (hits.empty())
        throw StructuralError("blow_up: {" + std::to_string(i) + "," + std::to_string(j) +
                              "} is not an edge of the complex");

    BlowUpResult res;
    const int new_idx = static_cast<int>(t.vertices_.size());
    t.star_.emplace_back();
    for (int id : hits) {
        std::vector<int>& slot = t.slots_[static_cast<std::size_t>(id)];
        res.removed.push_back(std::move(slot));
        slot.clear();
        --t.live_count_;
        for (int drop : {i, j}) {
            std::vector<int> repl;
            repl.reserve(res.removed.back().size());
            for (int v : res.removed.back())
                repl.push_back(v == drop ? new_idx : v);
            std::sort(repl.begin(), repl.end());
            res.added.push_back(repl);
            t.add_slot(std::move(repl));
        }
    }
    std::sort(res.removed.begin(), res.removed.end());
    std::sort(res.added.begin(), res.added.end());
    t.cache_valid_ = false;
    t.index_.emplace(mediant, new_idx);
    t.vertices_.push_back(std::move(mediant));
    res.mediant_index = new_idx;
    res.triangulation = std::move(t);
    return res;
}

BlowUpResult blow_up_detailed(const Triangulation& t, int i, int j) {
    Triangulation copy = t;
    return blow_up_detailed(std::move(copy), i, j);
}

Triangulation blow_up(const Triangulation& t, int i, int j) {
    return blow_up_detailed(t, i, j).triangulation;
}

Triangulation blow_up(Triangulation&& t, int i, int j) {
    return blow_up_detailed(std::move(t), i, j).triangulation;
}

std::vector<std::pair<int, int>> all_edges(const Triangulation& t) {
    std::set<std::pair<int, int>> edges;
    for (const auto& tuple : t.maximal_simplexes())
        for (std::size_t a = 0; a < tuple.size(); ++a)
            for (std::size_t b = a + 1; b < tuple.size(); ++b)
                edges.emplace(tuple[a], tuple[b]);
    return {edges.begin(), edges.end()};
}

namespace {

/// Distinct nonempty faces of the given tuples, counted by dimension.
std::vector<long long> count_faces(const std::vector<std::vector<int>>& tuples, int ambient_dim) {
    std::set<std::vector<int>> faces;
    for (const auto& tuple : tuples) {
        const std::size_t n = tuple.size();
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::vector<int> face;
            for (std::size_t b = 0; b < n; ++b)
                if (mask & (1u << b)) face.push_back(tuple[b]);
            faces.insert(std::move(face));
        }
    }
    std::vector<long long> counts(static_cast<std::size_t>(ambient_dim) + 1, 0);
    for (const auto& f : faces) ++counts[f.size() - 1];
    return counts;
}

long long alternating_sum(const std::vector<long long>& counts) {
    long long chi = 0;
    for (std::size_t k = 0; k < counts.size(); ++k)
        chi += (k % 2 == 0) ? counts[k] : -counts[k];
    return chi;
}

} // namespace

std::vector<long long> face_counts(const Triangulation& t) {
    return count_faces(t.maximal_simplexes(), t.ambient_dim());
}

long long euler_characteristic(const Triangulation& t) {
    return alternating_sum(face_counts(t));
}

Subcomplex subcomplex_where(const Triangulation& t, const std::vector<Rat>& vals,
                            const Rat& target) {
    if (vals.size() != t.vertex_count())
        throw DomainError("subcomplex_where: one value per vertex required");
    for (const Rat& v : vals)
        if (v < 0 || v > 1) throw DomainError("subcomplex_where: value outside [0,1]");
    if (target != 0 && target != 1)
        throw DomainError("subcomplex_where: target must be 0 or 1");

    std::set<std::vector<int>> traces;
    for (const auto& tuple : t.maximal_simplexes()) {
        std::vector<int> trace;
        for (int v : tuple)
            if (vals[static_cast<std::size_t>(v)] == target) trace.push_back(v);
        if (!trace.empty()) traces.insert(std::move(trace));
    }

    // a trace is non-maximal exactly when it is a proper subset of another
    // trace, so marking every trace's proper subsets finds the maximal ones
    // without a quadratic pairwise scan
    std::set<std::vector<int>> dominated;
    for (const auto& tr : traces) {
        const std::size_t n = tr.size();
        for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
            std::vector<int> face;
            for (std::size_t b = 0; b < n; ++b)
                if (mask & (1u << b)) face.push_back(tr[b]);
            dominated.insert(std::move(face));
        }
    }
    Subcomplex sub;
    for (const auto& tr : traces)
        if (!dominated.count(tr)) sub.generators.push_back(tr);
    sub.counts = count_faces(sub.generators, t.ambient_dim());
    sub.euler = alternating_sum(sub.counts);
    return sub;
}

SubTriangulation restrict_triangulation(const Triangulation& t,
                                        const std::vector<std::vector<int>>& generators) {
    std::set<int> used;
    for (const auto& g : generators)
        for (int v : g) used.insert(checked_index(v, t.vertex_count(), "restrict_triangulation"));
    std::vector<int> vertex_map;
    std::vector<int> old_to_new(t.vertex_count(), -1);
    std::vector<HomogeneousPoint> verts;
    verts.reserve(used.size());
    for (int old : used) {
        old_to_new[static_cast<std::size_t>(old)] = static_cast<int>(verts.size());
        vertex_map.push_back(old);
        verts.push_back(t.vertex(old));
    }
    std::vector<std::vector<int>> maximal;
    maximal.reserve(generators.size());
    for (const auto& g : generators) {
        std::vector<int> tuple;
        tuple.reserve(g.size());
        for (int v : g) tuple.push_back(old_to_new[static_cast<std::size_t>(v)]);
        maximal.push_back(std::move(tuple));
    }
    return SubTriangulation{
        Triangulation(t.ambient_dim(), std::move(verts), std::move(maximal)),
        std::move(vertex_map)};
}

std::optional<std::vector<Rat>>
barycentric_coordinates(const std::vector<HomogeneousPoint>& simplex,
                        const std::vector<Rat>& p) {
    if (simplex.empty()) throw StructuralError("barycentric_coordinates: empty simplex");
    const std::size_t d = simplex[0].dim();
    if (p.size() != d) throw DomainError("barycentric_coordinates: point dimension mismatch");
    const std::size_t k1 = simplex.size(); // number of unknowns

    // rows: one per coordinate plus the affine constraint; columns: k1 + rhs
    std::vector<std::vector<Rat>> m(d + 1, std::vector<Rat>(k1 + 1));
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t a = 0; a < k1; ++a)
            m[c][a] = Rat(simplex[a].coords[c], simplex[a].den);
        m[c][k1] = p[c];
    }
    for (std::size_t a = 0; a < k1; ++a) m[d][a] = 1;
    m[d][k1] = 1;

    // row echelon with exact pivots
    std::vector<std::size_t> pivot_row_of_col(k1, SIZE_MAX);
    std::size_t row = 0;
    for (std::size_t col = 0; col < k1 && row <= d; ++col) {
        std::size_t piv = row;
        while (piv <= d && m[piv][col] == 0) ++piv;
        if (piv > d) continue;
        std::swap(m[piv], m[row]);
        for (std::size_t r = 0; r <= d; ++r) {
            if (r == row || m[r][col] == 0) continue;
            Rat factor = m[r][col] / m[row][col];
            for (std::size_t cc = col; cc <= k1; ++cc)
                m[r][cc] -= factor * m[row][cc];
        }
        pivot_row_of_col[col] = row;
        ++row;
    }
    // inconsistent system: p lies off the affine hull
    for (std::size_t r = row; r <= d; ++r)
        if (m[r][k1] != 0) return std::nullopt;
    // affinely dependent vertex set: refuse to certify
    for (std::size_t col = 0; col < k1; ++col)
        if (pivot_row_of_col[col] == SIZE_MAX) return std::nullopt;

    std::vector<Rat> lambda(k1);
    for (std::size_t col = 0; col < k1; ++col) {
        std::size_t r = pivot_row_of_col[col];
        lambda[col] = m[r][k1] / m[r][col];
        if (lambda[col] < 0) return std::nullopt;
    }
    return lambda;
}

std::optional<std::pair<std::size_t, std::vector<Rat>>>
locate_point(const Triangulation& t, const std::vector<Rat>& p) {
    const auto& maximal = t.maximal_simplexes();
    for (std::size_t s = 0; s < maximal.size(); ++s) {
        std::vector<HomogeneousPoint> pts;
        pts.reserve(maximal[s].size());
        for (int v : maximal[s]) pts.push_back(t.vertex(v));
        if (auto lambda = barycentric_coordinates(pts, p))
            return std::make_pair(s, std::move(*lambda));
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Exact linear programming (two-phase primal simplex, Bland's rule) for the
// pairwise intersection check.
// ---------------------------------------------------------------------------

namespace {

struct LpResult {
    bool feasible;
    Rat optimum;
};

/// Maximize c.x subject to A x = b, x >= 0. The feasible set must be
/// bounded; unboundedness means a caller bug.
LpResult lp_maximize(std::vector<std::vector<Rat>> A, std::vector<Rat> b,
                     const std::vector<Rat>& c) {
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    for (std::size_t r = 0; r < m; ++r)
        if (b[r] < 0) {
            for (auto& x : A[r]) x = -x;
            b[r] = -b[r];
        }
    // columns 0..n-1 original, n..n+m-1 artificial
    for (std::size_t r = 0; r < m; ++r) {
        A[r].resize(n + m, Rat(0));
        A[r][n + r] = 1;
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;

    auto run = [&](const std::vector<Rat>& cost, std::size_t ncols) {
        while (true) {
            // reduced costs for a maximization step: enter on positive
            std::size_t enter = SIZE_MAX;
            for (std::size_t jcol = 0; jcol < ncols; ++jcol) {
                Rat red = cost[jcol];
                for (std::size_t r = 0; r < m; ++r)
                    red -= cost[basis[r]] * A[r][jcol];
                if (red > 0) {
                    enter = jcol;
                    break; // Bland: smallest index
                }
            }
            if (enter == SIZE_MAX) return true;
            std::size_t leave = SIZE_MAX;
            Rat best;
            for (std::size_t r = 0; r < m; ++r) {
                if (A[r][enter] <= 0) continue;
                Rat ratio = b[r] / A[r][enter];
                if (leave == SIZE_MAX || ratio < best ||
                    (ratio == best && basis[r] < basis[leave])) {
                    best = ratio;
                    leave = r;
                }
            }
            if (leave == SIZE_MAX) return false; // unbounded
            Rat piv = A[leave][enter];
            for (auto& x : A[leave]) x /= piv;
            b[leave] /= piv;
            for (std::size_t r = 0; r < m; ++r) {
                if (r == leave || A[r][enter] == 0) continue;
                Rat f = A[r][enter];
                for (std::size_t jcol = 0; jcol < n + m; ++jcol)
                    A[r][jcol] -= f * A[leave][jcol];
                b[r] -= f * b[leave];
            }
            basis[leave] = enter;
        }
    };

    // phase 1: drive the artificials to zero
    std::vector<Rat> phase1(n + m, Rat(0));
    for (std::size_t r = 0; r < m; ++r) phase1[n + r] = -1;
    if (!run(phase1, n + m))
        throw InternalError("lp_maximize: phase 1 unbounded");
    Rat art_sum = 0;
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] >= n) art_sum += b[r];
    if (art_sum != 0) return {false, Rat(0)};
    // pivot leftover artificials out where possible
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n) continue;
        std::size_t enter = SIZE_MAX;
        for (std::size_t jcol = 0; jcol < n; ++jcol)
            if (A[r][jcol] != 0) {
                enter = jcol;
                break;
            }
        if (enter == SIZE_MAX) continue; // redundant row, harmless
        Rat piv = A[r][enter];
        for (auto& x : A[r]) x /= piv;
        b[r] /= piv;
        for (std::size_t rr = 0; rr < m; ++rr) {
            if (rr == r || A[rr][enter] == 0) continue;
            Rat f = A[rr][enter];
            for (std::size_t jcol = 0; jcol < n + m; ++jcol)
                A[rr][jcol] -= f * A[r][jcol];
            b[rr] -= f * b[r];
        }
        basis[r] = enter;
    }

    // phase 2 over the original columns only
    std::vector<Rat> phase2(n + m, Rat(0));
    for (std::size_t jcol = 0; jcol < n; ++jcol) phase2[jcol] = c[jcol];
    if (!run(phase2, n))
        throw InternalError("lp_maximize: objective unbounded on a bounded polytope");
    Rat value = 0;
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] < n) value += c[basis[r]] * b[r];
    return {true, value};
}

struct BoundingBox {
    std::vector<Rat> lo, hi;
};

BoundingBox tuple_bbox(const Triangulation& t, const std::vector<int>& tuple) {
    const std::size_t d = static_cast<std::size_t>(t.ambient_dim());
    BoundingBox box;
    box.lo.assign(d, Rat(2));
    box.hi.assign(d, Rat(-1));
    for (int v : tuple) {
        const auto& pt = t.vertex(v);
        for (std::size_t c = 0; c < d; ++c) {
            Rat x(pt.coords[c], pt.den);
            if (x < box.lo[c]) box.lo[c] = x;
            if (x > box.hi[c]) box.hi[c] = x;
        }
    }
    return box;
}

bool boxes_meet(const BoundingBox& a, const BoundingBox& b) {
    for (std::size_t c = 0; c < a.lo.size(); ++c)
        if (a.hi[c] < b.lo[c] || b.hi[c] < a.lo[c]) return false;
    return true;
}

} // namespace

bool is_valid_complex(const Triangulation& t, std::string* why) {
    const auto& maximal = t.maximal_simplexes();
    for (std::size_t s = 0; s < maximal.size(); ++s) {
        if (simplex_minor_gcd(t, maximal[s]) == 0) {
            if (why) *why = "simplex " + std::to_string(s) + " is affinely dependent";
            return false;
        }
    }
    std::vector<BoundingBox> boxes;
    boxes.reserve(maximal.size());
    for (const auto& tuple : maximal) boxes.push_back(tuple_bbox(t, tuple));

    const std::size_t d = static_cast<std::size_t>(t.ambient_dim());
    for (std::size_t a = 0; a < maximal.size(); ++a) {
        for (std::size_t bidx = a + 1; bidx < maximal.size(); ++bidx) {
            if (!boxes_meet(boxes[a], boxes[bidx])) continue;
            const auto& S = maximal[a];
            const auto& T = maximal[bidx];
            if (is_subset(S, T) || is_subset(T, S)) continue;
            std::vector<int> common;
            std::set_intersection(S.begin(), S.end(), T.begin(), T.end(),
                                  std::back_inserter(common));

            // Feasible points of { x in S } ∩ { x in T }: coordinates agree,
            // both barycentric families sum to one. Objective: total weight
            // on non-shared vertices; a valid complex forces it to zero.
            const std::size_t ns = S.size(), nt = T.size();
            std::vector<std::vector<Rat>> A(d + 2, std::vector<Rat>(ns + nt, Rat(0)));
            std::vector<Rat> b(d + 2, Rat(0));
            for (std::size_t c = 0; c < d; ++c) {
                for (std::size_t i = 0; i < ns; ++i) {
                    const auto& pt = t.vertex(S[i]);
                    A[c][i] = Rat(pt.coords[c], pt.den);
                }
                for (std::size_t j = 0; j < nt; ++j) {
                    const auto& pt = t.vertex(T[j]);
                    A[c][ns + j] = -Rat(pt.coords[c], pt.den);
                }
            }
            for (std::size_t i = 0; i < ns; ++i) A[d][i] = 1;
            b[d] = 1;
            for (std::size_t j = 0; j < nt; ++j) A[d + 1][ns + j] = 1;
            b[d + 1] = 1;
            std::vector<Rat> c_obj(ns + nt, Rat(0));
            for (std::size_t i = 0; i < ns; ++i)
                if (!std::binary_search(common.begin(), common.end(), S[i])) c_obj[i] = 1;
            for (std::size_t j = 0; j < nt; ++j)
                if (!std::binary_search(common.begin(), common.end(), T[j])) c_obj[ns + j] = 1;

            LpResult res = lp_maximize(std::move(A), std::move(b), c_obj);
            if (res.feasible && res.optimum != 0) {
                if (why)
                    *why = "simplexes " + std::to_string(a) + " and " + std::to_string(bidx) +
                           " intersect outside their common face";
                return false;
            }
        }
    }
    return true;
}

Rat total_volume(const Triangulation& t) {
    const int d = t.ambient_dim();
    Int d_factorial = 1;
    for (int i = 2; i <= d; ++i) d_factorial *= i;
    Rat vol = 0;
    for (const auto& tuple : t.maximal_simplexes()) {
        if (tuple.size() != static_cast<std::size_t>(d) + 1) continue;
        std::vector<std::vector<Int>> rows;
        rows.reserve(tuple.size());
        Int den_product = 1;
        for (int v : tuple) {
            rows.push_back(homogeneous_row(t.vertex(v)));
            den_product *= t.vertex(v).den;
        }
        Int det = boost::multiprecision::abs(det_int(std::move(rows)));
        vol += Rat(det, d_factorial * den_product);
    }
    return vol;
}

nlohmann::ordered_json triangulation_to_json(const Triangulation& t) {
    // canonical emission order: vertices sorted by the point order
    std::vector<int> order(t.vertex_count());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return t.vertex(a) < t.vertex(b); });
    std::vector<int> old_to_new(t.vertex_count());
    for (std::size_t i = 0; i < order.size(); ++i)
        old_to_new[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    nlohmann::ordered_json j;
    j["dim"] = t.ambient_dim();
    j["vertices"] = nlohmann::ordered_json::array();
    for (int old : order) j["vertices"].push_back(point_to_json(t.vertex(old)));
    std::vector<std::vector<int>> tuples;
    tuples.reserve(t.maximal_simplexes().size());
    for (const auto& tuple : t.maximal_simplexes()) {
        std::vector<int> mapped;
        mapped.reserve(tuple.size());
        for (int v : tuple) mapped.push_back(old_to_new[static_cast<std::size_t>(v)]);
        std::sort(mapped.begin(), mapped.end());
        tuples.push_back(std::move(mapped));
    }
    std::sort(tuples.begin(), tuples.end());
    j["simplices"] = tuples;
    return j;
}

Triangulation triangulation_from_json(const nlohmann::json& j) {
    int dim = j.at("dim").get<int>();
    std::vector<HomogeneousPoint> vertices;
    for (const auto& pj : j.at("vertices")) vertices.push_back(point_from_json(pj));
    std::vector<std::vector<int>> maximal;
    for (const auto& sj : j.at("simplices")) maximal.push_back(sj.get<std::vector<int>>());
    return Triangulation(dim, std::move(vertices), std::move(maximal));
}

} // namespace mvchi
