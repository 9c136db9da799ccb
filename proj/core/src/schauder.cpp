#include "mvchi/schauder.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "reduction_detail.hpp"

namespace mvchi {

namespace {

std::vector<Rat> hat_values(const Triangulation& t, int v) {
    if (v < 0 || static_cast<std::size_t>(v) >= t.vertex_count())
        throw DomainError("hat_function: vertex index out of range");
    std::vector<Rat> vals(t.vertex_count(), Rat(0));
    vals[static_cast<std::size_t>(v)] = Rat(1, t.vertex(v).den);
    return vals;
}

/**
 * A function carried through the reduction, stored by its nonzero vertex
 * values. Everything the reduction manipulates (the hats, their minima, the
 * shrinking b_0^k) vanishes at all but a handful of vertices, so sparse
 * storage turns the bookkeeping from O(hats x vertices) into O(hats).
 */
/// a < b by cross-multiplication. The library ordering on rationals runs a
/// division-based algorithm that dominates profiles on these hot loops;
/// denominators are kept positive, so the cross product preserves order.
bool rat_less(const Rat& a, const Rat& b) {
    Int lhs = rat_num(a) * rat_den(b);
    Int rhs = rat_num(b) * rat_den(a);
    return lhs < rhs;
}

class SparseValues {
public:
    /// The entry at v, or nullptr when the value there is zero.
    const Rat* find(int v) const {
        for (const auto& e : entries_)
            if (e.first == v) return &e.second;
        return nullptr;
    }

    Rat at(int v) const {
        const Rat* p = find(v);
        return p ? *p : Rat(0);
    }

    void set(int v, Rat val) { entries_.emplace_back(v, std::move(val)); }

    /// Subtracts val at v, dropping the entry when it reaches exact zero.
    void subtract(int v, const Rat& val) {
        if (val == 0) return;
        for (auto it = entries_.begin(); it != entries_.end(); ++it) {
            if (it->first == v) {
                it->second -= val;
                if (it->second == 0) entries_.erase(it);
                return;
            }
        }
        entries_.emplace_back(v, -val);
    }

    /// Records the value interpolated at the mediant of (i, j); di and dj
    /// are the endpoint denominators before the blow-up.
    void extend_at_mediant(int mediant, int i, int j, const Int& di, const Int& dj) {
        const Rat* vi = find(i);
        const Rat* vj = find(j);
        if (!vi && !vj) return; // nothing to interpolate
        Rat val = (Rat(di) * (vi ? *vi : Rat(0)) + Rat(dj) * (vj ? *vj : Rat(0))) / Rat(di + dj);
        if (val != 0) set(mediant, std::move(val));
    }

    const std::vector<std::pair<int, Rat>>& entries() const { return entries_; }

private:
    std::vector<std::pair<int, Rat>> entries_;
};

} // namespace

McNaughtonRep hat_function(const Triangulation& t, int v) {
    return McNaughtonRep{t, hat_values(t, v)};
}

HatDecomposition hat_decomposition(const McNaughtonRep& a) {
    if (a.values.size() != a.triangulation.vertex_count())
        throw DomainError("hat_decomposition: one value per vertex required");
    HatDecomposition out{a.triangulation, {}};
    for (std::size_t v = 0; v < a.values.size(); ++v) {
        const Rat& val = a.values[v];
        if (val < 0 || val > 1)
            throw DomainError("hat_decomposition: vertex value outside [0,1]");
        const Int& den = a.triangulation.vertex(static_cast<int>(v)).den;
        Rat m = val * Rat(den);
        if (rat_den(m) != 1)
            throw InternalError(
                "hat_decomposition: den(v) * a(v) is not an integer; the input "
                "is not linear over a regular triangulation");
        if (m != 0)
            out.terms.push_back(HatTerm{static_cast<int>(v), rat_num(m), den});
    }
    return out;
}

namespace detail {

ReductionCore reduce_in_place(Triangulation& cur, int b0, const std::vector<int>& rest,
                              const ReductionOptions& opts, BlowUpLog* log) {
    auto check_index = [&](int v) {
        if (v < 0 || static_cast<std::size_t>(v) >= cur.vertex_count())
            throw DomainError("basis_reduction: vertex index out of range");
    };
    check_index(b0);
    for (int v : rest) {
        check_index(v);
        if (v == b0) throw DomainError("basis_reduction: rest must not contain b0");
    }
    {
        std::vector<int> sorted = rest;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw DomainError("basis_reduction: rest contains a repeated vertex");
    }
    if (log) log->orig_vertex_count = cur.vertex_count();

    // Neighbours of b0, kept current across blow-ups: subdividing (b0, vk)
    // removes exactly the simplexes containing both endpoints, and each such
    // simplex leaves a copy with vk dropped, so every other edge at b0
    // survives; the only new edge at b0 goes to the mediant.
    std::set<int> b0_nbrs;
    for (const auto& tuple : cur.maximal_simplexes())
        if (std::binary_search(tuple.begin(), tuple.end(), b0))
            for (int v : tuple)
                if (v != b0) b0_nbrs.insert(v);
    auto sparse_hat = [&](int v) {
        SparseValues w;
        w.set(v, Rat(1, cur.vertex(v).den));
        return w;
    };
    SparseValues b0_orig = sparse_hat(b0); // the hat of t, carried along
    SparseValues b0_cur = b0_orig;         // b_0^k
    std::vector<SparseValues> bks;         // hats of t at rest, carried along
    bks.reserve(rest.size());
    for (int v : rest) bks.push_back(sparse_hat(v));
    std::vector<SparseValues> cs; // c_1..c_u, zero entries included
    cs.reserve(rest.size());

    std::vector<ReductionStep> steps;
    steps.reserve(rest.size());

    for (std::size_t k = 0; k < rest.size(); ++k) {
        const int vk = rest[k];
        ReductionStep step{static_cast<int>(k) + 1, vk, false, -1, false};
        if (b0_nbrs.count(vk) != 0) {
            const Int di = cur.vertex(b0).den, dj = cur.vertex(vk).den;
            const int mediant = static_cast<int>(cur.vertex_count());
            b0_orig.extend_at_mediant(mediant, b0, vk, di, dj);
            b0_cur.extend_at_mediant(mediant, b0, vk, di, dj);
            for (auto& w : bks) w.extend_at_mediant(mediant, b0, vk, di, dj);
            for (auto& w : cs) w.extend_at_mediant(mediant, b0, vk, di, dj);
            BlowUpResult res = blow_up_detailed(std::move(cur), b0, vk);
            cur = std::move(res.triangulation);
            if (log) {
                // a replaced tuple we created ourselves cancels out; anything
                // older must come back when the caller reverts
                for (auto& gone : res.removed) {
                    auto it = log->net_added.find(gone);
                    if (it != log->net_added.end())
                        log->net_added.erase(it);
                    else
                        log->net_removed.insert(std::move(gone));
                }
                for (auto& fresh : res.added) log->net_added.insert(std::move(fresh));
            }
            b0_nbrs.erase(vk);
            b0_nbrs.insert(mediant);
            step.blew_up = true;
            step.mediant = mediant;
        }
        // c_k = b_k /\ b_0^{k-1}: nonzero only where b_k is, since both
        // functions are nonnegative
        SparseValues c;
        for (const auto& e : bks[k].entries()) {
            const Rat* b0v = b0_cur.find(e.first);
            if (!b0v) continue;
            const Rat& m = rat_less(e.second, *b0v) ? e.second : *b0v;
            if (m != 0) c.set(e.first, m);
        }
        for (const auto& e : c.entries()) b0_cur.subtract(e.first, e.second);
        step.c_nonzero = !c.entries().empty();
        cs.push_back(std::move(c));
        steps.push_back(step);
    }

    // every nonzero c_k must be a hat of the final triangulation, and their
    // peaks pairwise distinct
    std::vector<int> peaks;
    for (const auto& c : cs) {
        if (c.entries().empty()) continue;
        if (c.entries().size() > 1)
            throw InternalError("basis_reduction: c_k supported on two vertices");
        const auto& e = c.entries().front();
        if (e.second != Rat(1, cur.vertex(e.first).den))
            throw InternalError("basis_reduction: c_k peak is not 1/den");
        peaks.push_back(e.first);
    }
    {
        std::vector<int> sorted = peaks;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw InternalError("basis_reduction: two c_k share a peak vertex");
    }

    // The reduction identity min(b_0, sum b_k) = sum c_k at every vertex.
    // Every carried entry is positive (checked while gathering), so off
    // supp(b_0) and supp(sum c_k) both sides are exactly zero and only the
    // support union needs the full comparison.
    auto gather_positive = [](const SparseValues* begin, const SparseValues* end,
                              const char* what) {
        std::vector<std::pair<int, Rat>> out;
        for (const SparseValues* w = begin; w != end; ++w)
            for (const auto& e : w->entries()) {
                if (rat_num(e.second) <= 0)
                    throw InternalError(std::string("basis_reduction: ") + what +
                                        " carries a non-positive entry");
                out.push_back(e);
            }
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::pair<int, Rat>> merged;
        merged.reserve(out.size());
        for (auto& e : out) {
            if (!merged.empty() && merged.back().first == e.first)
                merged.back().second += e.second;
            else
                merged.push_back(std::move(e));
        }
        return merged;
    };
    std::vector<std::pair<int, Rat>> sum_b =
        gather_positive(bks.data(), bks.data() + bks.size(), "a hat");
    std::vector<std::pair<int, Rat>> sum_c =
        gather_positive(cs.data(), cs.data() + cs.size(), "a c-term");
    std::vector<std::pair<int, Rat>> b0e = gather_positive(&b0_orig, &b0_orig + 1, "b_0");
    const Rat zero(0);
    auto sum_b_at = [&](int v) -> const Rat& {
        auto it = std::lower_bound(sum_b.begin(), sum_b.end(), v,
                                   [](const auto& e, int x) { return e.first < x; });
        return it != sum_b.end() && it->first == v ? it->second : zero;
    };
    std::size_t bi = 0, ci = 0;
    while (bi < b0e.size() || ci < sum_c.size()) {
        int v;
        if (ci >= sum_c.size())
            v = b0e[bi].first;
        else if (bi >= b0e.size())
            v = sum_c[ci].first;
        else
            v = std::min(b0e[bi].first, sum_c[ci].first);
        const Rat& bval = bi < b0e.size() && b0e[bi].first == v ? b0e[bi].second : zero;
        const Rat& cval = ci < sum_c.size() && sum_c[ci].first == v ? sum_c[ci].second : zero;
        const Rat& sbval = sum_b_at(v);
        const Rat& lhs = rat_less(sbval, bval) ? sbval : bval;
        if (lhs != cval)
            throw InternalError("basis_reduction: reduction identity fails at a vertex");
        if (bi < b0e.size() && b0e[bi].first == v) ++bi;
        if (ci < sum_c.size() && sum_c[ci].first == v) ++ci;
    }
    if (opts.identity_samples > 0) {
        auto interp = [&](const SparseValues& w, const std::vector<Rat>& lambda,
                          const std::vector<int>& tuple) {
            Rat s = 0;
            for (std::size_t a = 0; a < tuple.size(); ++a)
                s += lambda[a] * w.at(tuple[a]);
            return s;
        };
        SplitMix64 rng(opts.rng_seed);
        for (int s = 0; s < opts.identity_samples; ++s) {
            std::vector<Rat> p = random_carrier_point(cur, rng);
            auto hit = locate_point(cur, p);
            if (!hit) throw InternalError("basis_reduction: sampled point misses the carrier");
            const std::vector<Rat>& lambda = hit->second;
            const std::vector<int>& tuple = cur.maximal_simplexes()[hit->first];
            Rat lhs = interp(b0_orig, lambda, tuple);
            Rat sb = 0;
            for (const auto& w : bks) sb += interp(w, lambda, tuple);
            if (sb < lhs) lhs = sb;
            Rat rhs = 0;
            for (const auto& w : cs) rhs += interp(w, lambda, tuple);
            if (lhs != rhs)
                throw InternalError("basis_reduction: reduction identity fails at a sample");
        }
    }

    return ReductionCore{b0, std::move(peaks), std::move(steps)};
}

void revert_blow_ups(Triangulation& cur, const BlowUpLog& log) {
    std::vector<std::vector<int>> drop(log.net_added.begin(), log.net_added.end());
    std::vector<std::vector<int>> restore(log.net_removed.begin(), log.net_removed.end());
    cur.revert_to(log.orig_vertex_count, drop, restore);
}

} // namespace detail

ReductionTrace basis_reduction(const Triangulation& t, int b0, const std::vector<int>& rest,
                               const ReductionOptions& opts) {
    Triangulation cur = t;
    detail::ReductionCore core = detail::reduce_in_place(cur, b0, rest, opts, nullptr);
    return ReductionTrace{std::move(cur), core.b0, std::move(core.c_vertices),
                          std::move(core.steps)};
}

std::vector<Rat> random_carrier_point(const Triangulation& t, SplitMix64& rng,
                                      std::uint64_t max_weight) {
    if (max_weight == 0) throw DomainError("random_carrier_point: max_weight must be positive");
    const auto& maximal = t.maximal_simplexes();
    const auto& tuple = maximal[static_cast<std::size_t>(
        rng.below(static_cast<std::uint64_t>(maximal.size())))];
    std::vector<Int> weights(tuple.size());
    while (true) {
        bool any = false;
        for (auto& w : weights) {
            w = Int(rng.below(max_weight + 1));
            any = any || w != 0;
        }
        if (any) break;
    }
    Int total = std::accumulate(weights.begin(), weights.end(), Int(0));
    std::vector<Rat> p(static_cast<std::size_t>(t.ambient_dim()), Rat(0));
    for (std::size_t a = 0; a < tuple.size(); ++a) {
        std::vector<Rat> corner = dehomogenize(t.vertex(tuple[a]));
        for (std::size_t c = 0; c < p.size(); ++c)
            p[c] += Rat(weights[a], total) * corner[c];
    }
    return p;
}

nlohmann::ordered_json reduction_trace_to_json(const ReductionTrace& trace) {
    const Triangulation& t = trace.triangulation;
    // match the canonical vertex order of triangulation_to_json
    std::vector<int> order(t.vertex_count());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return t.vertex(a) < t.vertex(b); });
    std::vector<int> canon(t.vertex_count());
    for (std::size_t i = 0; i < order.size(); ++i)
        canon[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    nlohmann::ordered_json j;
    j["b0"] = canon[static_cast<std::size_t>(trace.b0)];
    j["steps"] = nlohmann::ordered_json::array();
    for (const auto& s : trace.steps) {
        nlohmann::ordered_json step;
        step["k"] = s.k;
        step["vertex"] = canon[static_cast<std::size_t>(s.vertex)];
        if (s.blew_up) {
            nlohmann::ordered_json blow;
            blow["edge"] = {canon[static_cast<std::size_t>(trace.b0)],
                            canon[static_cast<std::size_t>(s.vertex)]};
            blow["mediant"] = canon[static_cast<std::size_t>(s.mediant)];
            step["blow_up"] = std::move(blow);
        } else {
            step["blow_up"] = nullptr;
        }
        step["c_nonzero"] = s.c_nonzero;
        j["steps"].push_back(std::move(step));
    }
    j["c_vertices"] = nlohmann::ordered_json::array();
    for (int v : trace.c_vertices) j["c_vertices"].push_back(canon[static_cast<std::size_t>(v)]);
    j["triangulation"] = triangulation_to_json(t);
    return j;
}

} // namespace mvchi
