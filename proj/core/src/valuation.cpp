#include "mvchi/valuation.hpp"

#include <algorithm>
#include <limits>

#include "reduction_detail.hpp"

namespace mvchi {

std::string method_name(Method m) {
    switch (m) {
    case Method::Auto: return "auto";
    case Method::Geometric: return "geometric";
    case Method::Recursive: return "recursive";
    case Method::Both: return "both";
    }
    throw InternalError("method_name: unreachable");
}

Int n_bound(const HatDecomposition& dec) {
    if (dec.terms.empty())
        throw DomainError("n_bound: the zero function has no level bound");
    Int n = 0;
    for (const auto& term : dec.terms) {
        Int ni = (term.denominator + term.multiplicity - 1) / term.multiplicity;
        if (ni > n) n = ni;
    }
    return n;
}

namespace {

struct UplevelOneset {
    Triangulation fine;
    std::vector<Rat> clamped; // min(1, k a) at each vertex of fine
    Subcomplex one;
};

/// Refine until {a >= 1/k} is a union of faces and trace it out.
UplevelOneset uplevel_oneset(const McNaughtonRep& rep, const Int& k,
                             const LinearizeOptions& lopts) {
    McNaughtonRep fine = refine_uplevel(rep, k, lopts);
    std::vector<Rat> clamped;
    clamped.reserve(fine.values.size());
    for (const Rat& v : fine.values) {
        Rat s = Rat(k) * v;
        clamped.push_back(s > 1 ? Rat(1) : s);
    }
    Subcomplex one = subcomplex_where(fine.triangulation, clamped, Rat(1));
    return UplevelOneset{std::move(fine.triangulation), std::move(clamped), std::move(one)};
}

/**
 * E(sum of the hats at `hats` over delta) by the reduction recursion:
 * E(empty) = 0, E(single) = 1, otherwise split off the canonically smallest
 * peak b0 and use E = 1 + E(rest) - E(c-hats over the reduced
 * triangulation). Budget counts recursion nodes.
 *
 * The rest-branch always recurses on the same complex with one peak fewer,
 * so it is unrolled into a loop here, and each round's reduction runs in
 * place on the shared complex: the c-branch is settled while the blow-ups
 * are live, then they are rolled back before the next round. This keeps the
 * whole recursion free of per-node triangulation copies.
 */
long long recursion_scheme(Triangulation& delta, std::vector<int> hats, long long& budget,
                           const ValuationOptions& opts) {
    auto by_point = [&](int a, int b) { return delta.vertex(a) < delta.vertex(b); };
    if (!std::is_sorted(hats.begin(), hats.end(), by_point))
        std::sort(hats.begin(), hats.end(), by_point);

    long long acc = 0;
    std::vector<int> rest;
    for (std::size_t lo = 0;; ++lo) { // hats[lo..] is the live list of peaks
        if (--budget < 0)
            throw ResourceLimitError(
                "recursive valuation: node budget exhausted (the scheme is "
                "exponential in the number of hats); use the geometric method",
                std::make_shared<const Triangulation>(delta));
        const std::size_t n = hats.size() - lo;
        if (n == 0) return acc;
        if (n == 1) return acc + 1;
        const int b0 = hats[lo];
        rest.assign(hats.begin() + static_cast<std::ptrdiff_t>(lo) + 1, hats.end());

        ReductionOptions ropts = opts.reduction;
        ropts.rng_seed = opts.reduction.rng_seed ^
                         (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(budget));
        detail::BlowUpLog log;
        detail::ReductionCore core = detail::reduce_in_place(delta, b0, rest, ropts, &log);

        long long e_c = recursion_scheme(delta, std::move(core.c_vertices), budget, opts);
        detail::revert_blow_ups(delta, log);
        acc += 1 - e_c;
    }
}

TriangulationStats stats_of(const Triangulation& t) {
    TriangulationStats s;
    s.vertices = static_cast<long long>(t.vertex_count());
    s.maximal_simplexes = static_cast<long long>(t.maximal_simplexes().size());
    s.max_denominator = 1;
    for (const auto& v : t.vertices())
        if (v.den > s.max_denominator) s.max_denominator = v.den;
    return s;
}

std::vector<long long> padded_counts(const std::vector<long long>& counts, int dim) {
    std::vector<long long> out(static_cast<std::size_t>(dim) + 1, 0);
    for (std::size_t i = 0; i < counts.size() && i < out.size(); ++i) out[i] = counts[i];
    return out;
}

} // namespace

long long euler_geometric_rep(const McNaughtonRep& rep, const ValuationOptions& opts) {
    HatDecomposition dec = hat_decomposition(rep);
    if (dec.terms.empty()) return 0;
    Int n = n_bound(dec);
    return uplevel_oneset(rep, n + 1, opts.linearize).one.euler;
}

long long euler_recursive_rep(const McNaughtonRep& rep, const ValuationOptions& opts) {
    HatDecomposition dec = hat_decomposition(rep);
    if (dec.terms.empty()) return 0;
    std::vector<int> hats;
    hats.reserve(dec.terms.size());
    for (const auto& term : dec.terms) hats.push_back(term.vertex);
    long long budget = opts.max_recursion_nodes;
    // working copy: the recursion blows it up and rolls it back in place
    Triangulation delta = rep.triangulation;
    return recursion_scheme(delta, std::move(hats), budget, opts);
}

ReductionTrace root_reduction(const McNaughtonRep& rep, const ReductionOptions& opts) {
    HatDecomposition dec = hat_decomposition(rep);
    if (dec.terms.empty())
        throw DomainError("root_reduction: the zero function has no reduction step");
    const Triangulation& t = rep.triangulation;
    std::size_t b0_pos = 0;
    for (std::size_t i = 1; i < dec.terms.size(); ++i)
        if (t.vertex(dec.terms[i].vertex) < t.vertex(dec.terms[b0_pos].vertex)) b0_pos = i;
    std::vector<int> rest;
    rest.reserve(dec.terms.size() - 1);
    for (std::size_t i = 0; i < dec.terms.size(); ++i)
        if (i != b0_pos) rest.push_back(dec.terms[i].vertex);
    std::sort(rest.begin(), rest.end(),
              [&](int a, int b) { return t.vertex(a) < t.vertex(b); });
    return basis_reduction(t, dec.terms[b0_pos].vertex, rest, opts);
}

ValuationReport euler_valuation(const FormulaPtr& phi, const FormulaPtr& theta, int d,
                                Method method, const ValuationOptions& opts) {
    if (!phi) throw DomainError("euler_valuation: null formula");
    ValuationReport r;
    r.formula = print_formula(phi);
    if (theta) r.theory = print_formula(theta);
    r.dim = d;

    std::vector<FormulaPtr> fs = {phi};
    if (theta) fs.push_back(theta);
    JointLinearization joint = linearizing_triangulation(fs, d, opts.linearize);

    McNaughtonRep rep{kuhn_triangulation(1), {}}; // placeholder, replaced below
    if (theta) {
        try {
            TheoryRestriction res = restrict_to_theory(joint, 1);
            rep = McNaughtonRep{std::move(res.triangulation), std::move(res.values[0])};
        } catch (const InconsistentTheoryError&) {
            r.method = method == Method::Auto ? Method::Both : method;
            r.E = 0;
            r.n_bound = 0;
            r.inconsistent_theory = true;
            r.triangulation = stats_of(joint.triangulation);
            r.oneset_faces = padded_counts({}, d);
            return r;
        }
    } else {
        rep = McNaughtonRep{std::move(joint.triangulation), std::move(joint.values[0])};
    }

    HatDecomposition dec = hat_decomposition(rep);
    Method m = method;
    if (m == Method::Auto)
        m = dec.terms.size() <= opts.both_threshold ? Method::Both : Method::Geometric;
    r.method = m;

    if (dec.terms.empty()) {
        r.E = 0;
        r.n_bound = 0;
        r.zero_function = true;
        r.triangulation = stats_of(rep.triangulation);
        r.oneset_faces = padded_counts({}, d);
        return r;
    }

    Int n = n_bound(dec);
    r.n_bound = n;
    // the uplevel refinement also provides the report's triangulation stats
    // and face counts, whatever the method
    UplevelOneset lift = uplevel_oneset(rep, n + 1, opts.linearize);
    const long long e_geo = lift.one.euler;
    r.triangulation = stats_of(lift.fine);
    r.oneset_faces = padded_counts(lift.one.counts, d);

    switch (m) {
    case Method::Geometric:
        r.E = e_geo;
        break;
    case Method::Recursive:
        r.E = euler_recursive_rep(rep, opts);
        break;
    case Method::Both: {
        long long e_rec = euler_recursive_rep(rep, opts);
        if (e_rec != e_geo)
            throw InternalError("euler_valuation: the geometric and recursive methods "
                                "disagree (geometric " + std::to_string(e_geo) +
                                ", recursive " + std::to_string(e_rec) + ")");
        r.E = e_geo;
        break;
    }
    case Method::Auto:
        throw InternalError("euler_valuation: unresolved method");
    }
    return r;
}

ValuationReport euler_geometric(const FormulaPtr& phi, const FormulaPtr& theta, int d,
                                const ValuationOptions& opts) {
    return euler_valuation(phi, theta, d, Method::Geometric, opts);
}

ValuationReport euler_recursive(const FormulaPtr& phi, const FormulaPtr& theta, int d,
                                const ValuationOptions& opts) {
    return euler_valuation(phi, theta, d, Method::Recursive, opts);
}

std::vector<std::pair<Int, long long>> stabilization_check(const FormulaPtr& f, int d,
                                                           const Int& k_lo, const Int& k_hi,
                                                           const ValuationOptions& opts) {
    if (k_lo < 1 || k_hi < k_lo)
        throw DomainError("stabilization_check: need 1 <= k_lo <= k_hi");
    McNaughtonRep rep = linearize_formula(f, d, opts.linearize);
    std::vector<std::pair<Int, long long>> out;
    for (Int k = k_lo; k <= k_hi; ++k)
        out.emplace_back(k, uplevel_oneset(rep, k, opts.linearize).one.euler);
    return out;
}

std::vector<std::pair<Int, long long>> stabilization_check(const FormulaPtr& f, int d,
                                                           const ValuationOptions& opts) {
    McNaughtonRep rep = linearize_formula(f, d, opts.linearize);
    HatDecomposition dec = hat_decomposition(rep);
    Int n = dec.terms.empty() ? Int(0) : n_bound(dec);
    return stabilization_check(f, d, n + 1, n + 4, opts);
}

nlohmann::ordered_json report_to_json(const ValuationReport& r) {
    nlohmann::ordered_json j;
    j["formula"] = r.formula;
    j["theory"] = r.theory ? nlohmann::ordered_json(*r.theory) : nlohmann::ordered_json(nullptr);
    j["dim"] = r.dim;
    j["method"] = method_name(r.method);
    j["E"] = r.E;
    if (r.n_bound > Int(std::numeric_limits<long long>::max()))
        throw InternalError("report_to_json: n bound exceeds the integer range");
    j["n_bound"] = r.n_bound.convert_to<long long>();
    nlohmann::ordered_json stats;
    stats["vertices"] = r.triangulation.vertices;
    stats["maximal_simplexes"] = r.triangulation.maximal_simplexes;
    stats["max_denominator"] = r.triangulation.max_denominator.str();
    j["triangulation"] = std::move(stats);
    j["oneset_faces"] = r.oneset_faces;
    if (r.zero_function || r.inconsistent_theory) {
        nlohmann::ordered_json flags;
        if (r.zero_function) flags["zero_function"] = true;
        if (r.inconsistent_theory) flags["inconsistent_theory"] = true;
        j["flags"] = std::move(flags);
    }
    return j;
}

} // namespace mvchi
