#include "mvchi/linearize.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mvchi {

Rat AffineFunctional::value_at(const HomogeneousPoint& v) const {
    Int num = constant * v.den;
    for (std::size_t c = 0; c < coeffs.size(); ++c)
        num += coeffs[c] * v.coords[c];
    return Rat(num, v.den);
}

int AffineFunctional::sign_at(const HomogeneousPoint& v) const {
    Int num = constant * v.den;
    for (std::size_t c = 0; c < coeffs.size(); ++c)
        num += coeffs[c] * v.coords[c];
    return num.sign();
}

namespace {

// internal control flow: thrown at a truncation node with a strictly
// sign-changing witness, converted to NeedsSplit at the API boundary
struct SplitRequest {
    AffineFunctional witness;
};

AffineFunctional af_const(std::size_t d, Int c) {
    return AffineFunctional{std::vector<Int>(d, Int(0)), std::move(c)};
}

AffineFunctional af_add(const AffineFunctional& a, const AffineFunctional& b, const Int& shift) {
    AffineFunctional r = a;
    for (std::size_t c = 0; c < r.coeffs.size(); ++c) r.coeffs[c] += b.coeffs[c];
    r.constant += b.constant + shift;
    return r;
}

AffineFunctional af_sub(const AffineFunctional& a, const AffineFunctional& b) {
    AffineFunctional r = a;
    for (std::size_t c = 0; c < r.coeffs.size(); ++c) r.coeffs[c] -= b.coeffs[c];
    r.constant -= b.constant;
    return r;
}

enum class SignClass { NonNegative, NonPositive, Mixed };

SignClass classify(const AffineFunctional& h, const std::vector<HomogeneousPoint>& pts) {
    bool pos = false, neg = false;
    for (const auto& p : pts) {
        int s = h.sign_at(p);
        pos = pos || s > 0;
        neg = neg || s < 0;
    }
    if (pos && neg) return SignClass::Mixed;
    if (neg) return SignClass::NonPositive;
    return SignClass::NonNegative;
}

/// Bottom-up affine form of a Scalar-free formula over the simplex spanned
/// by pts; throws SplitRequest where no single affine branch is valid.
AffineFunctional eval_affine(const FormulaPtr& f, const std::vector<HomogeneousPoint>& pts,
                             std::size_t d) {
    switch (f->kind) {
    case NodeKind::Const0:
        return af_const(d, 0);
    case NodeKind::Const1:
        return af_const(d, 1);
    case NodeKind::Var: {
        AffineFunctional r = af_const(d, 0);
        r.coeffs[static_cast<std::size_t>(f->var) - 1] = 1;
        return r;
    }
    case NodeKind::Neg: {
        AffineFunctional a = eval_affine(f->left, pts, d);
        for (auto& c : a.coeffs) c = -c;
        a.constant = 1 - a.constant;
        return a;
    }
    case NodeKind::OPlus: {
        AffineFunctional a = eval_affine(f->left, pts, d);
        AffineFunctional b = eval_affine(f->right, pts, d);
        AffineFunctional h = af_add(a, b, Int(-1)); // a + b - 1
        switch (classify(h, pts)) {
        case SignClass::NonNegative: return af_const(d, 1);
        case SignClass::NonPositive: return af_add(a, b, Int(0));
        case SignClass::Mixed: throw SplitRequest{std::move(h)};
        }
        break;
    }
    case NodeKind::OTimes: {
        AffineFunctional a = eval_affine(f->left, pts, d);
        AffineFunctional b = eval_affine(f->right, pts, d);
        AffineFunctional h = af_add(a, b, Int(-1));
        switch (classify(h, pts)) {
        case SignClass::NonNegative: return h;
        case SignClass::NonPositive: return af_const(d, 0);
        case SignClass::Mixed: throw SplitRequest{std::move(h)};
        }
        break;
    }
    case NodeKind::Join:
    case NodeKind::Meet: {
        AffineFunctional a = eval_affine(f->left, pts, d);
        AffineFunctional b = eval_affine(f->right, pts, d);
        AffineFunctional h = af_sub(a, b);
        bool take_left = (f->kind == NodeKind::Join);
        switch (classify(h, pts)) {
        case SignClass::NonNegative: return take_left ? a : b;
        case SignClass::NonPositive: return take_left ? b : a;
        case SignClass::Mixed: throw SplitRequest{std::move(h)};
        }
        break;
    }
    case NodeKind::Minus: {
        AffineFunctional a = eval_affine(f->left, pts, d);
        AffineFunctional b = eval_affine(f->right, pts, d);
        AffineFunctional h = af_sub(a, b);
        switch (classify(h, pts)) {
        case SignClass::NonNegative: return h;
        case SignClass::NonPositive: return af_const(d, 0);
        case SignClass::Mixed: throw SplitRequest{std::move(h)};
        }
        break;
    }
    case NodeKind::Scalar:
        throw InternalError("eval_affine: unexpanded scalar node");
    }
    throw InternalError("eval_affine: unreachable");
}

} // namespace

SymbolicResult symbolic_eval(const FormulaPtr& f, const Simplex& s) {
    if (s.vertices.empty()) throw StructuralError("symbolic_eval: empty simplex");
    const std::size_t d = s.vertices[0].dim();
    if (static_cast<int>(d) < max_var_index(f))
        throw DomainError("symbolic_eval: simplex dimension below the formula's variables");
    FormulaPtr g = expand_scalars(f);
    try {
        return eval_affine(g, s.vertices, d);
    } catch (SplitRequest& req) {
        return NeedsSplit{std::move(req.witness)};
    }
}

JointLinearization linearizing_triangulation(const std::vector<FormulaPtr>& fs, int d,
                                             const LinearizeOptions& opts) {
    for (const auto& f : fs)
        if (max_var_index(f) > d)
            throw DomainError("linearizing_triangulation: dimension below a variable index");
    std::vector<FormulaPtr> expanded;
    expanded.reserve(fs.size());
    for (const auto& f : fs) expanded.push_back(expand_scalars(f));

    Triangulation cur = kuhn_triangulation(d);
    const std::size_t dd = static_cast<std::size_t>(d);

    struct Entry {
        std::vector<int> tuple;
        std::optional<AffineFunctional> witness;
    };
    auto key_of = [&](const std::vector<int>& tuple) {
        std::vector<HomogeneousPoint> pts;
        pts.reserve(tuple.size());
        for (int v : tuple) pts.push_back(cur.vertex(v));
        std::sort(pts.begin(), pts.end());
        return pts;
    };
    auto probe = [&](const std::vector<int>& tuple) {
        Entry e{tuple, std::nullopt};
        std::vector<HomogeneousPoint> pts;
        pts.reserve(tuple.size());
        for (int v : tuple) pts.push_back(cur.vertex(v));
        for (const auto& g : expanded) {
            try {
                eval_affine(g, pts, dd);
            } catch (SplitRequest& req) {
                e.witness = std::move(req.witness);
                break;
            }
        }
        return e;
    };

    std::map<std::vector<HomogeneousPoint>, Entry> cache;
    // Worklist of cache keys whose entry carries a witness.  A witness never
    // changes after the probe, so membership only updates when entries are
    // created or erased; taking *begin() picks the smallest dirty key, the
    // same simplex a scan of the cache in key order would find.
    std::set<std::vector<HomogeneousPoint>> dirty;
    auto remember = [&](const std::vector<int>& tuple) {
        auto key = key_of(tuple);
        Entry e = probe(tuple);
        if (e.witness) dirty.insert(key);
        cache.emplace(std::move(key), std::move(e));
    };
    for (const auto& tuple : cur.maximal_simplexes()) remember(tuple);

    long long blow_ups = 0;
    while (!dirty.empty()) {
        auto hit = cache.find(*dirty.begin());
        if (hit == cache.end() || !hit->second.witness)
            throw InternalError("linearize: stale worklist entry");
        const auto& key = hit->first;
        const AffineFunctional& w = *hit->second.witness;
        int ia = -1, ib = -1;
        for (std::size_t a = 0; a < key.size() && ia < 0; ++a)
            for (std::size_t b = a + 1; b < key.size(); ++b)
                if (w.sign_at(key[a]) * w.sign_at(key[b]) < 0) {
                    ia = static_cast<int>(a);
                    ib = static_cast<int>(b);
                    break;
                }
        if (ia < 0) throw InternalError("linearize: mixed witness without a sign-changing edge");
        int vi = *cur.find_vertex(key[static_cast<std::size_t>(ia)]);
        int vj = *cur.find_vertex(key[static_cast<std::size_t>(ib)]);

        if (++blow_ups > opts.max_blow_ups)
            throw ResourceLimitError("linearize: blow-up budget exhausted",
                                     std::make_shared<const Triangulation>(cur));
        BlowUpResult res = blow_up_detailed(std::move(cur), vi, vj);
        cur = std::move(res.triangulation);
        for (const auto& tuple : res.removed) {
            auto gone = key_of(tuple);
            cache.erase(gone);
            dirty.erase(gone);
        }
        for (const auto& tuple : res.added) remember(tuple);
    }

    JointLinearization out{std::move(cur), {}};
    out.values.reserve(fs.size());
    for (const auto& f : fs) {
        std::vector<Rat> vals;
        vals.reserve(out.triangulation.vertex_count());
        for (const auto& v : out.triangulation.vertices())
            vals.push_back(evaluate(f, dehomogenize(v)));
        out.values.push_back(std::move(vals));
    }
    return out;
}

McNaughtonRep linearize_formula(const FormulaPtr& f, int d, const LinearizeOptions& opts) {
    JointLinearization joint = linearizing_triangulation({f}, d, opts);
    return McNaughtonRep{std::move(joint.triangulation), std::move(joint.values[0])};
}

TheoryRestriction restrict_to_theory(const JointLinearization& joint,
                                     std::size_t theta_index) {
    if (theta_index >= joint.values.size())
        throw DomainError("restrict_to_theory: theory index out of range");
    Subcomplex models =
        subcomplex_where(joint.triangulation, joint.values[theta_index], Rat(1));
    if (models.empty())
        throw InconsistentTheoryError(
            "the theory has an empty oneset; the presented algebra is trivial");
    SubTriangulation sub = restrict_triangulation(joint.triangulation, models.generators);
    TheoryRestriction out{std::move(sub.triangulation), std::move(sub.vertex_map), {}};
    out.values.reserve(joint.values.size());
    for (const auto& vals : joint.values) {
        std::vector<Rat> restricted;
        restricted.reserve(out.vertex_map.size());
        for (int old : out.vertex_map) restricted.push_back(vals[static_cast<std::size_t>(old)]);
        out.values.push_back(std::move(restricted));
    }
    return out;
}

McNaughtonRep refine_uplevel(const McNaughtonRep& rep, const Int& k,
                             const LinearizeOptions& opts) {
    if (k <= 0) throw DomainError("refine_uplevel: level denominator must be positive");
    if (rep.values.size() != rep.triangulation.vertex_count())
        throw DomainError("refine_uplevel: one value per vertex required");
    Triangulation cur = rep.triangulation;
    std::vector<Rat> vals = rep.values;

    // the sign of k a(v) - 1, cached per vertex; vertex values never change,
    // so only mediants append to the cache
    std::vector<int> signs;
    signs.reserve(vals.size());
    for (const Rat& v : vals) signs.push_back(sign_of(Rat(k * v - 1)));
    auto sign_at = [&](int v) { return signs[static_cast<std::size_t>(v)]; };

    // a tuple's mixedness is fixed by its vertices, so the strictly-mixed
    // maximal tuples can be kept incrementally; their lexicographic minimum
    // is the first mixed simplex in the stored order
    auto is_mixed = [&](const std::vector<int>& tuple) {
        bool pos = false, neg = false;
        for (int v : tuple) {
            int s = sign_at(v);
            pos = pos || s > 0;
            neg = neg || s < 0;
        }
        return pos && neg;
    };
    std::set<std::vector<int>> mixed;
    for (const auto& tuple : cur.maximal_simplexes())
        if (is_mixed(tuple)) mixed.insert(tuple);

    long long blow_ups = 0;
    while (!mixed.empty()) {
        const std::vector<int>& tuple = *mixed.begin();
        int ei = -1, ej = -1;
        for (std::size_t a = 0; a < tuple.size() && ei < 0; ++a)
            for (std::size_t b = a + 1; b < tuple.size(); ++b)
                if (sign_at(tuple[a]) * sign_at(tuple[b]) < 0) {
                    ei = tuple[a];
                    ej = tuple[b];
                    break;
                }
        if (ei < 0)
            throw InternalError("refine_uplevel: mixed simplex without a mixed edge");
        if (++blow_ups > opts.max_blow_ups)
            throw ResourceLimitError("refine_uplevel: blow-up budget exhausted",
                                     std::make_shared<const Triangulation>(cur));
        const Int di = cur.vertex(ei).den, dj = cur.vertex(ej).den;
        Rat mediant_value = (Rat(di) * vals[static_cast<std::size_t>(ei)] +
                             Rat(dj) * vals[static_cast<std::size_t>(ej)]) /
                            Rat(di + dj);
        BlowUpResult res = blow_up_detailed(std::move(cur), ei, ej);
        cur = std::move(res.triangulation);
        vals.push_back(std::move(mediant_value));
        signs.push_back(sign_of(Rat(k * vals.back() - 1)));
        for (const auto& gone : res.removed) mixed.erase(gone);
        for (const auto& fresh : res.added)
            if (is_mixed(fresh)) mixed.insert(fresh);
    }
    return McNaughtonRep{std::move(cur), std::move(vals)};
}

Rat evaluate_rep(const McNaughtonRep& rep, const std::vector<Rat>& p) {
    if (rep.values.size() != rep.triangulation.vertex_count())
        throw DomainError("evaluate_rep: one value per vertex required");
    auto hit = locate_point(rep.triangulation, p);
    if (!hit) throw DomainError("evaluate_rep: point outside the carrier");
    const auto& tuple = rep.triangulation.maximal_simplexes()[hit->first];
    Rat value = 0;
    for (std::size_t a = 0; a < tuple.size(); ++a)
        value += hit->second[a] * rep.values[static_cast<std::size_t>(tuple[a])];
    return value;
}

} // namespace mvchi
