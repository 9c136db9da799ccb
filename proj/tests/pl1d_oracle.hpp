// Independent one-dimensional piecewise-linear calculus on breakpoint
// lists. Used as an oracle for the valuation on one-variable formulas:
// it shares only the formula AST with the library and performs its own
// exact crossing insertion and support-component counting — no
// triangulations, subdivisions, or Euler characteristics involved.

#ifndef PL1D_ORACLE_HPP
#define PL1D_ORACLE_HPP

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mvchi/formula.hpp"

namespace pl1d {

using mvchi::Rat;

/// Piecewise-linear function on [0,1]: breakpoints sorted by x, the first
/// at x = 0 and the last at x = 1, linearly interpolated in between.
struct Curve {
    std::vector<std::pair<Rat, Rat>> pts;
};

inline Rat eval_curve(const Curve& c, const Rat& x) {
    if (x == c.pts.front().first) return c.pts.front().second;
    for (std::size_t i = 0; i + 1 < c.pts.size(); ++i) {
        const Rat& x0 = c.pts[i].first;
        const Rat& y0 = c.pts[i].second;
        const Rat& x1 = c.pts[i + 1].first;
        const Rat& y1 = c.pts[i + 1].second;
        if (x > x0 && x <= x1) return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
    throw std::out_of_range("eval_curve: x outside [0,1]");
}

namespace detail {

inline std::vector<Rat> merged_grid(const Curve& f, const Curve& g) {
    std::vector<Rat> xs;
    std::size_t i = 0, j = 0;
    while (i < f.pts.size() || j < g.pts.size()) {
        if (j == g.pts.size() || (i < f.pts.size() && f.pts[i].first < g.pts[j].first)) {
            if (xs.empty() || xs.back() != f.pts[i].first) xs.push_back(f.pts[i].first);
            ++i;
        } else {
            if (xs.empty() || xs.back() != g.pts[j].first) xs.push_back(g.pts[j].first);
            ++j;
        }
    }
    return xs;
}

/// Refine a grid so that the affine-between-gridpoints witness h never
/// strictly changes sign inside a cell, then build the result pointwise.
template <typename WitnessAt, typename ValueAt>
Curve cut_and_apply(std::vector<Rat> xs, WitnessAt h, ValueAt val) {
    std::vector<Rat> cut;
    cut.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cut.push_back(xs[i]);
        if (i + 1 == xs.size()) break;
        Rat h0 = h(xs[i]), h1 = h(xs[i + 1]);
        const bool mixed = (h0 > 0 && h1 < 0) || (h0 < 0 && h1 > 0);
        if (mixed) cut.push_back(xs[i] + (xs[i + 1] - xs[i]) * h0 / (h0 - h1));
    }
    Curve out;
    out.pts.reserve(cut.size());
    for (const Rat& x : cut) out.pts.emplace_back(x, val(x));
    return out;
}

} // namespace detail

inline Curve from_formula(const mvchi::FormulaPtr& f) {
    using mvchi::NodeKind;
    switch (f->kind) {
    case NodeKind::Const0:
        return Curve{{{Rat(0), Rat(0)}, {Rat(1), Rat(0)}}};
    case NodeKind::Const1:
        return Curve{{{Rat(0), Rat(1)}, {Rat(1), Rat(1)}}};
    case NodeKind::Var:
        if (f->var != 1) throw std::invalid_argument("pl1d oracle handles one variable");
        return Curve{{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}};
    case NodeKind::Neg: {
        Curve a = from_formula(f->left);
        for (auto& p : a.pts) p.second = Rat(1) - p.second;
        return a;
    }
    case NodeKind::Scalar: {
        Curve a = from_formula(f->left);
        const Rat n(f->scalar);
        std::vector<Rat> xs;
        for (const auto& p : a.pts) xs.push_back(p.first);
        return detail::cut_and_apply(
            std::move(xs), [&](const Rat& x) { return n * eval_curve(a, x) - 1; },
            [&](const Rat& x) {
                Rat s = n * eval_curve(a, x);
                return s > 1 ? Rat(1) : s;
            });
    }
    default: break;
    }
    Curve a = from_formula(f->left);
    Curve b = from_formula(f->right);
    std::vector<Rat> xs = detail::merged_grid(a, b);
    auto fa = [&](const Rat& x) { return eval_curve(a, x); };
    auto fb = [&](const Rat& x) { return eval_curve(b, x); };
    switch (f->kind) {
    case NodeKind::OPlus:
        return detail::cut_and_apply(
            std::move(xs), [&](const Rat& x) { return fa(x) + fb(x) - 1; },
            [&](const Rat& x) {
                Rat s = fa(x) + fb(x);
                return s > 1 ? Rat(1) : s;
            });
    case NodeKind::OTimes:
        return detail::cut_and_apply(
            std::move(xs), [&](const Rat& x) { return fa(x) + fb(x) - 1; },
            [&](const Rat& x) {
                Rat s = fa(x) + fb(x) - 1;
                return s < 0 ? Rat(0) : s;
            });
    case NodeKind::Join:
        return detail::cut_and_apply(
            std::move(xs), [&](const Rat& x) { return fa(x) - fb(x); },
            [&](const Rat& x) {
                Rat u = fa(x), v = fb(x);
                return u > v ? u : v;
            });
    case NodeKind::Meet:
        return detail::cut_and_apply(
            std::move(xs), [&](const Rat& x) { return fa(x) - fb(x); },
            [&](const Rat& x) {
                Rat u = fa(x), v = fb(x);
                return u < v ? u : v;
            });
    case NodeKind::Minus:
        return detail::cut_and_apply(
            std::move(xs), [&](const Rat& x) { return fa(x) - fb(x); },
            [&](const Rat& x) {
                Rat s = fa(x) - fb(x);
                return s < 0 ? Rat(0) : s;
            });
    default:
        throw std::logic_error("pl1d oracle: unhandled node kind");
    }
}

/// Number of connected components of {x : c(x) > 0}. The support of a
/// continuous PL function is a finite union of intervals of positive
/// length (relatively open in [0,1]), each contractible, so this count is
/// its Euler characteristic.
inline long long support_components(const Curve& c) {
    long long comp = 0;
    bool cont = false;
    for (std::size_t i = 0; i < c.pts.size(); ++i) {
        const Rat& y = c.pts[i].second;
        if (y > 0) {
            if (!cont) ++comp;
            cont = true;
        } else {
            cont = false;
        }
        // a component can start strictly inside the segment (x_i, x_{i+1})
        // when the function leaves zero there
        if (i + 1 < c.pts.size() && y == 0 && c.pts[i + 1].second > 0) {
            ++comp;
            cont = true;
        }
    }
    return comp;
}

} // namespace pl1d

#endif // PL1D_ORACLE_HPP
