/**
 * Many-valued propositional formulas: immutable AST, parser, printer, and
 * exact evaluator for the standard [0,1] semantics
 *
 *   !x = 1-x      x + y = min(1, x+y)    x * y = max(0, x+y-1)
 *   x | y = max   x & y = min            x - y = max(0, x-y)
 *   n.x = min(1, n x)
 *
 * Grammar (ASCII, loosest to tightest: | & - + * then unary ! and n.,
 * all binary operators left-associative):
 *
 *   formula := disj ; disj := conj ('|' conj)* ; conj := minus ('&' minus)* ;
 *   minus := sum ('-' sum)* ; sum := prod ('+' prod)* ;
 *   prod := unary ('*' unary)* ;
 *   unary := '!' unary | INT '.' unary | atom ;
 *   atom := '0' | '1' | VAR | '(' formula ')' ; VAR := 'x' INT (index >= 1)
 */

#ifndef MVCHI_FORMULA_HPP
#define MVCHI_FORMULA_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mvchi/numeric.hpp"
#include "mvchi/rng.hpp"

namespace mvchi {

enum class NodeKind {
    Const0,
    Const1,
    Var,    // index >= 1
    Neg,
    OPlus,  // truncated sum
    OTimes, // truncated product
    Join,   // max
    Meet,   // min
    Minus,  // truncated difference
    Scalar, // n-fold truncated sum, n >= 1
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
    NodeKind kind;
    int var = 0;            // Var only
    std::int64_t scalar = 0; // Scalar only
    FormulaPtr left;        // unary operand / left operand
    FormulaPtr right;       // right operand

    static FormulaPtr constant0();
    static FormulaPtr constant1();
    static FormulaPtr variable(int index);
    static FormulaPtr neg(FormulaPtr f);
    static FormulaPtr oplus(FormulaPtr f, FormulaPtr g);
    static FormulaPtr otimes(FormulaPtr f, FormulaPtr g);
    static FormulaPtr join(FormulaPtr f, FormulaPtr g);
    static FormulaPtr meet(FormulaPtr f, FormulaPtr g);
    static FormulaPtr minus(FormulaPtr f, FormulaPtr g);
    static FormulaPtr scalar_mult(std::int64_t n, FormulaPtr f);
};

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

/// Largest variable index occurring in f (0 for closed formulas).
int max_var_index(const FormulaPtr& f);

std::size_t node_count(const FormulaPtr& f);

/// Throws ParseError with the offending position on bad input.
FormulaPtr parse_formula(std::string_view text);

/// Minimal-parenthesization text; parse_formula(print_formula(f)) is
/// structurally equal to f.
std::string print_formula(const FormulaPtr& f);

/**
 * Exact evaluation at a rational point. The point must supply at least
 * max_var_index(f) coordinates, all within [0,1]; DomainError otherwise.
 */
Rat evaluate(const FormulaPtr& f, const std::vector<Rat>& point);

/// Replace every Scalar(n, g) node by a balanced n-fold truncated sum of g
/// (depth O(log n)); the result is Scalar-free and semantically identical.
FormulaPtr expand_scalars(const FormulaPtr& f);

/**
 * Reproducible random formulas for the test harness. Budget-driven: a draw
 * has at most max_size nodes and at most max_depth nesting levels.
 */
struct FormulaGenOptions {
    int vars = 2;
    int max_size = 25;
    int max_depth = 12;
    // relative operator weights
    int w_neg = 2;
    int w_scalar = 1;
    int w_binary = 6; // split evenly across +, *, |, &, -
    int w_leaf = 3;
    // Bounds the product of nested scalar multipliers along any root-to-leaf
    // path.  Scalar towers compose multiplicatively (3.4.x1 has slope 12), and
    // the size of a subdividing triangulation grows with the slope, so an
    // unchecked tower makes random instances arbitrarily expensive.
    std::int64_t max_scalar_product = 8;
};

FormulaPtr random_formula(SplitMix64& rng, const FormulaGenOptions& opts);

} // namespace mvchi

#endif // MVCHI_FORMULA_HPP
