#include "mvchi/formula.hpp"

#include <cctype>

namespace mvchi {

namespace {

FormulaPtr make(NodeKind kind, FormulaPtr l = nullptr, FormulaPtr r = nullptr) {
    auto f = std::make_shared<Formula>();
    f->kind = kind;
    f->left = std::move(l);
    f->right = std::move(r);
    return f;
}

} // namespace

FormulaPtr Formula::constant0() { return make(NodeKind::Const0); }
FormulaPtr Formula::constant1() { return make(NodeKind::Const1); }

FormulaPtr Formula::variable(int index) {
    if (index < 1) throw DomainError("variable index must be >= 1");
    auto f = std::make_shared<Formula>();
    f->kind = NodeKind::Var;
    f->var = index;
    return f;
}

FormulaPtr Formula::neg(FormulaPtr f) { return make(NodeKind::Neg, std::move(f)); }
FormulaPtr Formula::oplus(FormulaPtr f, FormulaPtr g) {
    return make(NodeKind::OPlus, std::move(f), std::move(g));
}
FormulaPtr Formula::otimes(FormulaPtr f, FormulaPtr g) {
    return make(NodeKind::OTimes, std::move(f), std::move(g));
}
FormulaPtr Formula::join(FormulaPtr f, FormulaPtr g) {
    return make(NodeKind::Join, std::move(f), std::move(g));
}
FormulaPtr Formula::meet(FormulaPtr f, FormulaPtr g) {
    return make(NodeKind::Meet, std::move(f), std::move(g));
}
FormulaPtr Formula::minus(FormulaPtr f, FormulaPtr g) {
    return make(NodeKind::Minus, std::move(f), std::move(g));
}

FormulaPtr Formula::scalar_mult(std::int64_t n, FormulaPtr f) {
    if (n < 1) throw DomainError("scalar multiplier must be >= 1");
    auto r = std::make_shared<Formula>();
    r->kind = NodeKind::Scalar;
    r->scalar = n;
    r->left = std::move(f);
    return r;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case NodeKind::Const0:
    case NodeKind::Const1:
        return true;
    case NodeKind::Var:
        return a->var == b->var;
    case NodeKind::Neg:
        return structurally_equal(a->left, b->left);
    case NodeKind::Scalar:
        return a->scalar == b->scalar && structurally_equal(a->left, b->left);
    default:
        return structurally_equal(a->left, b->left) &&
               structurally_equal(a->right, b->right);
    }
}

int max_var_index(const FormulaPtr& f) {
    if (!f) return 0;
    switch (f->kind) {
    case NodeKind::Var:
        return f->var;
    case NodeKind::Const0:
    case NodeKind::Const1:
        return 0;
    default:
        return std::max(max_var_index(f->left), max_var_index(f->right));
    }
}

std::size_t node_count(const FormulaPtr& f) {
    if (!f) return 0;
    return 1 + node_count(f->left) + node_count(f->right);
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

// Scalar coefficients are capped so a hostile input cannot blow up the
// scalar expansion (the expansion is linear in n).
constexpr std::int64_t kMaxScalar = 1 << 20;

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    FormulaPtr run() {
        FormulaPtr f = parse_disj();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected trailing input", pos_);
        return f;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    std::int64_t parse_int() {
        skip_ws();
        std::size_t start = pos_;
        std::int64_t value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + (text_[pos_] - '0');
            if (value > kMaxScalar)
                throw ParseError("integer literal too large", start);
            ++pos_;
        }
        if (pos_ == start)
            throw ParseError("expected an integer", pos_);
        return value;
    }

    FormulaPtr parse_disj() {
        FormulaPtr f = parse_conj();
        while (eat('|')) f = Formula::join(f, parse_conj());
        return f;
    }

    FormulaPtr parse_conj() {
        FormulaPtr f = parse_minus();
        while (eat('&')) f = Formula::meet(f, parse_minus());
        return f;
    }

    FormulaPtr parse_minus() {
        FormulaPtr f = parse_sum();
        while (eat('-')) f = Formula::minus(f, parse_sum());
        return f;
    }

    FormulaPtr parse_sum() {
        FormulaPtr f = parse_prod();
        while (eat('+')) f = Formula::oplus(f, parse_prod());
        return f;
    }

    FormulaPtr parse_prod() {
        FormulaPtr f = parse_unary();
        while (eat('*')) f = Formula::otimes(f, parse_unary());
        return f;
    }

    FormulaPtr parse_unary() {
        if (eat('!')) return Formula::neg(parse_unary());
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            // Either a constant atom or a scalar prefix "INT. unary".
            std::size_t save = pos_;
            std::int64_t n = parse_int();
            if (eat('.')) {
                if (n < 1)
                    throw ParseError("scalar multiplier must be >= 1", save);
                return Formula::scalar_mult(n, parse_unary());
            }
            pos_ = save;
            return parse_atom();
        }
        return parse_atom();
    }

    FormulaPtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size())
            throw ParseError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            FormulaPtr f = parse_disj();
            if (!eat(')'))
                throw ParseError("expected ')'", pos_);
            return f;
        }
        if (c == '0' || c == '1') {
            std::size_t save = pos_;
            std::int64_t n = parse_int();
            if (n == 0) return Formula::constant0();
            if (n == 1) return Formula::constant1();
            throw ParseError("only the constants 0 and 1 exist", save);
        }
        if (c == 'x') {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                throw ParseError("expected a variable index after 'x'", pos_);
            std::int64_t idx = parse_int();
            if (idx < 1)
                throw ParseError("variable index must be >= 1", save);
            return Formula::variable(static_cast<int>(idx));
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
};

} // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

// Loosest to tightest; unary binds the tightest below atoms.
int level_of(NodeKind k) {
    switch (k) {
    case NodeKind::Join: return 1;
    case NodeKind::Meet: return 2;
    case NodeKind::Minus: return 3;
    case NodeKind::OPlus: return 4;
    case NodeKind::OTimes: return 5;
    case NodeKind::Neg:
    case NodeKind::Scalar: return 6;
    default: return 7;
    }
}

const char* op_text(NodeKind k) {
    switch (k) {
    case NodeKind::Join: return " | ";
    case NodeKind::Meet: return " & ";
    case NodeKind::Minus: return " - ";
    case NodeKind::OPlus: return " + ";
    case NodeKind::OTimes: return " * ";
    default: return "";
    }
}

void print_rec(const FormulaPtr& f, int min_level, std::string& out) {
    int level = level_of(f->kind);
    bool parens = level < min_level;
    if (parens) out.push_back('(');
    switch (f->kind) {
    case NodeKind::Const0:
        out.push_back('0');
        break;
    case NodeKind::Const1:
        out.push_back('1');
        break;
    case NodeKind::Var:
        out.push_back('x');
        out += std::to_string(f->var);
        break;
    case NodeKind::Neg:
        out.push_back('!');
        print_rec(f->left, 6, out);
        break;
    case NodeKind::Scalar:
        out += std::to_string(f->scalar);
        out.push_back('.');
        print_rec(f->left, 6, out);
        break;
    default:
        // left-associative binary: the left child may sit at the same level,
        // the right child must bind strictly tighter
        print_rec(f->left, level, out);
        out += op_text(f->kind);
        print_rec(f->right, level + 1, out);
        break;
    }
    if (parens) out.push_back(')');
}

} // namespace

std::string print_formula(const FormulaPtr& f) {
    std::string out;
    print_rec(f, 1, out);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

Rat eval_rec(const FormulaPtr& f, const std::vector<Rat>& p) {
    switch (f->kind) {
    case NodeKind::Const0:
        return Rat(0);
    case NodeKind::Const1:
        return Rat(1);
    case NodeKind::Var:
        return p[static_cast<std::size_t>(f->var) - 1];
    case NodeKind::Neg:
        return Rat(1) - eval_rec(f->left, p);
    case NodeKind::OPlus: {
        Rat s = eval_rec(f->left, p) + eval_rec(f->right, p);
        return s > 1 ? Rat(1) : s;
    }
    case NodeKind::OTimes: {
        Rat s = eval_rec(f->left, p) + eval_rec(f->right, p) - 1;
        return s < 0 ? Rat(0) : s;
    }
    case NodeKind::Join: {
        Rat a = eval_rec(f->left, p), b = eval_rec(f->right, p);
        return a > b ? a : b;
    }
    case NodeKind::Meet: {
        Rat a = eval_rec(f->left, p), b = eval_rec(f->right, p);
        return a < b ? a : b;
    }
    case NodeKind::Minus: {
        Rat s = eval_rec(f->left, p) - eval_rec(f->right, p);
        return s < 0 ? Rat(0) : s;
    }
    case NodeKind::Scalar: {
        Rat s = eval_rec(f->left, p) * f->scalar;
        return s > 1 ? Rat(1) : s;
    }
    }
    throw InternalError("unreachable formula kind");
}

} // namespace

Rat evaluate(const FormulaPtr& f, const std::vector<Rat>& point) {
    int d = max_var_index(f);
    if (static_cast<int>(point.size()) < d)
        throw DomainError("evaluation point has fewer coordinates than the formula has variables");
    for (const Rat& q : point)
        if (q < 0 || q > 1)
            throw DomainError("evaluation coordinate outside [0,1]");
    return eval_rec(f, point);
}

namespace {

FormulaPtr repeat_oplus(std::int64_t n, const FormulaPtr& f) {
    if (n == 1) return f;
    std::int64_t half = n / 2;
    return Formula::oplus(repeat_oplus(n - half, f), repeat_oplus(half, f));
}

} // namespace

FormulaPtr expand_scalars(const FormulaPtr& f) {
    if (!f) return f;
    switch (f->kind) {
    case NodeKind::Const0:
    case NodeKind::Const1:
    case NodeKind::Var:
        return f;
    case NodeKind::Neg:
        return Formula::neg(expand_scalars(f->left));
    case NodeKind::Scalar:
        return repeat_oplus(f->scalar, expand_scalars(f->left));
    default: {
        auto g = std::make_shared<Formula>();
        g->kind = f->kind;
        g->left = expand_scalars(f->left);
        g->right = expand_scalars(f->right);
        return g;
    }
    }
}

// ---------------------------------------------------------------------------
// Random generation
// ---------------------------------------------------------------------------

namespace {

// Never emits more than `budget` nodes: unary spends one node and recurses
// with budget-1, binary spends one node and splits budget-1 between the two
// children, each getting at least 1.
FormulaPtr gen_rec(SplitMix64& rng, const FormulaGenOptions& o, int budget, int depth,
                   std::int64_t amp) {
    if (budget <= 1 || depth >= o.max_depth) {
        // leaf: variables dominate, constants are rare
        std::uint64_t r = rng.below(static_cast<std::uint64_t>(o.vars) + 2);
        if (r == 0) return Formula::constant0();
        if (r == 1) return Formula::constant1();
        return Formula::variable(static_cast<int>(r - 1));
    }
    int w_binary = budget >= 3 ? o.w_binary : 0;
    int w_scalar = amp >= 2 ? o.w_scalar : 0; // no room left for another factor
    int total = o.w_neg + w_scalar + w_binary + o.w_leaf;
    int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(total)));
    if (pick < o.w_leaf)
        return gen_rec(rng, o, 1, depth, amp);
    pick -= o.w_leaf;
    if (pick < o.w_neg)
        return Formula::neg(gen_rec(rng, o, budget - 1, depth + 1, amp));
    pick -= o.w_neg;
    if (pick < w_scalar) {
        std::int64_t hi = std::min<std::int64_t>(4, amp);
        std::int64_t n = 2 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - 1)));
        return Formula::scalar_mult(n, gen_rec(rng, o, budget - 1, depth + 1, amp / n));
    }
    NodeKind kinds[5] = {NodeKind::OPlus, NodeKind::OTimes, NodeKind::Join,
                         NodeKind::Meet, NodeKind::Minus};
    NodeKind k = kinds[rng.below(5)];
    int rest = budget - 1; // >= 2 here
    int lb = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(rest - 1)));
    int rb = rest - lb;
    FormulaPtr l = gen_rec(rng, o, lb, depth + 1, amp);
    FormulaPtr r = gen_rec(rng, o, rb, depth + 1, amp);
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->left = std::move(l);
    f->right = std::move(r);
    return f;
}

} // namespace

FormulaPtr random_formula(SplitMix64& rng, const FormulaGenOptions& opts) {
    if (opts.vars < 1) throw DomainError("formula generator needs at least one variable");
    if (opts.max_scalar_product < 1)
        throw DomainError("formula generator needs a positive scalar-product bound");
    return gen_rec(rng, opts, opts.max_size, 0, opts.max_scalar_product);
}

} // namespace mvchi
