#include "mb/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

namespace mb {

Expr make_constant(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::constant;
    n->value = v;
    return n;
}

Expr make_variable(std::size_t index) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::variable;
    n->var = index;
    return n;
}

Expr make_unary(UnOp op, Expr child) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::unary;
    n->un = op;
    n->a = std::move(child);
    return n;
}

Expr make_binary(BinOp op, Expr lhs, Expr rhs) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::binary;
    n->bin = op;
    n->a = std::move(lhs);
    n->b = std::move(rhs);
    return n;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.71828182845904523536;

struct Token {
    enum class Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end } kind;
    double value = 0.0;
    std::string text;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < src_.size() && std::isspace((unsigned char)src_[i_])) ++i_;
        tok_.pos = i_;
        if (i_ >= src_.size()) {
            tok_.kind = Token::Kind::end;
            return;
        }
        char c = src_[i_];
        switch (c) {
        case '+': tok_.kind = Token::Kind::plus; ++i_; return;
        case '-': tok_.kind = Token::Kind::minus; ++i_; return;
        case '*': tok_.kind = Token::Kind::star; ++i_; return;
        case '/': tok_.kind = Token::Kind::slash; ++i_; return;
        case '^': tok_.kind = Token::Kind::caret; ++i_; return;
        case '(': tok_.kind = Token::Kind::lparen; ++i_; return;
        case ')': tok_.kind = Token::Kind::rparen; ++i_; return;
        default: break;
        }
        if (std::isdigit((unsigned char)c) || c == '.') {
            const char* start = src_.c_str() + i_;
            char* end = nullptr;
            tok_.value = std::strtod(start, &end);
            if (end == start) throw ParseError("malformed number", i_);
            tok_.kind = Token::Kind::number;
            i_ += (std::size_t)(end - start);
            return;
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            std::size_t j = i_;
            while (j < src_.size() && (std::isalnum((unsigned char)src_[j]) || src_[j] == '_')) ++j;
            tok_.kind = Token::Kind::ident;
            tok_.text = src_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", i_);
    }

    const std::string& src_;
    std::size_t i_ = 0;
    Token tok_;
};

std::optional<UnOp> function_named(const std::string& name) {
    if (name == "exp") return UnOp::exp;
    if (name == "log") return UnOp::log;
    if (name == "sqrt") return UnOp::sqrt;
    if (name == "sin") return UnOp::sin;
    if (name == "cos") return UnOp::cos;
    if (name == "abs") return UnOp::abs;
    return std::nullopt;
}

std::optional<double> fold_constant(const Expr& e) {
    switch (e->kind) {
    case ExprNode::Kind::constant: return e->value;
    case ExprNode::Kind::variable: return std::nullopt;
    case ExprNode::Kind::unary: {
        if (e->un != UnOp::neg) return std::nullopt;
        auto v = fold_constant(e->a);
        if (!v) return std::nullopt;
        return -*v;
    }
    case ExprNode::Kind::binary: {
        auto l = fold_constant(e->a), r = fold_constant(e->b);
        if (!l || !r) return std::nullopt;
        switch (e->bin) {
        case BinOp::add: return *l + *r;
        case BinOp::sub: return *l - *r;
        case BinOp::mul: return *l * *r;
        case BinOp::div: return *r == 0.0 ? std::nullopt : std::optional<double>(*l / *r);
        case BinOp::pow: return std::pow(*l, *r);
        }
        return std::nullopt;
    }
    }
    return std::nullopt;
}

class Parser {
public:
    Parser(const std::string& src, const std::vector<std::string>& vars) : lex_(src) {
        for (std::size_t i = 0; i < vars.size(); ++i) vars_[vars[i]] = i;
    }

    Expr run() {
        Expr e = expression();
        if (lex_.peek().kind != Token::Kind::end)
            throw ParseError("unexpected trailing input", lex_.peek().pos);
        return e;
    }

private:
    Expr expression() {
        Expr e = term();
        for (;;) {
            auto k = lex_.peek().kind;
            if (k == Token::Kind::plus) {
                lex_.take();
                e = make_binary(BinOp::add, e, term());
            } else if (k == Token::Kind::minus) {
                lex_.take();
                e = make_binary(BinOp::sub, e, term());
            } else {
                return e;
            }
        }
    }

    Expr term() {
        Expr e = factor();
        for (;;) {
            auto k = lex_.peek().kind;
            if (k == Token::Kind::star) {
                lex_.take();
                e = make_binary(BinOp::mul, e, factor());
            } else if (k == Token::Kind::slash) {
                lex_.take();
                e = make_binary(BinOp::div, e, factor());
            } else {
                return e;
            }
        }
    }

    Expr factor() {
        if (lex_.peek().kind == Token::Kind::minus) {
            lex_.take();
            return make_unary(UnOp::neg, factor());
        }
        if (lex_.peek().kind == Token::Kind::plus) {
            lex_.take();
            return factor();
        }
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (lex_.peek().kind != Token::Kind::caret) return base;
        std::size_t pos = lex_.take().pos;
        Expr exponent = factor(); // right-associative, allows a leading sign
        auto folded = fold_constant(exponent);
        if (!folded) throw ParseError("power exponent must be a constant", pos);
        double p = *folded;
        if (p < 0.0 && p != std::rint(p))
            throw ParseError("negative non-integer power exponent is not supported", pos);
        return make_binary(BinOp::pow, base, make_constant(p));
    }

    Expr atom() {
        Token t = lex_.take();
        switch (t.kind) {
        case Token::Kind::number: return make_constant(t.value);
        case Token::Kind::lparen: {
            Expr e = expression();
            expect(Token::Kind::rparen, "expected ')'");
            return e;
        }
        case Token::Kind::ident: {
            if (auto fn = function_named(t.text)) {
                expect(Token::Kind::lparen, "expected '(' after function name");
                Expr arg = expression();
                expect(Token::Kind::rparen, "expected ')'");
                return make_unary(*fn, arg);
            }
            if (t.text == "pi") return make_constant(kPi);
            if (t.text == "e") return make_constant(kE);
            auto it = vars_.find(t.text);
            if (it == vars_.end())
                throw ParseError("unknown identifier '" + t.text + "'", t.pos);
            return make_variable(it->second);
        }
        default: throw ParseError("expected a value", t.pos);
        }
    }

    void expect(Token::Kind k, const char* msg) {
        if (lex_.peek().kind != k) throw ParseError(msg, lex_.peek().pos);
        lex_.take();
    }

    Lexer lex_;
    std::map<std::string, std::size_t> vars_;
};

bool pow_exponent_is_int(double p) { return p == std::rint(p) && std::fabs(p) < 9.0e15; }

} // namespace

Expr parse(const std::string& source, const std::vector<std::string>& variables) {
    return Parser(source, variables).run();
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

double eval_scalar(const Expr& e, std::span<const double> point) {
    switch (e->kind) {
    case ExprNode::Kind::constant: return e->value;
    case ExprNode::Kind::variable:
        if (e->var >= point.size()) throw EvalError("variable index out of range");
        return point[e->var];
    case ExprNode::Kind::unary: {
        double v = eval_scalar(e->a, point);
        switch (e->un) {
        case UnOp::neg: return -v;
        case UnOp::exp: return std::exp(v);
        case UnOp::log:
            if (v <= 0.0) throw EvalError("log of a nonpositive value");
            return std::log(v);
        case UnOp::sqrt:
            if (v < 0.0) throw EvalError("sqrt of a negative value");
            return std::sqrt(v);
        case UnOp::sin: return std::sin(v);
        case UnOp::cos: return std::cos(v);
        case UnOp::abs: return std::fabs(v);
        }
        break;
    }
    case ExprNode::Kind::binary: {
        double l = eval_scalar(e->a, point);
        double r = eval_scalar(e->b, point);
        switch (e->bin) {
        case BinOp::add: return l + r;
        case BinOp::sub: return l - r;
        case BinOp::mul: return l * r;
        case BinOp::div:
            if (r == 0.0) throw EvalError("division by zero");
            return l / r;
        case BinOp::pow:
            if (l < 0.0 && !pow_exponent_is_int(r))
                throw EvalError("non-integer power of a negative value");
            return std::pow(l, r);
        }
        break;
    }
    }
    throw std::logic_error("bad expression node");
}

Interval eval_interval(const Expr& e, const Box& box) {
    switch (e->kind) {
    case ExprNode::Kind::constant: return Interval(e->value);
    case ExprNode::Kind::variable:
        if (e->var >= box.size()) throw EvalError("variable index out of range");
        return box.dims[e->var];
    case ExprNode::Kind::unary: {
        Interval v = eval_interval(e->a, box);
        switch (e->un) {
        case UnOp::neg: return -v;
        case UnOp::exp: return exp(v);
        case UnOp::log: return log(v);
        case UnOp::sqrt: return sqrt(v);
        case UnOp::sin: return sin(v);
        case UnOp::cos: return cos(v);
        case UnOp::abs: return abs(v);
        }
        break;
    }
    case ExprNode::Kind::binary: {
        Interval l = eval_interval(e->a, box);
        if (e->bin == BinOp::pow) {
            double p = e->b->value;
            return pow_exponent_is_int(p) ? pow_int(l, (long long)std::rint(p))
                                          : pow_real(l, p);
        }
        Interval r = eval_interval(e->b, box);
        switch (e->bin) {
        case BinOp::add: return l + r;
        case BinOp::sub: return l - r;
        case BinOp::mul: return l * r;
        case BinOp::div: return l / r;
        default: break;
        }
        break;
    }
    }
    throw std::logic_error("bad expression node");
}

namespace {

AffineForm eval_affine_rec(const Expr& e, const std::vector<AffineForm>& dims) {
    switch (e->kind) {
    case ExprNode::Kind::constant: return AffineForm::constant(e->value);
    case ExprNode::Kind::variable:
        if (e->var >= dims.size()) throw EvalError("variable index out of range");
        return dims[e->var];
    case ExprNode::Kind::unary: {
        AffineForm v = eval_affine_rec(e->a, dims);
        switch (e->un) {
        case UnOp::neg: return -v;
        case UnOp::exp: return exp(v);
        case UnOp::log: return log(v);
        case UnOp::sqrt: return sqrt(v);
        case UnOp::sin: return sin(v);
        case UnOp::cos: return cos(v);
        case UnOp::abs: return abs(v);
        }
        break;
    }
    case ExprNode::Kind::binary: {
        AffineForm l = eval_affine_rec(e->a, dims);
        if (e->bin == BinOp::pow) {
            double p = e->b->value;
            return pow_exponent_is_int(p) ? pow_int(l, (long long)std::rint(p))
                                          : pow_real(l, p);
        }
        AffineForm r = eval_affine_rec(e->b, dims);
        switch (e->bin) {
        case BinOp::add: return l + r;
        case BinOp::sub: return l - r;
        case BinOp::mul: return l * r;
        case BinOp::div: return l / r;
        default: break;
        }
        break;
    }
    }
    throw std::logic_error("bad expression node");
}

} // namespace

AffineForm eval_affine_form(const Expr& e, const Box& box) {
    // Noise symbols are per-evaluation: dimension i gets symbol i.
    std::vector<AffineForm> dims;
    dims.reserve(box.size());
    for (std::size_t i = 0; i < box.size(); ++i)
        dims.push_back(from_interval(box.dims[i], (int)i));
    return eval_affine_rec(e, dims);
}

Interval eval_affine(const Expr& e, const Box& box) {
    return to_interval(eval_affine_form(e, box));
}

namespace {

struct Dual {
    Interval val;
    Interval der;
};

Dual eval_ad(const Expr& e, const Box& box, std::size_t wrt) {
    switch (e->kind) {
    case ExprNode::Kind::constant: return {Interval(e->value), Interval(0.0)};
    case ExprNode::Kind::variable:
        if (e->var >= box.size()) throw EvalError("variable index out of range");
        return {box.dims[e->var], Interval(e->var == wrt ? 1.0 : 0.0)};
    case ExprNode::Kind::unary: {
        Dual u = eval_ad(e->a, box, wrt);
        switch (e->un) {
        case UnOp::neg: return {-u.val, -u.der};
        case UnOp::exp: {
            Interval v = exp(u.val);
            return {v, v * u.der};
        }
        case UnOp::log: return {log(u.val), u.der / u.val};
        case UnOp::sqrt: {
            Interval v = sqrt(u.val);
            return {v, u.der / (Interval(2.0) * v)};
        }
        case UnOp::sin: return {sin(u.val), cos(u.val) * u.der};
        case UnOp::cos: return {cos(u.val), -sin(u.val) * u.der};
        case UnOp::abs:
            if (u.val.contains_zero())
                throw DomainError("abs is not differentiable across zero on " +
                                  to_string(u.val));
            return {abs(u.val), u.val.lo > 0.0 ? u.der : -u.der};
        }
        break;
    }
    case ExprNode::Kind::binary: {
        Dual l = eval_ad(e->a, box, wrt);
        if (e->bin == BinOp::pow) {
            double p = e->b->value;
            if (p == 0.0) return {Interval(1.0), Interval(0.0)};
            Interval v, dv;
            if (pow_exponent_is_int(p)) {
                long long n = (long long)std::rint(p);
                v = pow_int(l.val, n);
                dv = Interval((double)n) * pow_int(l.val, n - 1) * l.der;
            } else {
                v = pow_real(l.val, p);
                dv = Interval(p) * pow_real(l.val, p - 1.0) * l.der;
            }
            return {v, dv};
        }
        Dual r = eval_ad(e->b, box, wrt);
        switch (e->bin) {
        case BinOp::add: return {l.val + r.val, l.der + r.der};
        case BinOp::sub: return {l.val - r.val, l.der - r.der};
        case BinOp::mul: return {l.val * r.val, l.der * r.val + l.val * r.der};
        case BinOp::div: {
            Interval q = l.val / r.val;
            return {q, (l.der - q * r.der) / r.val};
        }
        default: break;
        }
        break;
    }
    }
    throw std::logic_error("bad expression node");
}

} // namespace

Interval eval_derivative(const Expr& e, const Box& box, std::size_t wrt, DerivMode mode) {
    if (wrt >= box.size()) throw EvalError("derivative index out of range");
    if (mode == DerivMode::ad) return eval_ad(e, box, wrt).der;

    const double h = 1e-4;
    Box plus = box, minus = box;
    plus.dims[wrt] = box.dims[wrt] + Interval(h);
    minus.dims[wrt] = box.dims[wrt] - Interval(h);
    return (eval_interval(e, plus) - eval_interval(e, minus)) / Interval(2.0 * h);
}

// ---------------------------------------------------------------------------
// Systems and Jacobians
// ---------------------------------------------------------------------------

SystemDef parse_system(const std::vector<std::string>& variables,
                       const std::vector<std::string>& functions,
                       const std::optional<std::vector<std::vector<std::string>>>& jacobian) {
    if (variables.empty()) throw std::invalid_argument("system needs at least one variable");
    if (functions.size() != variables.size())
        throw std::invalid_argument("system must be square: " + std::to_string(functions.size()) +
                                    " functions over " + std::to_string(variables.size()) +
                                    " variables");
    SystemDef s;
    s.names = variables;
    for (const auto& f : functions) s.funcs.push_back(parse(f, variables));
    if (jacobian) {
        std::vector<std::vector<Expr>> rows;
        if (jacobian->size() != variables.size())
            throw std::invalid_argument("jacobian must have one row per function");
        for (const auto& row : *jacobian) {
            if (row.size() != variables.size())
                throw std::invalid_argument("jacobian rows must have one entry per variable");
            std::vector<Expr> r;
            for (const auto& src : row) r.push_back(parse(src, variables));
            rows.push_back(std::move(r));
        }
        s.jac = std::move(rows);
    }
    return s;
}

Matrix Matrix::identity(std::size_t size) {
    Matrix m(size);
    for (std::size_t i = 0; i < size; ++i) m.at(i, i) = 1.0;
    return m;
}

std::vector<double> mat_vec(const Matrix& m, std::span<const double> v) {
    std::vector<double> out(m.n, 0.0);
    for (std::size_t i = 0; i < m.n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.n; ++j) acc += m.at(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

std::vector<double> eval_system(const SystemDef& s, std::span<const double> point) {
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = eval_scalar(s.funcs[i], point);
    return out;
}

Matrix jacobian_fd(const SystemDef& s, std::span<const double> point) {
    std::size_t n = s.size();
    Matrix m(n);
    std::vector<double> p(point.begin(), point.end());
    for (std::size_t j = 0; j < n; ++j) {
        double h = 1e-6 * std::max(1.0, std::fabs(p[j]));
        double saved = p[j];
        p[j] = saved + h;
        std::vector<double> fp = eval_system(s, p);
        p[j] = saved - h;
        std::vector<double> fm = eval_system(s, p);
        p[j] = saved;
        for (std::size_t i = 0; i < n; ++i) m.at(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    }
    return m;
}

Matrix jacobian_at(const SystemDef& s, std::span<const double> point) {
    if (!s.jac) return jacobian_fd(s, point);
    std::size_t n = s.size();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = eval_scalar((*s.jac)[i][j], point);
    return m;
}

} // namespace mb
