#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mb/affine.hpp"
#include "mb/box.hpp"
#include "mb/interval.hpp"

namespace mb {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class UnOp { neg, exp, log, sqrt, sin, cos, abs };
enum class BinOp { add, sub, mul, div, pow };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { constant, variable, unary, binary } kind;
    double value = 0.0;     // constant
    std::size_t var = 0;    // variable index
    UnOp un = UnOp::neg;
    BinOp bin = BinOp::add;
    Expr a, b;
};

Expr make_constant(double v);
Expr make_variable(std::size_t index);
Expr make_unary(UnOp op, Expr child);
Expr make_binary(BinOp op, Expr lhs, Expr rhs);

/// Parse `source` over the named variables.  Grammar: `^` (right-assoc,
/// constant exponent only) binds tighter than unary minus, then `*` `/`,
/// then `+` `-`; `fn(expr)` calls with fn in {sin, cos, exp, log, sqrt, abs};
/// literals, `pi` and `e`.
Expr parse(const std::string& source, const std::vector<std::string>& variables);

double eval_scalar(const Expr& e, std::span<const double> point);
Interval eval_interval(const Expr& e, const Box& box);

/// Natural extension in affine arithmetic over fresh per-dimension symbols;
/// returns the extracted interval.
Interval eval_affine(const Expr& e, const Box& box);
AffineForm eval_affine_form(const Expr& e, const Box& box);

enum class DerivMode { ad, paper_fd };

/// Enclosure of the partial derivative over the box.  `ad` differentiates the
/// AST forward-mode in interval arithmetic; `paper_fd` is the literal central
/// difference of the natural extension with step 1e-4 (kept for fidelity
/// experiments; it suffers severe dependency blow-up on wide boxes).
Interval eval_derivative(const Expr& e, const Box& box, std::size_t wrt,
                         DerivMode mode = DerivMode::ad);

struct SystemDef {
    std::vector<std::string> names;
    std::vector<Expr> funcs;
    std::optional<std::vector<std::vector<Expr>>> jac;

    std::size_t size() const { return funcs.size(); }
};

SystemDef parse_system(const std::vector<std::string>& variables,
                       const std::vector<std::string>& functions,
                       const std::optional<std::vector<std::vector<std::string>>>& jacobian);

/// Dense square matrix of doubles.
struct Matrix {
    std::size_t n = 0;
    std::vector<double> a; // row-major

    Matrix() = default;
    explicit Matrix(std::size_t size) : n(size), a(size * size, 0.0) {}
    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
    static Matrix identity(std::size_t size);
};

std::vector<double> mat_vec(const Matrix& m, std::span<const double> v);

/// Jacobian at a point: explicit entries when the system carries them,
/// otherwise central finite differences with step 1e-6 * max(1, |p_j|).
Matrix jacobian_at(const SystemDef& s, std::span<const double> point);
Matrix jacobian_fd(const SystemDef& s, std::span<const double> point);

std::vector<double> eval_system(const SystemDef& s, std::span<const double> point);

} // namespace mb
