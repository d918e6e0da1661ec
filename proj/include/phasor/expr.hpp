#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phasor/errors.hpp"
#include "phasor/extended.hpp"
#include "phasor/special.hpp"

namespace phasor::expr {

struct ParseError : Error {
    ParseError(const std::string& what, std::size_t offset_1based)
        : Error(what + " (offset " + std::to_string(offset_1based) + ")"),
          offset(offset_1based) {}
    std::size_t offset;  // 1-based byte offset into the source text
};

struct NonHolomorphicError : Error {
    using Error::Error;
};
// raised when a second symbolic derivative would need nodes the tree
// cannot express (derivatives of gamma_prime / zeta_prime)
struct UnsupportedDerivativeError : Error {
    using Error::Error;
};
struct ZeroOutsideDiskError : Error {
    using Error::Error;
};
struct NonUnimodularError : Error {
    using Error::Error;
};

enum class NodeKind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

enum class Builtin {
    Exp, Log, Sqrt, Sin, Cos, Tan, Sinh, Cosh,
    Gamma, Zeta, Wp, Conj, Re, Im, Abs,
    // internal derivative nodes; printable and re-parseable so trees
    // produced by differentiate() still round-trip
    GammaPrime, ZetaPrime, WpPrime,
};

struct Node;
using NodeRef = std::shared_ptr<const Node>;

// Immutable expression tree node. "holomorphic" is true iff the subtree
// contains none of conj/re/im/abs.
struct Node {
    NodeKind kind;
    cplx value{0.0, 0.0};                          // Constant
    Builtin fn = Builtin::Exp;                     // Call
    std::vector<NodeRef> args;                     // operands / call arguments
    std::optional<special::LatticeSpec> lattice;   // Wp / WpPrime
    bool holomorphic = true;
};

struct ExprAst {
    NodeRef root;
    bool holomorphic() const { return root && root->holomorphic; }
};

// Node constructors (shared by parser, differentiate and blaschke).
NodeRef make_constant(cplx v);
NodeRef make_variable();
NodeRef make_unary(NodeKind kind, NodeRef a);
NodeRef make_binary(NodeKind kind, NodeRef a, NodeRef b);
NodeRef make_call(Builtin fn, std::vector<NodeRef> args,
                  std::optional<special::LatticeSpec> lattice = {});

// Recursive-descent parser for the expression grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' factor)?
//   base   := number | 'i' | 'z' | ident '(' expr (',' expr)* ')' | '(' expr ')'
// complex(re,im) folds to a constant at parse time; wp takes lattice
// parameters wp(expr, omega1, omega2 [, shells]) as constant arguments.
ExprAst parse(std::string_view source);

// Canonical printer; parse(to_string(ast)) rebuilds an identical tree.
std::string to_string(const ExprAst& ast);

// Structural equality (used by tests).
bool identical(const ExprAst& a, const ExprAst& b);

// d/dz. Throws NonHolomorphicError when the tree contains conj/re/im/abs.
ExprAst differentiate(const ExprAst& ast);

// Evaluate at a point with Riemann-sphere semantics; never throws.
ExtendedComplex eval(const ExprAst& ast, cplx z);

struct BlaschkeZero {
    cplx location;
    int multiplicity = 1;
};

// c * prod ((z - z_k)/(1 - conj(z_k) z))^mult. conj applies to constants
// only and is folded, so the result is holomorphic. Requires |z_k| < 1 and
// ||c| - 1| <= 1e-12.
ExprAst blaschke(std::span<const BlaschkeZero> zeros, cplx c);

}  // namespace phasor::expr
