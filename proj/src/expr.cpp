#include "phasor/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>

namespace phasor::expr {

namespace {

struct BuiltinInfo {
    Builtin fn;
    int arity;  // of the printed call, excluding wp's lattice arguments
};

const std::map<std::string, BuiltinInfo, std::less<>>& builtin_table() {
    static const std::map<std::string, BuiltinInfo, std::less<>> table = {
        {"exp", {Builtin::Exp, 1}},     {"log", {Builtin::Log, 1}},
        {"sqrt", {Builtin::Sqrt, 1}},   {"sin", {Builtin::Sin, 1}},
        {"cos", {Builtin::Cos, 1}},     {"tan", {Builtin::Tan, 1}},
        {"sinh", {Builtin::Sinh, 1}},   {"cosh", {Builtin::Cosh, 1}},
        {"gamma", {Builtin::Gamma, 1}}, {"zeta", {Builtin::Zeta, 1}},
        {"wp", {Builtin::Wp, 1}},       {"conj", {Builtin::Conj, 1}},
        {"re", {Builtin::Re, 1}},       {"im", {Builtin::Im, 1}},
        {"abs", {Builtin::Abs, 1}},     {"gamma_prime", {Builtin::GammaPrime, 1}},
        {"zeta_prime", {Builtin::ZetaPrime, 1}}, {"wp_prime", {Builtin::WpPrime, 1}},
    };
    return table;
}

std::string_view builtin_name(Builtin fn) {
    switch (fn) {
        case Builtin::Exp: return "exp";
        case Builtin::Log: return "log";
        case Builtin::Sqrt: return "sqrt";
        case Builtin::Sin: return "sin";
        case Builtin::Cos: return "cos";
        case Builtin::Tan: return "tan";
        case Builtin::Sinh: return "sinh";
        case Builtin::Cosh: return "cosh";
        case Builtin::Gamma: return "gamma";
        case Builtin::Zeta: return "zeta";
        case Builtin::Wp: return "wp";
        case Builtin::Conj: return "conj";
        case Builtin::Re: return "re";
        case Builtin::Im: return "im";
        case Builtin::Abs: return "abs";
        case Builtin::GammaPrime: return "gamma_prime";
        case Builtin::ZetaPrime: return "zeta_prime";
        case Builtin::WpPrime: return "wp_prime";
    }
    return "?";
}

bool is_nonholomorphic_builtin(Builtin fn) {
    return fn == Builtin::Conj || fn == Builtin::Re || fn == Builtin::Im || fn == Builtin::Abs;
}

}  // namespace

NodeRef make_constant(cplx v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->value = v;
    return n;
}

NodeRef make_variable() {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Variable;
    return n;
}

NodeRef make_unary(NodeKind kind, NodeRef a) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->holomorphic = a->holomorphic;
    n->args = {std::move(a)};
    return n;
}

NodeRef make_binary(NodeKind kind, NodeRef a, NodeRef b) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->holomorphic = a->holomorphic && b->holomorphic;
    n->args = {std::move(a), std::move(b)};
    return n;
}

NodeRef make_call(Builtin fn, std::vector<NodeRef> args,
                  std::optional<special::LatticeSpec> lattice) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Call;
    n->fn = fn;
    n->holomorphic = !is_nonholomorphic_builtin(fn);
    for (const auto& a : args) n->holomorphic = n->holomorphic && a->holomorphic;
    n->args = std::move(args);
    n->lattice = lattice;
    return n;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Lexer {
    std::string_view src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    // 1-based offset of the next token (or one past the end at EOF)
    std::size_t here() {
        skip_ws();
        return pos + 1;
    }
    bool accept(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!accept(c)) throw ParseError(std::string("expected ") + what, here());
    }
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_{src} {}

    NodeRef parse_all() {
        if (lex_.eof()) throw ParseError("empty expression", lex_.here());
        NodeRef e = parse_expr();
        if (!lex_.eof()) throw ParseError("unexpected trailing input", lex_.here());
        return e;
    }

private:
    Lexer lex_;

    NodeRef parse_expr() {
        NodeRef left = parse_term();
        for (;;) {
            if (lex_.accept('+'))
                left = make_binary(NodeKind::Add, left, parse_term());
            else if (lex_.accept('-'))
                left = make_binary(NodeKind::Sub, left, parse_term());
            else
                return left;
        }
    }

    NodeRef parse_term() {
        NodeRef left = parse_factor();
        for (;;) {
            if (lex_.accept('*'))
                left = make_binary(NodeKind::Mul, left, parse_factor());
            else if (lex_.accept('/'))
                left = make_binary(NodeKind::Div, left, parse_factor());
            else
                return left;
        }
    }

    NodeRef parse_factor() {
        if (lex_.accept('-')) return make_unary(NodeKind::Negate, parse_factor());
        NodeRef base = parse_base();
        if (lex_.accept('^')) return make_binary(NodeKind::Pow, base, parse_factor());
        return base;
    }

    NodeRef parse_base() {
        const std::size_t at = lex_.here();
        const char c = lex_.peek();
        if (c == '(') {
            lex_.accept('(');
            NodeRef e = parse_expr();
            lex_.expect(')', "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident(at);
        if (c == '\0') throw ParseError("unexpected end of input", at);
        throw ParseError(std::string("unexpected character '") + c + "'", at);
    }

    NodeRef parse_number() {
        const std::size_t start = lex_.pos;
        auto digits = [&] {
            while (lex_.pos < lex_.src.size() &&
                   std::isdigit(static_cast<unsigned char>(lex_.src[lex_.pos])))
                ++lex_.pos;
        };
        digits();
        if (lex_.pos < lex_.src.size() && lex_.src[lex_.pos] == '.') {
            ++lex_.pos;
            const std::size_t frac = lex_.pos;
            digits();
            if (lex_.pos == frac) throw ParseError("expected digits after '.'", lex_.pos + 1);
        }
        if (lex_.pos < lex_.src.size() && (lex_.src[lex_.pos] == 'e' || lex_.src[lex_.pos] == 'E')) {
            ++lex_.pos;
            if (lex_.pos < lex_.src.size() && (lex_.src[lex_.pos] == '+' || lex_.src[lex_.pos] == '-'))
                ++lex_.pos;
            const std::size_t ex = lex_.pos;
            digits();
            if (lex_.pos == ex) throw ParseError("expected digits in exponent", lex_.pos + 1);
        }
        double v = 0.0;
        const char* first = lex_.src.data() + start;
        const char* last = lex_.src.data() + lex_.pos;
        auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last)
            throw ParseError("malformed number", start + 1);
        return make_constant(cplx(v, 0.0));
    }

    NodeRef parse_ident(std::size_t at) {
        const std::size_t start = lex_.pos;
        while (lex_.pos < lex_.src.size() &&
               (std::isalnum(static_cast<unsigned char>(lex_.src[lex_.pos])) ||
                lex_.src[lex_.pos] == '_'))
            ++lex_.pos;
        const std::string_view name = lex_.src.substr(start, lex_.pos - start);
        if (name == "z") return make_variable();
        if (name == "i") return make_constant(cplx(0.0, 1.0));
        if (!lex_.accept('('))
            throw ParseError("expected '(' after identifier '" + std::string(name) + "'",
                             lex_.here());
        std::vector<NodeRef> args;
        args.push_back(parse_expr());
        while (lex_.accept(',')) args.push_back(parse_expr());
        lex_.expect(')', "')'");

        if (name == "complex") {
            if (args.size() != 2)
                throw ParseError("complex() takes 2 arguments", at);
            const double re = constant_real(args[0], at, "complex()");
            const double im = constant_real(args[1], at, "complex()");
            return make_constant(cplx(re, im));
        }
        auto it = builtin_table().find(name);
        if (it == builtin_table().end())
            throw ParseError("unknown identifier '" + std::string(name) + "'", at);
        const BuiltinInfo info = it->second;
        if (info.fn == Builtin::Wp || info.fn == Builtin::WpPrime) {
            if (args.size() < 3 || args.size() > 4)
                throw ParseError("wp takes (expr, omega1, omega2 [, shells])", at);
            special::LatticeSpec lattice;
            lattice.omega1 = constant_value(args[1], at, "wp omega1");
            lattice.omega2 = constant_value(args[2], at, "wp omega2");
            if (args.size() == 4) {
                const double s = constant_real(args[3], at, "wp shells");
                if (s != std::floor(s)) throw ParseError("wp shells must be an integer", at);
                lattice.shells = int(s);
            }
            try {
                special::validate(lattice);
            } catch (const special::LatticeError& e) {
                throw ParseError(e.what(), at);
            }
            return make_call(info.fn, {args[0]}, lattice);
        }
        if (int(args.size()) != info.arity)
            throw ParseError("arity mismatch: " + std::string(name) + " takes " +
                                 std::to_string(info.arity) + " argument(s)",
                             at);
        return make_call(info.fn, std::move(args));
    }

    static bool contains_variable(const NodeRef& n) {
        if (n->kind == NodeKind::Variable) return true;
        for (const auto& a : n->args)
            if (contains_variable(a)) return true;
        return false;
    }

    cplx constant_value(const NodeRef& n, std::size_t at, const char* what) {
        if (contains_variable(n))
            throw ParseError(std::string(what) + " must be a constant", at);
        const ExtendedComplex v = eval(ExprAst{n}, cplx(0.0, 0.0));
        if (!v.is_finite())
            throw ParseError(std::string(what) + " must be finite", at);
        return v.value();
    }

    double constant_real(const NodeRef& n, std::size_t at, const char* what) {
        const cplx v = constant_value(n, at, what);
        if (v.imag() != 0.0)
            throw ParseError(std::string(what) + " arguments must be real", at);
        return v.real();
    }
};

}  // namespace

ExprAst parse(std::string_view source) { return ExprAst{Parser(source).parse_all()}; }

// ---------------------------------------------------------------------------
// printing

namespace {

// grammar levels: 1 expr, 2 term, 3 factor, 4 power, 5 base
int node_level(const Node& n) {
    switch (n.kind) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Negate: return 3;
        case NodeKind::Pow: return 4;
        default: return 5;
    }
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_constant(cplx v) {
    // the plain-number and "i" shortcuts must preserve signed zeros through
    // the reparse, so -0.0 components take the complex(...) form
    if (v.imag() == 0.0 && !std::signbit(v.imag()) && !std::signbit(v.real()))
        return format_double(v.real());
    if (v.real() == 0.0 && !std::signbit(v.real()) && v.imag() == 1.0) return "i";
    return "complex(" + format_double(v.real()) + "," + format_double(v.imag()) + ")";
}

void print_node(const Node& n, int min_level, std::string& out) {
    const int level = node_level(n);
    const bool parens = level < min_level;
    if (parens) out += '(';
    switch (n.kind) {
        case NodeKind::Constant: out += format_constant(n.value); break;
        case NodeKind::Variable: out += 'z'; break;
        case NodeKind::Negate:
            out += '-';
            print_node(*n.args[0], 3, out);
            break;
        case NodeKind::Add:
        case NodeKind::Sub:
            print_node(*n.args[0], 1, out);
            out += (n.kind == NodeKind::Add ? '+' : '-');
            print_node(*n.args[1], 2, out);
            break;
        case NodeKind::Mul:
        case NodeKind::Div:
            print_node(*n.args[0], 2, out);
            out += (n.kind == NodeKind::Mul ? '*' : '/');
            print_node(*n.args[1], 3, out);
            break;
        case NodeKind::Pow:
            print_node(*n.args[0], 5, out);
            out += '^';
            print_node(*n.args[1], 3, out);
            break;
        case NodeKind::Call:
            out += builtin_name(n.fn);
            out += '(';
            print_node(*n.args[0], 1, out);
            if (n.lattice) {
                out += ',';
                out += format_constant(n.lattice->omega1);
                out += ',';
                out += format_constant(n.lattice->omega2);
                out += ',';
                out += std::to_string(n.lattice->shells);
            }
            for (std::size_t k = 1; k < n.args.size(); ++k) {
                out += ',';
                print_node(*n.args[k], 1, out);
            }
            out += ')';
            break;
    }
    if (parens) out += ')';
}

}  // namespace

std::string to_string(const ExprAst& ast) {
    std::string out;
    print_node(*ast.root, 1, out);
    return out;
}

namespace {

bool same_cplx(cplx a, cplx b) {
    return a.real() == b.real() && a.imag() == b.imag() &&
           std::signbit(a.real()) == std::signbit(b.real()) &&
           std::signbit(a.imag()) == std::signbit(b.imag());
}

bool identical_nodes(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == NodeKind::Constant) return same_cplx(a.value, b.value);
    if (a.kind == NodeKind::Call) {
        if (a.fn != b.fn) return false;
        if (a.lattice.has_value() != b.lattice.has_value()) return false;
        if (a.lattice &&
            (!same_cplx(a.lattice->omega1, b.lattice->omega1) ||
             !same_cplx(a.lattice->omega2, b.lattice->omega2) ||
             a.lattice->shells != b.lattice->shells))
            return false;
    }
    if (a.args.size() != b.args.size()) return false;
    for (std::size_t k = 0; k < a.args.size(); ++k)
        if (!identical_nodes(*a.args[k], *b.args[k])) return false;
    return true;
}

}  // namespace

bool identical(const ExprAst& a, const ExprAst& b) {
    return identical_nodes(*a.root, *b.root);
}

// ---------------------------------------------------------------------------
// differentiation

namespace {

bool is_const(const NodeRef& n, double v) {
    return n->kind == NodeKind::Constant && n->value == cplx(v, 0.0);
}

// construction helpers used by the derivative builder; they drop unit and
// zero factors so the output matches the textbook shape (d z^3 = 3*z^2)
NodeRef d_add(NodeRef a, NodeRef b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return make_binary(NodeKind::Add, a, b);
}
NodeRef d_sub(NodeRef a, NodeRef b) {
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return make_unary(NodeKind::Negate, b);
    return make_binary(NodeKind::Sub, a, b);
}
NodeRef d_mul(NodeRef a, NodeRef b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_constant(cplx(0.0, 0.0));
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    return make_binary(NodeKind::Mul, a, b);
}
NodeRef d_div(NodeRef a, NodeRef b) {
    if (is_const(a, 0.0)) return make_constant(cplx(0.0, 0.0));
    return make_binary(NodeKind::Div, a, b);
}

NodeRef derivative(const NodeRef& n);

NodeRef chain(const NodeRef& outer_derivative, const NodeRef& inner) {
    return d_mul(outer_derivative, derivative(inner));
}

NodeRef derivative(const NodeRef& n) {
    switch (n->kind) {
        case NodeKind::Constant: return make_constant(cplx(0.0, 0.0));
        case NodeKind::Variable: return make_constant(cplx(1.0, 0.0));
        case NodeKind::Negate: return make_unary(NodeKind::Negate, derivative(n->args[0]));
        case NodeKind::Add: return d_add(derivative(n->args[0]), derivative(n->args[1]));
        case NodeKind::Sub: return d_sub(derivative(n->args[0]), derivative(n->args[1]));
        case NodeKind::Mul:
            return d_add(d_mul(derivative(n->args[0]), n->args[1]),
                         d_mul(n->args[0], derivative(n->args[1])));
        case NodeKind::Div:
            // (u/v)' = (u'v - uv')/v^2
            return d_div(d_sub(d_mul(derivative(n->args[0]), n->args[1]),
                               d_mul(n->args[0], derivative(n->args[1]))),
                         make_binary(NodeKind::Pow, n->args[1], make_constant(cplx(2.0, 0.0))));
        case NodeKind::Pow: {
            const NodeRef& u = n->args[0];
            const NodeRef& e = n->args[1];
            if (e->kind == NodeKind::Constant) {
                // c * u^(c-1) * u'
                const cplx c = e->value;
                NodeRef power = is_const(e, 1.0)
                                    ? make_constant(cplx(1.0, 0.0))
                                    : make_binary(NodeKind::Pow, u,
                                                  make_constant(c - cplx(1.0, 0.0)));
                return d_mul(d_mul(make_constant(c), power), derivative(u));
            }
            // u^e * (e' log u + e u'/u)
            NodeRef term1 = d_mul(derivative(e), make_call(Builtin::Log, {u}));
            NodeRef term2 = d_mul(e, d_div(derivative(u), u));
            return d_mul(make_binary(NodeKind::Pow, u, e), d_add(term1, term2));
        }
        case NodeKind::Call: {
            const NodeRef& u = n->args[0];
            switch (n->fn) {
                case Builtin::Exp: return chain(make_call(Builtin::Exp, {u}), u);
                case Builtin::Log: return d_div(derivative(u), u);
                case Builtin::Sqrt:
                    return d_div(derivative(u),
                                 d_mul(make_constant(cplx(2.0, 0.0)),
                                       make_call(Builtin::Sqrt, {u})));
                case Builtin::Sin: return chain(make_call(Builtin::Cos, {u}), u);
                case Builtin::Cos:
                    return make_unary(NodeKind::Negate, chain(make_call(Builtin::Sin, {u}), u));
                case Builtin::Tan:
                    return d_div(derivative(u),
                                 make_binary(NodeKind::Pow, make_call(Builtin::Cos, {u}),
                                             make_constant(cplx(2.0, 0.0))));
                case Builtin::Sinh: return chain(make_call(Builtin::Cosh, {u}), u);
                case Builtin::Cosh: return chain(make_call(Builtin::Sinh, {u}), u);
                case Builtin::Gamma: return chain(make_call(Builtin::GammaPrime, {u}), u);
                case Builtin::Zeta: return chain(make_call(Builtin::ZetaPrime, {u}), u);
                case Builtin::Wp:
                    return chain(make_call(Builtin::WpPrime, {u}, n->lattice), u);
                case Builtin::GammaPrime:
                case Builtin::ZetaPrime:
                case Builtin::WpPrime:
                    throw UnsupportedDerivativeError(
                        "cannot differentiate an internal derivative node again");
                case Builtin::Conj:
                case Builtin::Re:
                case Builtin::Im:
                case Builtin::Abs:
                    throw NonHolomorphicError("expression is not holomorphic");
            }
        }
    }
    throw Error("unreachable node kind");
}

}  // namespace

ExprAst differentiate(const ExprAst& ast) {
    if (!ast.holomorphic())
        throw NonHolomorphicError("expression is not holomorphic (contains conj/re/im/abs)");
    return ExprAst{derivative(ast.root)};
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

ExtendedComplex eval_pow(const Node& n, const ExtendedComplex& a, const ExtendedComplex& b) {
    if (a.is_undefined() || b.is_undefined()) return ExtendedComplex::undefined();
    if (b.is_infinity()) return ExtendedComplex::undefined();
    const bool real_exp = b.value().imag() == 0.0;
    if (a.is_infinity()) {
        if (!real_exp || b.value().real() == 0.0) return ExtendedComplex::undefined();
        return b.value().real() > 0.0 ? ExtendedComplex::infinity()
                                      : ExtendedComplex(cplx(0.0, 0.0));
    }
    if (a.is_zero()) {
        if (!real_exp || b.value().real() == 0.0) return ExtendedComplex::undefined();
        return b.value().real() > 0.0 ? ExtendedComplex(cplx(0.0, 0.0))
                                      : ExtendedComplex::infinity();
    }
    // exact small-integer exponents use binary powering; keeps z^2 at 1+i
    // equal to 2i exactly and Blaschke multiplicities noise-free
    if (n.args[1]->kind == NodeKind::Constant && real_exp) {
        const double e = b.value().real();
        if (e == std::floor(e) && std::abs(e) <= 1024.0) {
            long k = std::labs(long(e));
            cplx base = a.value(), acc(1.0, 0.0);
            while (k > 0) {
                if (k & 1) acc *= base;
                base *= base;
                k >>= 1;
            }
            if (e < 0.0) {
                if (acc == cplx(0.0, 0.0)) return ExtendedComplex::infinity();
                return ExtendedComplex(cplx(1.0, 0.0) / acc);
            }
            return ExtendedComplex(acc);
        }
    }
    return ExtendedComplex(std::pow(a.value(), b.value()));
}

ExtendedComplex central_difference(ExtendedComplex (*f)(cplx), cplx z) {
    const double h = 1e-6;
    const ExtendedComplex hi = f(z + h), lo = f(z - h);
    if (!hi.is_finite() || !lo.is_finite()) return ExtendedComplex::infinity();
    return ExtendedComplex((hi.value() - lo.value()) / (2.0 * h));
}

ExtendedComplex eval_call(const Node& n, const ExtendedComplex& a) {
    if (a.is_undefined()) return ExtendedComplex::undefined();
    if (a.is_infinity()) {
        switch (n.fn) {
            case Builtin::Log:
            case Builtin::Sqrt:
            case Builtin::Conj:
            case Builtin::Abs: return ExtendedComplex::infinity();
            default: return ExtendedComplex::undefined();
        }
    }
    const cplx v = a.value();
    switch (n.fn) {
        case Builtin::Exp: return ExtendedComplex(std::exp(v));
        case Builtin::Log:
            if (v == cplx(0.0, 0.0)) return ExtendedComplex::infinity();
            return ExtendedComplex(std::log(v));
        case Builtin::Sqrt: return ExtendedComplex(std::sqrt(v));
        case Builtin::Sin: return ExtendedComplex(std::sin(v));
        case Builtin::Cos: return ExtendedComplex(std::cos(v));
        case Builtin::Tan: {
            const cplx c = std::cos(v);
            if (c == cplx(0.0, 0.0)) return ExtendedComplex::infinity();
            return ExtendedComplex(std::sin(v) / c);
        }
        case Builtin::Sinh: return ExtendedComplex(std::sinh(v));
        case Builtin::Cosh: return ExtendedComplex(std::cosh(v));
        case Builtin::Gamma: return special::gamma(v);
        case Builtin::Zeta: return special::zeta(v);
        case Builtin::Wp: return special::wp(v, *n.lattice);
        case Builtin::Conj: return ExtendedComplex(std::conj(v));
        case Builtin::Re: return ExtendedComplex(cplx(v.real(), 0.0));
        case Builtin::Im: return ExtendedComplex(cplx(v.imag(), 0.0));
        case Builtin::Abs: return ExtendedComplex(cplx(std::abs(v), 0.0));
        case Builtin::GammaPrime: {
            auto fn = +[](cplx w) { return special::gamma(w); };
            return central_difference(fn, v);
        }
        case Builtin::ZetaPrime: {
            auto fn = +[](cplx w) { return special::zeta(w); };
            return central_difference(fn, v);
        }
        case Builtin::WpPrime: return special::wp_prime(v, *n.lattice);
    }
    return ExtendedComplex::undefined();
}

ExtendedComplex eval_node(const Node& n, cplx z) {
    switch (n.kind) {
        case NodeKind::Constant: return ExtendedComplex(n.value);
        case NodeKind::Variable: return ExtendedComplex(z);
        case NodeKind::Negate: return -eval_node(*n.args[0], z);
        case NodeKind::Add: return eval_node(*n.args[0], z) + eval_node(*n.args[1], z);
        case NodeKind::Sub: return eval_node(*n.args[0], z) - eval_node(*n.args[1], z);
        case NodeKind::Mul: return eval_node(*n.args[0], z) * eval_node(*n.args[1], z);
        case NodeKind::Div: return eval_node(*n.args[0], z) / eval_node(*n.args[1], z);
        case NodeKind::Pow: return eval_pow(n, eval_node(*n.args[0], z), eval_node(*n.args[1], z));
        case NodeKind::Call: return eval_call(n, eval_node(*n.args[0], z));
    }
    return ExtendedComplex::undefined();
}

}  // namespace

ExtendedComplex eval(const ExprAst& ast, cplx z) { return eval_node(*ast.root, z); }

// ---------------------------------------------------------------------------
// Blaschke products

ExprAst blaschke(std::span<const BlaschkeZero> zeros, cplx c) {
    if (std::abs(std::abs(c) - 1.0) > 1e-12)
        throw NonUnimodularError("Blaschke constant must satisfy |c| = 1");
    NodeRef product;
    for (const BlaschkeZero& zk : zeros) {
        if (std::abs(zk.location) >= 1.0)
            throw ZeroOutsideDiskError("Blaschke zero must lie strictly inside the unit disk");
        if (zk.multiplicity < 1) throw Error("Blaschke multiplicity must be positive");
        NodeRef factor;
        if (zk.location == cplx(0.0, 0.0)) {
            factor = make_variable();
        } else {
            NodeRef numer = make_binary(NodeKind::Sub, make_variable(),
                                        make_constant(zk.location));
            // conj of a constant folds at construction, keeping the tree holomorphic
            NodeRef denom = make_binary(
                NodeKind::Sub, make_constant(cplx(1.0, 0.0)),
                make_binary(NodeKind::Mul, make_constant(std::conj(zk.location)),
                            make_variable()));
            factor = make_binary(NodeKind::Div, numer, denom);
        }
        if (zk.multiplicity > 1)
            factor = make_binary(NodeKind::Pow, factor,
                                 make_constant(cplx(double(zk.multiplicity), 0.0)));
        product = product ? make_binary(NodeKind::Mul, product, factor) : factor;
    }
    if (!product) product = make_constant(cplx(1.0, 0.0));
    if (c != cplx(1.0, 0.0)) product = make_binary(NodeKind::Mul, make_constant(c), product);
    return ExprAst{product};
}

}  // namespace phasor::expr
