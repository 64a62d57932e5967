#include "sturm/expr.hpp"

#include <cctype>
#include <cmath>
#include <vector>

namespace sturm {

enum class Op {
    Const, Var,               // leaves
    Add, Sub, Mul, Div, Pow,  // binary
    Neg, Sin, Cos, Tan, Exp, Ln, Abs  // unary
};

enum class VarId { Theta, U, P, Lambda };

struct ExprNode {
    Op op;
    double value = 0.0;  // Const
    VarId var = VarId::U;  // Var
    ExprPtr lhs, rhs;
};

namespace {

ExprPtr make_const(double v) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Const;
    n->value = v;
    return n;
}

ExprPtr make_var(VarId v) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Var;
    n->var = v;
    return n;
}

bool is_const(const ExprPtr& e, double v) {
    return e->op == Op::Const && e->value == v;
}

ExprPtr make_unary(Op op, ExprPtr a) {
    if (a->op == Op::Const) {
        switch (op) {
            case Op::Neg: return make_const(-a->value);
            case Op::Sin: return make_const(std::sin(a->value));
            case Op::Cos: return make_const(std::cos(a->value));
            case Op::Tan: return make_const(std::tan(a->value));
            case Op::Exp: return make_const(std::exp(a->value));
            case Op::Ln:  return make_const(std::log(a->value));
            case Op::Abs: return make_const(std::abs(a->value));
            default: break;
        }
    }
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->lhs = std::move(a);
    return n;
}

ExprPtr make_binary(Op op, ExprPtr a, ExprPtr b) {
    // Constant folding and the usual identity pruning keep derivative
    // trees from ballooning.
    if (a->op == Op::Const && b->op == Op::Const) {
        switch (op) {
            case Op::Add: return make_const(a->value + b->value);
            case Op::Sub: return make_const(a->value - b->value);
            case Op::Mul: return make_const(a->value * b->value);
            case Op::Div: break;  // keep division-by-zero an eval-time event
            case Op::Pow: return make_const(std::pow(a->value, b->value));
            default: break;
        }
    }
    switch (op) {
        case Op::Add:
            if (is_const(a, 0.0)) return b;
            if (is_const(b, 0.0)) return a;
            break;
        case Op::Sub:
            if (is_const(b, 0.0)) return a;
            if (is_const(a, 0.0)) return make_unary(Op::Neg, b);
            break;
        case Op::Mul:
            if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
            if (is_const(a, 1.0)) return b;
            if (is_const(b, 1.0)) return a;
            break;
        case Op::Div:
            if (is_const(a, 0.0)) return make_const(0.0);
            if (is_const(b, 1.0)) return a;
            break;
        case Op::Pow:
            if (is_const(b, 1.0)) return a;
            if (is_const(b, 0.0)) return make_const(1.0);
            break;
        default:
            break;
    }
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

double eval_node(const ExprNode& n, const EvalPoint& pt) {
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::Var:
            switch (n.var) {
                case VarId::Theta: return pt.theta;
                case VarId::U: return pt.u;
                case VarId::P: return pt.p;
                case VarId::Lambda: return pt.lambda;
            }
            return 0.0;
        case Op::Add: return eval_node(*n.lhs, pt) + eval_node(*n.rhs, pt);
        case Op::Sub: return eval_node(*n.lhs, pt) - eval_node(*n.rhs, pt);
        case Op::Mul: return eval_node(*n.lhs, pt) * eval_node(*n.rhs, pt);
        case Op::Div: return eval_node(*n.lhs, pt) / eval_node(*n.rhs, pt);
        case Op::Pow: {
            double base = eval_node(*n.lhs, pt);
            // integer exponents are the common case; avoid pow() domain quirks
            if (n.rhs->op == Op::Const) {
                double e = n.rhs->value;
                if (e == std::floor(e) && std::abs(e) <= 16) {
                    double r = 1.0;
                    int k = static_cast<int>(std::abs(e));
                    for (int i = 0; i < k; ++i) r *= base;
                    return e < 0 ? 1.0 / r : r;
                }
            }
            return std::pow(base, eval_node(*n.rhs, pt));
        }
        case Op::Neg: return -eval_node(*n.lhs, pt);
        case Op::Sin: return std::sin(eval_node(*n.lhs, pt));
        case Op::Cos: return std::cos(eval_node(*n.lhs, pt));
        case Op::Tan: return std::tan(eval_node(*n.lhs, pt));
        case Op::Exp: return std::exp(eval_node(*n.lhs, pt));
        case Op::Ln:  return std::log(eval_node(*n.lhs, pt));
        case Op::Abs: return std::abs(eval_node(*n.lhs, pt));
    }
    return 0.0;
}

bool differentiable_node(const ExprNode& n) {
    if (n.op == Op::Abs) return false;
    if (n.lhs && !differentiable_node(*n.lhs)) return false;
    if (n.rhs && !differentiable_node(*n.rhs)) return false;
    return true;
}

ExprPtr diff_node(const ExprPtr& n, VarId var) {
    switch (n->op) {
        case Op::Const: return make_const(0.0);
        case Op::Var: return make_const(n->var == var ? 1.0 : 0.0);
        case Op::Add:
            return make_binary(Op::Add, diff_node(n->lhs, var), diff_node(n->rhs, var));
        case Op::Sub:
            return make_binary(Op::Sub, diff_node(n->lhs, var), diff_node(n->rhs, var));
        case Op::Mul:
            return make_binary(
                Op::Add,
                make_binary(Op::Mul, diff_node(n->lhs, var), n->rhs),
                make_binary(Op::Mul, n->lhs, diff_node(n->rhs, var)));
        case Op::Div:
            // (f/g)' = (f'g - fg') / g^2
            return make_binary(
                Op::Div,
                make_binary(Op::Sub,
                            make_binary(Op::Mul, diff_node(n->lhs, var), n->rhs),
                            make_binary(Op::Mul, n->lhs, diff_node(n->rhs, var))),
                make_binary(Op::Mul, n->rhs, n->rhs));
        case Op::Pow: {
            if (n->rhs->op == Op::Const) {
                // d(f^c) = c f^(c-1) f'
                double c = n->rhs->value;
                return make_binary(
                    Op::Mul, make_const(c),
                    make_binary(Op::Mul,
                                make_binary(Op::Pow, n->lhs, make_const(c - 1.0)),
                                diff_node(n->lhs, var)));
            }
            // general: f^g = exp(g ln f)
            auto as_exp = make_unary(
                Op::Exp, make_binary(Op::Mul, n->rhs, make_unary(Op::Ln, n->lhs)));
            auto inner = make_binary(
                Op::Add,
                make_binary(Op::Mul, diff_node(n->rhs, var), make_unary(Op::Ln, n->lhs)),
                make_binary(Op::Div,
                            make_binary(Op::Mul, n->rhs, diff_node(n->lhs, var)),
                            n->lhs));
            return make_binary(Op::Mul, as_exp, inner);
        }
        case Op::Neg: return make_unary(Op::Neg, diff_node(n->lhs, var));
        case Op::Sin:
            return make_binary(Op::Mul, make_unary(Op::Cos, n->lhs), diff_node(n->lhs, var));
        case Op::Cos:
            return make_unary(Op::Neg, make_binary(Op::Mul, make_unary(Op::Sin, n->lhs),
                                                   diff_node(n->lhs, var)));
        case Op::Tan: {
            auto sec2 = make_binary(
                Op::Div, make_const(1.0),
                make_binary(Op::Pow, make_unary(Op::Cos, n->lhs), make_const(2.0)));
            return make_binary(Op::Mul, sec2, diff_node(n->lhs, var));
        }
        case Op::Exp:
            return make_binary(Op::Mul, make_unary(Op::Exp, n->lhs), diff_node(n->lhs, var));
        case Op::Ln:
            return make_binary(Op::Div, diff_node(n->lhs, var), n->lhs);
        case Op::Abs:
            throw std::runtime_error("abs() is not symbolically differentiable");
    }
    return make_const(0.0);
}

// --- parser: precedence climbing ---

struct Token {
    enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
    double number = 0.0;
    std::string ident;
    std::size_t pos = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        tok_.pos = i_;
        if (i_ >= text_.size()) {
            tok_.kind = Token::End;
            return;
        }
        char c = text_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            try {
                tok_.number = std::stod(text_.substr(i_), &used);
            } catch (const std::exception&) {
                throw ParseError("bad numeric literal", i_);
            }
            tok_.kind = Token::Number;
            i_ += used;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
                ++j;
            tok_.kind = Token::Ident;
            tok_.ident = text_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        switch (c) {
            case '+': tok_.kind = Token::Plus; break;
            case '-': tok_.kind = Token::Minus; break;
            case '*': tok_.kind = Token::Star; break;
            case '/': tok_.kind = Token::Slash; break;
            case '^': tok_.kind = Token::Caret; break;
            case '(': tok_.kind = Token::LParen; break;
            case ')': tok_.kind = Token::RParen; break;
            default: throw ParseError(std::string("unexpected character '") + c + "'", i_);
        }
        ++i_;
    }

    const std::string& text_;
    std::size_t i_ = 0;
    Token tok_;
};

class Parser {
  public:
    explicit Parser(const std::string& text) : lex_(text) {}

    ExprPtr parse() {
        ExprPtr e = parse_expr(0);
        if (lex_.peek().kind != Token::End)
            throw ParseError("unexpected trailing input", lex_.peek().pos);
        return e;
    }

  private:
    static int precedence(Token::Kind k) {
        switch (k) {
            case Token::Plus:
            case Token::Minus: return 1;
            case Token::Star:
            case Token::Slash: return 2;
            case Token::Caret: return 3;
            default: return -1;
        }
    }

    ExprPtr parse_expr(int min_prec) {
        ExprPtr lhs = parse_primary();
        for (;;) {
            Token::Kind k = lex_.peek().kind;
            int prec = precedence(k);
            if (prec < min_prec || prec < 0) break;
            lex_.next();
            // ^ is right-associative
            ExprPtr rhs = parse_expr(k == Token::Caret ? prec : prec + 1);
            switch (k) {
                case Token::Plus: lhs = make_binary(Op::Add, lhs, rhs); break;
                case Token::Minus: lhs = make_binary(Op::Sub, lhs, rhs); break;
                case Token::Star: lhs = make_binary(Op::Mul, lhs, rhs); break;
                case Token::Slash: lhs = make_binary(Op::Div, lhs, rhs); break;
                case Token::Caret: lhs = make_binary(Op::Pow, lhs, rhs); break;
                default: break;
            }
        }
        return lhs;
    }

    ExprPtr parse_primary() {
        Token t = lex_.next();
        switch (t.kind) {
            case Token::Number:
                return make_const(t.number);
            case Token::Minus:
                return make_unary(Op::Neg, parse_expr(2));
            case Token::Plus:
                return parse_expr(2);
            case Token::LParen: {
                ExprPtr e = parse_expr(0);
                if (lex_.peek().kind != Token::RParen)
                    throw ParseError("expected ')'", lex_.peek().pos);
                lex_.next();
                return e;
            }
            case Token::Ident: {
                if (t.ident == "theta") return make_var(VarId::Theta);
                if (t.ident == "u") return make_var(VarId::U);
                if (t.ident == "p") return make_var(VarId::P);
                if (t.ident == "lambda") return make_var(VarId::Lambda);
                if (t.ident == "pi") return make_const(M_PI);
                Op fn;
                if (t.ident == "sin") fn = Op::Sin;
                else if (t.ident == "cos") fn = Op::Cos;
                else if (t.ident == "tan") fn = Op::Tan;
                else if (t.ident == "exp") fn = Op::Exp;
                else if (t.ident == "ln") fn = Op::Ln;
                else if (t.ident == "abs") fn = Op::Abs;
                else throw ParseError("unknown identifier '" + t.ident + "'", t.pos);
                if (lex_.peek().kind != Token::LParen)
                    throw ParseError("expected '(' after function name", lex_.peek().pos);
                lex_.next();
                ExprPtr arg = parse_expr(0);
                if (lex_.peek().kind != Token::RParen)
                    throw ParseError("expected ')'", lex_.peek().pos);
                lex_.next();
                return make_unary(fn, arg);
            }
            default:
                throw ParseError("expected expression", t.pos);
        }
    }

    Lexer lex_;
};

std::string to_string_node(const ExprNode& n) {
    switch (n.op) {
        case Op::Const: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", n.value);
            return buf;
        }
        case Op::Var:
            switch (n.var) {
                case VarId::Theta: return "theta";
                case VarId::U: return "u";
                case VarId::P: return "p";
                case VarId::Lambda: return "lambda";
            }
            return "?";
        case Op::Add: return "(" + to_string_node(*n.lhs) + "+" + to_string_node(*n.rhs) + ")";
        case Op::Sub: return "(" + to_string_node(*n.lhs) + "-" + to_string_node(*n.rhs) + ")";
        case Op::Mul: return "(" + to_string_node(*n.lhs) + "*" + to_string_node(*n.rhs) + ")";
        case Op::Div: return "(" + to_string_node(*n.lhs) + "/" + to_string_node(*n.rhs) + ")";
        case Op::Pow: return "(" + to_string_node(*n.lhs) + "^" + to_string_node(*n.rhs) + ")";
        case Op::Neg: return "(-" + to_string_node(*n.lhs) + ")";
        case Op::Sin: return "sin(" + to_string_node(*n.lhs) + ")";
        case Op::Cos: return "cos(" + to_string_node(*n.lhs) + ")";
        case Op::Tan: return "tan(" + to_string_node(*n.lhs) + ")";
        case Op::Exp: return "exp(" + to_string_node(*n.lhs) + ")";
        case Op::Ln:  return "ln(" + to_string_node(*n.lhs) + ")";
        case Op::Abs: return "abs(" + to_string_node(*n.lhs) + ")";
    }
    return "?";
}

}  // namespace

Expression Expression::parse(const std::string& text) {
    Parser parser(text);
    return Expression(parser.parse());
}

double Expression::eval(const EvalPoint& pt) const {
    if (!root_) throw std::runtime_error("evaluating empty expression");
    return eval_node(*root_, pt);
}

bool Expression::symbolic_differentiable() const {
    return root_ && differentiable_node(*root_);
}

Expression Expression::derivative(const std::string& var) const {
    if (!root_) throw std::runtime_error("differentiating empty expression");
    VarId v;
    if (var == "theta") v = VarId::Theta;
    else if (var == "u") v = VarId::U;
    else if (var == "p") v = VarId::P;
    else if (var == "lambda") v = VarId::Lambda;
    else throw std::runtime_error("unknown variable '" + var + "'");
    return Expression(diff_node(root_, v));
}

std::string Expression::to_string() const {
    return root_ ? to_string_node(*root_) : "<empty>";
}

}  // namespace sturm
