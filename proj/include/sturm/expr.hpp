// Small expression DSL: parser, evaluator and symbolic differentiation
// for coefficient functions of (theta, u, p, lambda).
#ifndef STURM_EXPR_HPP
#define STURM_EXPR_HPP

#include <memory>
#include <stdexcept>
#include <string>

namespace sturm {

// Evaluation point for an expression.
struct EvalPoint {
    double theta = 0.0;
    double u = 0.0;
    double p = 0.0;
    double lambda = 0.0;
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

// Thrown on malformed input; `offset` is the byte position in the source text.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " at offset " + std::to_string(offset)),
          offset(offset) {}
    std::size_t offset;
};

// Immutable expression tree. Thread-safe to evaluate from multiple threads.
class Expression {
  public:
    Expression() = default;

    static Expression parse(const std::string& text);

    double eval(const EvalPoint& pt) const;

    // Symbolic partial derivative. `var` is one of "theta", "u", "p", "lambda".
    // Throws std::runtime_error if the tree is not symbolically differentiable
    // (currently: contains abs).
    Expression derivative(const std::string& var) const;

    bool symbolic_differentiable() const;
    bool empty() const { return !root_; }
    std::string to_string() const;

  private:
    explicit Expression(ExprPtr root) : root_(std::move(root)) {}
    ExprPtr root_;
};

}  // namespace sturm

#endif
