#ifndef MODEL_EXPR_H
#define MODEL_EXPR_H

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtplan {

using ResId = int;

// Thrown when a numeric expression cannot be evaluated (division by zero).
struct EvalError : std::runtime_error {
    explicit EvalError(const std::string &msg) : std::runtime_error(msg) {}
};

/*
  Arithmetic expression over constants and ground resource references.
  Used for durations, resource-condition right-hand sides and update amounts.
  Immutable; shared between states via shared_ptr.
*/
class Expr {
public:
    enum class Kind { Constant, Resource, Add, Sub, Mul, Div };

    static std::shared_ptr<const Expr> constant(double value);
    static std::shared_ptr<const Expr> resource(ResId id, std::string name);
    static std::shared_ptr<const Expr> apply(Kind op,
                                             std::vector<std::shared_ptr<const Expr>> args);

    Kind kind() const { return kind_; }

    // Evaluates against a dense resource-value vector. Throws EvalError on
    // division by zero.
    double evaluate(const std::vector<double> &resources) const;

    // True if the expression references no resources; value() is then valid.
    bool is_constant() const;
    double constant_value() const;

    // Appends every referenced resource id (with duplicates) to out.
    void collect_resources(std::vector<ResId> &out) const;

    std::string to_string() const;

private:
    Kind kind_;
    double value_ = 0.0;
    ResId res_ = -1;
    std::string res_name_;
    std::vector<std::shared_ptr<const Expr>> args_;
};

using ExprPtr = std::shared_ptr<const Expr>;

} // namespace mtplan

#endif
