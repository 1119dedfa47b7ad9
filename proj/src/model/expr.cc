#include "model/expr.h"

#include <cassert>
#include <cmath>
#include <sstream>

using namespace std;

namespace mtplan {

ExprPtr Expr::constant(double value) {
    auto e = make_shared<Expr>();
    e->kind_ = Kind::Constant;
    e->value_ = value;
    return e;
}

ExprPtr Expr::resource(ResId id, string name) {
    auto e = make_shared<Expr>();
    e->kind_ = Kind::Resource;
    e->res_ = id;
    e->res_name_ = std::move(name);
    return e;
}

ExprPtr Expr::apply(Kind op, vector<ExprPtr> args) {
    assert(op != Kind::Constant && op != Kind::Resource);
    assert(!args.empty());
    auto e = make_shared<Expr>();
    e->kind_ = op;
    e->args_ = std::move(args);
    return e;
}

double Expr::evaluate(const vector<double> &resources) const {
    switch (kind_) {
    case Kind::Constant:
        return value_;
    case Kind::Resource:
        assert(res_ >= 0 && res_ < static_cast<int>(resources.size()));
        return resources[res_];
    default:
        break;
    }
    double acc = args_[0]->evaluate(resources);
    // Unary minus: (- x) negates.
    if (kind_ == Kind::Sub && args_.size() == 1)
        return -acc;
    for (size_t i = 1; i < args_.size(); ++i) {
        double v = args_[i]->evaluate(resources);
        switch (kind_) {
        case Kind::Add: acc += v; break;
        case Kind::Sub: acc -= v; break;
        case Kind::Mul: acc *= v; break;
        case Kind::Div:
            if (v == 0.0)
                throw EvalError("division by zero in expression " + to_string());
            acc /= v;
            break;
        default: assert(false);
        }
    }
    return acc;
}

bool Expr::is_constant() const {
    if (kind_ == Kind::Constant)
        return true;
    if (kind_ == Kind::Resource)
        return false;
    for (const auto &a : args_)
        if (!a->is_constant())
            return false;
    return true;
}

double Expr::constant_value() const {
    static const vector<double> no_resources;
    return evaluate(no_resources);
}

void Expr::collect_resources(vector<ResId> &out) const {
    if (kind_ == Kind::Resource) {
        out.push_back(res_);
        return;
    }
    for (const auto &a : args_)
        a->collect_resources(out);
}

string Expr::to_string() const {
    switch (kind_) {
    case Kind::Constant: {
        ostringstream os;
        os << value_;
        return os.str();
    }
    case Kind::Resource:
        return res_name_;
    default:
        break;
    }
    const char *op = "?";
    switch (kind_) {
    case Kind::Add: op = "+"; break;
    case Kind::Sub: op = "-"; break;
    case Kind::Mul: op = "*"; break;
    case Kind::Div: op = "/"; break;
    default: break;
    }
    string s = "(";
    s += op;
    for (const auto &a : args_) {
        s += ' ';
        s += a->to_string();
    }
    s += ')';
    return s;
}

} // namespace mtplan
