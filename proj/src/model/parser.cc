#include "model/parser.h"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

using namespace std;

namespace mtplan {

namespace {

struct Sexp {
    bool atom = false;
    string text;        // atoms only
    vector<Sexp> items; // lists only
    int line = 0;

    bool is_list() const { return !atom; }
    size_t size() const { return items.size(); }
    const Sexp &operator[](size_t i) const { return items[i]; }
    const string &head() const {
        static const string empty;
        if (atom || items.empty() || !items[0].atom)
            return empty;
        return items[0].text;
    }
};

[[noreturn]] void fail(const string &msg, int line) { throw ParseError(msg, line); }

class Reader {
public:
    explicit Reader(const string &text) : text_(text) {}

    vector<Sexp> read_all() {
        vector<Sexp> result;
        skip_ws();
        while (pos_ < text_.size()) {
            result.push_back(read());
            skip_ws();
        }
        return result;
    }

private:
    const string &text_;
    size_t pos_ = 0;
    int line_ = 1;

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    ++pos_;
            } else if (isspace(static_cast<unsigned char>(c))) {
                if (c == '\n')
                    ++line_;
                ++pos_;
            } else {
                break;
            }
        }
    }

    Sexp read() {
        skip_ws();
        if (pos_ >= text_.size())
            fail("unexpected end of input", line_);
        Sexp s;
        s.line = line_;
        if (text_[pos_] == '(') {
            ++pos_;
            skip_ws();
            while (pos_ < text_.size() && text_[pos_] != ')')
                s.items.push_back(read()), skip_ws();
            if (pos_ >= text_.size())
                fail("missing ')'", s.line);
            ++pos_;
            return s;
        }
        if (text_[pos_] == ')')
            fail("unexpected ')'", line_);
        s.atom = true;
        size_t start = pos_;
        while (pos_ < text_.size() && !isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';')
            ++pos_;
        s.text = text_.substr(start, pos_ - start);
        for (auto &c : s.text)
            c = static_cast<char>(tolower(static_cast<unsigned char>(c)));
        return s;
    }
};

bool parse_number(const string &s, double &out) {
    if (s.empty())
        return false;
    char *end = nullptr;
    out = strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

// ---- unground (schema-level) structures -----------------------------------

struct TypedName {
    string name;
    string type;
};

// Reads "a b - t c - object d" style lists.
vector<TypedName> parse_typed_list(const Sexp &list, size_t from, size_t to) {
    vector<TypedName> result;
    vector<string> pending;
    for (size_t i = from; i < to; ++i) {
        const Sexp &item = list[i];
        if (!item.atom)
            fail("expected name in typed list", item.line);
        if (item.text == "-") {
            ++i;
            if (i >= to || !list[i].atom)
                fail("expected type after '-'", item.line);
            for (auto &name : pending)
                result.push_back({name, list[i].text});
            pending.clear();
        } else {
            pending.push_back(item.text);
        }
    }
    for (auto &name : pending)
        result.push_back({name, "object"});
    return result;
}

struct SchemaAtom { // predicate or function reference with ?vars/constants
    string name;
    vector<string> terms;
    int line = 0;
};

struct SchemaExpr {
    enum class Kind { Constant, Func, Op, TotalTime } kind = Kind::Constant;
    double value = 0.0;
    SchemaAtom func;
    Expr::Kind op = Expr::Kind::Add;
    vector<SchemaExpr> args;
    int line = 0;
};

struct SchemaCondition {
    bool is_resource = false;
    SchemaAtom atom; // predicate, or function for resource conditions
    Cmp cmp = Cmp::Ge;
    SchemaExpr rhs;
    CondTime when = CondTime::AtStart;
    double over_d = 0.0;
};

struct SchemaEffect {
    bool is_update = false;
    SchemaAtom atom;
    bool add = true;
    UpdateOp op = UpdateOp::Assign;
    SchemaExpr rhs;
    EffTime when = EffTime::AtStart;
    double at_offset = 0.0;
};

struct ActionSchema {
    string name;
    vector<TypedName> params;
    SchemaExpr duration;
    SchemaExpr cost; // constant expression; defaults to 1.0
    bool cost_given = false;
    vector<SchemaCondition> conditions;
    vector<SchemaEffect> effects;
    int line = 0;
};

struct Domain {
    string name;
    map<string, string> type_parent;            // type -> parent
    vector<TypedName> constants;
    map<string, size_t> predicate_arity;
    map<string, size_t> function_arity;
    vector<ActionSchema> schemas;
};

SchemaAtom parse_atom_ref(const Sexp &s) {
    if (!s.is_list() || s.size() == 0 || !s[0].atom)
        fail("expected (name term*)", s.line);
    SchemaAtom a;
    a.name = s[0].text;
    a.line = s.line;
    for (size_t i = 1; i < s.size(); ++i) {
        if (!s[i].atom)
            fail("expected atomic term", s[i].line);
        a.terms.push_back(s[i].text);
    }
    return a;
}

SchemaExpr parse_expr(const Sexp &s, bool allow_total_time) {
    SchemaExpr e;
    e.line = s.line;
    if (s.atom) {
        if (!parse_number(s.text, e.value))
            fail("expected number, got '" + s.text + "'", s.line);
        e.kind = SchemaExpr::Kind::Constant;
        return e;
    }
    if (s.size() == 0)
        fail("empty expression", s.line);
    const string &head = s.head();
    if (head == "+" || head == "-" || head == "*" || head == "/") {
        e.kind = SchemaExpr::Kind::Op;
        e.op = head == "+"   ? Expr::Kind::Add
               : head == "-" ? Expr::Kind::Sub
               : head == "*" ? Expr::Kind::Mul
                             : Expr::Kind::Div;
        if (s.size() < 2)
            fail("operator needs arguments", s.line);
        for (size_t i = 1; i < s.size(); ++i)
            e.args.push_back(parse_expr(s[i], allow_total_time));
        return e;
    }
    if (head == "total-time") {
        if (!allow_total_time)
            fail("total-time is only allowed in the metric", s.line);
        e.kind = SchemaExpr::Kind::TotalTime;
        return e;
    }
    e.kind = SchemaExpr::Kind::Func;
    e.func = parse_atom_ref(s);
    return e;
}

optional<Cmp> comparator(const string &s) {
    if (s == "<") return Cmp::Lt;
    if (s == "<=") return Cmp::Le;
    if (s == ">") return Cmp::Gt;
    if (s == ">=") return Cmp::Ge;
    if (s == "=") return Cmp::Eq;
    return nullopt;
}

optional<UpdateOp> update_op(const string &s) {
    if (s == "assign") return UpdateOp::Assign;
    if (s == "increase") return UpdateOp::Increase;
    if (s == "decrease") return UpdateOp::Decrease;
    if (s == "scale-up") return UpdateOp::ScaleUp;
    if (s == "scale-down") return UpdateOp::ScaleDown;
    return nullopt;
}

// (at start X) / (at end X) / (over all X) / (over NUM X); returns X.
const Sexp &parse_time_wrapper(const Sexp &s, CondTime &when, double &over_d) {
    if (!s.is_list() || s.size() != 3 || !s[1].atom)
        fail("expected (at start ...), (at end ...) or (over ...)", s.line);
    const string &head = s.head();
    const string &tag = s[1].text;
    if (head == "at") {
        if (tag == "start")
            when = CondTime::AtStart;
        else if (tag == "end")
            when = CondTime::AtEnd;
        else
            fail("conditions allow only (at start ...) / (at end ...)", s.line);
    } else if (head == "over") {
        if (tag == "all") {
            when = CondTime::OverAll;
        } else if (parse_number(tag, over_d)) {
            if (over_d < 0)
                fail("negative condition window", s.line);
            when = CondTime::OverFor;
        } else {
            fail("expected (over all ...) or (over <number> ...)", s.line);
        }
    } else {
        fail("expected timed condition/effect", s.line);
    }
    return s[2];
}

void parse_condition_item(const Sexp &s, ActionSchema &schema) {
    SchemaCondition c;
    const Sexp &body = parse_time_wrapper(s, c.when, c.over_d);
    if (!body.is_list() || body.size() == 0)
        fail("expected condition", body.line);
    if (auto cmp = comparator(body.head())) {
        if (body.size() != 3)
            fail("comparison needs two operands", body.line);
        if (!body[1].is_list())
            fail("resource condition left side must be a function term", body[1].line);
        c.is_resource = true;
        c.cmp = *cmp;
        c.atom = parse_atom_ref(body[1]);
        c.rhs = parse_expr(body[2], false);
    } else {
        if (body.head() == "not")
            fail("negative conditions are not supported", body.line);
        c.atom = parse_atom_ref(body);
    }
    schema.conditions.push_back(std::move(c));
}

void parse_effect_item(const Sexp &s, ActionSchema &schema) {
    SchemaEffect e;
    // (at <number> X) is a delayed effect; (at start/end X) the usual ones.
    if (!s.is_list() || s.size() != 3 || !s[1].atom)
        fail("expected timed effect", s.line);
    double offset = 0.0;
    const Sexp *body;
    if (s.head() == "at" && parse_number(s[1].text, offset)) {
        if (offset < 0)
            fail("negative effect offset", s.line);
        e.when = EffTime::AtOffset;
        e.at_offset = offset;
        body = &s[2];
    } else {
        CondTime when;
        double over_d = 0.0;
        body = &parse_time_wrapper(s, when, over_d);
        if (when == CondTime::AtStart)
            e.when = EffTime::AtStart;
        else if (when == CondTime::AtEnd)
            e.when = EffTime::AtEnd;
        else
            fail("effects allow only at start / at end / at <number>", s.line);
    }
    if (!body->is_list() || body->size() == 0)
        fail("expected effect", body->line);
    if (auto op = update_op(body->head())) {
        if (body->size() != 3 || !(*body)[1].is_list())
            fail("update needs (op (function term*) expr)", body->line);
        e.is_update = true;
        e.op = *op;
        e.atom = parse_atom_ref((*body)[1]);
        e.rhs = parse_expr((*body)[2], false);
    } else if (body->head() == "not") {
        if (body->size() != 2)
            fail("(not ...) takes one literal", body->line);
        e.add = false;
        e.atom = parse_atom_ref((*body)[1]);
    } else {
        e.atom = parse_atom_ref(*body);
    }
    schema.effects.push_back(std::move(e));
}

void parse_flat(const Sexp &s, void (*item_parser)(const Sexp &, ActionSchema &),
                ActionSchema &schema) {
    if (s.is_list() && s.head() == "and") {
        for (size_t i = 1; i < s.size(); ++i)
            item_parser(s[i], schema);
    } else if (s.is_list() && s.size() == 0) {
        // empty condition/effect
    } else {
        item_parser(s, schema);
    }
}

ActionSchema parse_action(const Sexp &s) {
    ActionSchema schema;
    schema.line = s.line;
    if (s.size() < 2 || !s[1].atom)
        fail("durative-action needs a name", s.line);
    schema.name = s[1].text;
    bool saw_duration = false;
    size_t i = 2;
    while (i < s.size()) {
        if (!s[i].atom || s[i].text.empty() || s[i].text[0] != ':')
            fail("expected :keyword in action body", s[i].line);
        const string key = s[i].text;
        ++i;
        if (i >= s.size())
            fail("missing value after " + key, s.line);
        const Sexp &value = s[i];
        ++i;
        if (key == ":parameters") {
            if (!value.is_list())
                fail(":parameters needs a list", value.line);
            schema.params = parse_typed_list(value, 0, value.size());
            for (const auto &p : schema.params)
                if (p.name.empty() || p.name[0] != '?')
                    fail("parameter names start with '?'", value.line);
        } else if (key == ":duration") {
            if (!value.is_list() || value.size() != 3 || value.head() != "=" ||
                !value[1].atom || value[1].text != "?duration")
                fail(":duration must be (= ?duration <expr>)", value.line);
            schema.duration = parse_expr(value[2], false);
            saw_duration = true;
        } else if (key == ":cost") {
            schema.cost = parse_expr(value, false);
            schema.cost_given = true;
        } else if (key == ":condition") {
            parse_flat(value, parse_condition_item, schema);
        } else if (key == ":effect") {
            parse_flat(value, parse_effect_item, schema);
        } else {
            fail("unknown action keyword " + key, value.line);
        }
    }
    if (!saw_duration)
        fail("action " + schema.name + " has no :duration", s.line);
    return schema;
}

Domain parse_domain(const Sexp &top) {
    if (top.size() < 2 || !top[1].is_list() || top[1].head() != "domain" ||
        top[1].size() != 2)
        fail("expected (define (domain NAME) ...)", top.line);
    Domain d;
    d.name = top[1][1].text;
    for (size_t i = 2; i < top.size(); ++i) {
        const Sexp &s = top[i];
        const string &head = s.head();
        if (head == ":requirements") {
            continue;
        } else if (head == ":types") {
            for (auto &tn : parse_typed_list(s, 1, s.size()))
                d.type_parent[tn.name] = tn.type;
        } else if (head == ":constants") {
            auto list = parse_typed_list(s, 1, s.size());
            d.constants.insert(d.constants.end(), list.begin(), list.end());
        } else if (head == ":predicates") {
            for (size_t j = 1; j < s.size(); ++j) {
                SchemaAtom a = parse_atom_ref(s[j]);
                // terms are typed parameter declarations; only arity matters
                size_t arity = 0;
                for (size_t k = 0; k < a.terms.size(); ++k) {
                    if (a.terms[k] == "-")
                        ++k; // skip type name
                    else
                        ++arity;
                }
                d.predicate_arity[a.name] = arity;
            }
        } else if (head == ":functions") {
            for (size_t j = 1; j < s.size(); ++j) {
                SchemaAtom a = parse_atom_ref(s[j]);
                size_t arity = 0;
                for (size_t k = 0; k < a.terms.size(); ++k) {
                    if (a.terms[k] == "-")
                        ++k;
                    else
                        ++arity;
                }
                d.function_arity[a.name] = arity;
            }
        } else if (head == ":durative-action") {
            d.schemas.push_back(parse_action(s));
        } else {
            fail("unknown domain element '" + head + "'", s.line);
        }
    }
    return d;
}

// ---- grounding -------------------------------------------------------------

struct Grounder {
    const Domain &domain;
    Problem &problem;
    map<string, vector<string>> objects_by_type; // includes ancestor buckets
    map<string, string> object_type;

    Grounder(const Domain &d, Problem &p) : domain(d), problem(p) {}

    bool type_known(const string &t) const {
        return t == "object" || domain.type_parent.count(t);
    }

    void add_object(const string &name, const string &type, int line) {
        if (!type_known(type))
            fail("unknown type '" + type + "'", line);
        if (object_type.count(name))
            fail("duplicate object '" + name + "'", line);
        object_type[name] = type;
        string t = type;
        while (true) {
            objects_by_type[t].push_back(name);
            if (t == "object")
                break;
            auto it = domain.type_parent.find(t);
            t = it == domain.type_parent.end() ? "object" : it->second;
        }
    }

    PredId intern_pred(const SchemaAtom &atom, const map<string, string> &binding) {
        auto ar = domain.predicate_arity.find(atom.name);
        if (ar == domain.predicate_arity.end())
            fail("unknown predicate '" + atom.name + "'", atom.line);
        if (ar->second != atom.terms.size())
            fail("predicate '" + atom.name + "' arity mismatch", atom.line);
        string sig = ground_signature(atom, binding);
        auto it = problem.pred_index.find(sig);
        if (it != problem.pred_index.end())
            return it->second;
        PredId id = static_cast<PredId>(problem.pred_names.size());
        problem.pred_names.push_back(sig);
        problem.pred_index[sig] = id;
        return id;
    }

    ResId intern_res(const SchemaAtom &atom, const map<string, string> &binding) {
        auto ar = domain.function_arity.find(atom.name);
        if (ar == domain.function_arity.end())
            fail("unknown function '" + atom.name + "'", atom.line);
        if (ar->second != atom.terms.size())
            fail("function '" + atom.name + "' arity mismatch", atom.line);
        string sig = ground_signature(atom, binding);
        auto it = problem.res_index.find(sig);
        if (it != problem.res_index.end())
            return it->second;
        ResId id = static_cast<ResId>(problem.res_names.size());
        problem.res_names.push_back(sig);
        problem.res_index[sig] = id;
        return id;
    }

    string ground_signature(const SchemaAtom &atom, const map<string, string> &binding) {
        string sig = "(" + atom.name;
        for (const auto &t : atom.terms) {
            sig += ' ';
            sig += substitute(t, atom.line, binding);
        }
        sig += ')';
        return sig;
    }

    string substitute(const string &term, int line, const map<string, string> &binding) {
        if (!term.empty() && term[0] == '?') {
            auto it = binding.find(term);
            if (it == binding.end())
                fail("unbound variable '" + term + "'", line);
            return it->second;
        }
        if (!object_type.count(term))
            fail("unknown object '" + term + "'", line);
        return term;
    }

    ExprPtr ground_expr(const SchemaExpr &e, const map<string, string> &binding) {
        switch (e.kind) {
        case SchemaExpr::Kind::Constant:
            return Expr::constant(e.value);
        case SchemaExpr::Kind::Func: {
            ResId id = intern_res(e.func, binding);
            return Expr::resource(id, problem.res_names[id]);
        }
        case SchemaExpr::Kind::Op: {
            vector<ExprPtr> args;
            args.reserve(e.args.size());
            for (const auto &a : e.args)
                args.push_back(ground_expr(a, binding));
            return Expr::apply(e.op, std::move(args));
        }
        case SchemaExpr::Kind::TotalTime:
            fail("total-time outside metric", e.line);
        }
        return nullptr;
    }

    void ground_schema(const ActionSchema &schema) {
        map<string, string> binding;
        vector<const vector<string> *> pools;
        static const vector<string> empty_pool;
        for (const auto &p : schema.params) {
            if (!type_known(p.type))
                fail("unknown parameter type '" + p.type + "'", schema.line);
            auto it = objects_by_type.find(p.type);
            pools.push_back(it == objects_by_type.end() ? &empty_pool : &it->second);
        }
        vector<size_t> idx(schema.params.size(), 0);
        while (true) {
            for (size_t i = 0; i < schema.params.size(); ++i) {
                if (pools[i]->empty())
                    return; // no objects of this type: no instances
                binding[schema.params[i].name] = (*pools[i])[idx[i]];
            }
            emit_instance(schema, binding);
            // next tuple
            size_t i = 0;
            for (; i < idx.size(); ++i) {
                if (++idx[i] < pools[i]->size())
                    break;
                idx[i] = 0;
            }
            if (idx.empty() || i == idx.size())
                break;
        }
    }

    void emit_instance(const ActionSchema &schema, const map<string, string> &binding) {
        GroundAction a;
        a.name = schema.name;
        for (const auto &p : schema.params)
            a.args.push_back(binding.at(p.name));
        a.duration = ground_expr(schema.duration, binding);
        if (a.duration->is_constant()) {
            a.duration_const = a.duration->constant_value();
            if (a.duration_const <= 0.0)
                fail("action " + a.signature() + " has non-positive duration",
                     schema.line);
        }
        for (const auto &c : schema.conditions) {
            if (c.is_resource) {
                ResourceCondition rc;
                rc.res = intern_res(c.atom, binding);
                rc.cmp = c.cmp;
                rc.rhs = ground_expr(c.rhs, binding);
                rc.when = c.when;
                rc.over_d = c.over_d;
                a.res_conditions.push_back(std::move(rc));
            } else {
                Condition lc;
                lc.pred = intern_pred(c.atom, binding);
                lc.when = c.when;
                lc.over_d = c.over_d;
                a.conditions.push_back(lc);
            }
        }
        if (schema.cost_given) {
            ExprPtr cost = ground_expr(schema.cost, binding);
            if (!cost->is_constant())
                fail(":cost must be constant", schema.line);
            a.exec_cost = cost->constant_value();
            if (a.exec_cost < 0)
                fail(":cost must be nonnegative", schema.line);
        }
        for (const auto &e : schema.effects) {
            if (e.is_update) {
                ResourceUpdate u;
                u.res = intern_res(e.atom, binding);
                u.op = e.op;
                u.rhs = ground_expr(e.rhs, binding);
                u.when = e.when;
                u.at_offset = e.at_offset;
                a.updates.push_back(std::move(u));
            } else {
                Effect le;
                le.pred = intern_pred(e.atom, binding);
                le.add = e.add;
                le.when = e.when;
                le.at_offset = e.at_offset;
                a.effects.push_back(le);
            }
        }
        // Constant-duration offsets must not exceed the duration.
        if (a.duration_const >= 0.0) {
            for (const auto &e : a.effects)
                if (e.when == EffTime::AtOffset && e.at_offset > a.duration_const)
                    fail("effect offset exceeds duration in " + a.signature(),
                         schema.line);
            for (const auto &u : a.updates)
                if (u.when == EffTime::AtOffset && u.at_offset > a.duration_const)
                    fail("update offset exceeds duration in " + a.signature(),
                         schema.line);
            for (const auto &c : a.conditions)
                if (c.when == CondTime::OverFor && c.over_d > a.duration_const)
                    fail("condition window exceeds duration in " + a.signature(),
                         schema.line);
        }
        problem.actions.push_back(std::move(a));
    }
};

void collect_metric_terms(const SchemaExpr &e, double multiplier, Grounder &g,
                          double &time_weight,
                          map<ResId, double> &res_weights) {
    switch (e.kind) {
    case SchemaExpr::Kind::Constant:
        if (e.value != 0.0 && multiplier != 0.0)
            fail("metric constant offset is not supported", e.line);
        return;
    case SchemaExpr::Kind::TotalTime:
        time_weight += multiplier;
        return;
    case SchemaExpr::Kind::Func: {
        static const map<string, string> no_binding;
        ResId id = g.intern_res(e.func, no_binding);
        res_weights[id] += multiplier;
        return;
    }
    case SchemaExpr::Kind::Op:
        break;
    }
    auto constant_of = [](const SchemaExpr &x, double &out) {
        if (x.kind != SchemaExpr::Kind::Constant)
            return false;
        out = x.value;
        return true;
    };
    switch (e.op) {
    case Expr::Kind::Add:
        for (const auto &a : e.args)
            collect_metric_terms(a, multiplier, g, time_weight, res_weights);
        return;
    case Expr::Kind::Sub:
        collect_metric_terms(e.args[0], multiplier, g, time_weight, res_weights);
        for (size_t i = 1; i < e.args.size(); ++i)
            collect_metric_terms(e.args[i], -multiplier, g, time_weight, res_weights);
        return;
    case Expr::Kind::Mul: {
        if (e.args.size() != 2)
            fail("metric products must be binary", e.line);
        double c;
        if (constant_of(e.args[0], c))
            collect_metric_terms(e.args[1], multiplier * c, g, time_weight, res_weights);
        else if (constant_of(e.args[1], c))
            collect_metric_terms(e.args[0], multiplier * c, g, time_weight, res_weights);
        else
            fail("metric must be linear", e.line);
        return;
    }
    case Expr::Kind::Div: {
        if (e.args.size() != 2)
            fail("metric divisions must be binary", e.line);
        double c;
        if (!constant_of(e.args[1], c) || c == 0.0)
            fail("metric must be linear", e.line);
        collect_metric_terms(e.args[0], multiplier / c, g, time_weight, res_weights);
        return;
    }
    default:
        fail("metric must be linear", e.line);
    }
}

void parse_problem_body(const Sexp &top, const Domain &domain, Grounder &g) {
    Problem &p = g.problem;
    if (top.size() < 2 || !top[1].is_list() || top[1].head() != "problem" ||
        top[1].size() != 2)
        fail("expected (define (problem NAME) ...)", top.line);
    p.problem_name = top[1][1].text;

    // objects must be known before grounding; collect them first
    for (size_t i = 2; i < top.size(); ++i) {
        const Sexp &s = top[i];
        if (s.head() == ":objects")
            for (auto &tn : parse_typed_list(s, 1, s.size()))
                g.add_object(tn.name, tn.type, s.line);
    }
    for (const auto &c : domain.constants)
        g.add_object(c.name, c.type, 0);

    for (const auto &schema : domain.schemas)
        g.ground_schema(schema);

    static const map<string, string> no_binding;
    for (size_t i = 2; i < top.size(); ++i) {
        const Sexp &s = top[i];
        const string &head = s.head();
        if (head == ":objects") {
            continue; // handled above
        } else if (head == ":domain") {
            if (s.size() != 2 || s[1].text != domain.name)
                fail("problem references a different domain", s.line);
        } else if (head == ":init") {
            for (size_t j = 1; j < s.size(); ++j) {
                const Sexp &el = s[j];
                if (!el.is_list() || el.size() == 0)
                    fail("bad init element", el.line);
                double when;
                if (el.head() == "=") {
                    if (el.size() != 3 || !el[1].is_list() || !el[2].atom)
                        fail("init assignment needs (= (func term*) number)", el.line);
                    double value;
                    if (!parse_number(el[2].text, value))
                        fail("init assignment value must be a number", el.line);
                    ResId id = g.intern_res(parse_atom_ref(el[1]), no_binding);
                    if (p.init_resources.size() < p.res_names.size())
                        p.init_resources.resize(p.res_names.size(), 0.0);
                    p.init_resources[id] = value;
                } else if (el.head() == "at" && el.size() == 3 && el[1].atom &&
                           parse_number(el[1].text, when)) {
                    if (when <= 0.0)
                        fail("timed initial literals need time > 0", el.line);
                    const Sexp &lit = el[2];
                    InitEvent ev;
                    ev.time = when;
                    if (lit.is_list() && lit.head() == "not") {
                        if (lit.size() != 2)
                            fail("(not ...) takes one literal", lit.line);
                        ev.add = false;
                        ev.pred = g.intern_pred(parse_atom_ref(lit[1]), no_binding);
                    } else {
                        ev.add = true;
                        ev.pred = g.intern_pred(parse_atom_ref(lit), no_binding);
                    }
                    p.init_events.push_back(ev);
                } else {
                    p.init_facts.push_back(g.intern_pred(parse_atom_ref(el), no_binding));
                }
            }
        } else if (head == ":goal") {
            if (s.size() != 2)
                fail(":goal takes one condition", s.line);
            const Sexp &body = s[1];
            auto add_goal = [&](const Sexp &lit) {
                Goal goal;
                goal.pred = g.intern_pred(parse_atom_ref(lit), no_binding);
                p.goals.push_back(goal);
            };
            if (body.is_list() && body.head() == "and")
                for (size_t j = 1; j < body.size(); ++j)
                    add_goal(body[j]);
            else
                add_goal(body);
        } else if (head == ":deadline") {
            if (s.size() != 3 || !s[1].atom)
                fail(":deadline needs (:deadline <number> (pred term*))", s.line);
            double t;
            if (!parse_number(s[1].text, t))
                fail("deadline must be a number", s.line);
            PredId pred = g.intern_pred(parse_atom_ref(s[2]), no_binding);
            bool found = false;
            for (auto &goal : p.goals) {
                if (goal.pred == pred) {
                    goal.deadline = min(goal.deadline, t);
                    found = true;
                }
            }
            if (!found)
                p.goals.push_back({pred, t});
        } else if (head == ":metric") {
            if (s.size() != 3 || !s[1].atom || s[1].text != "minimize")
                fail(":metric needs (minimize <expr>)", s.line);
            SchemaExpr e = parse_expr(s[2], true);
            map<ResId, double> weights;
            double tw = 0.0;
            collect_metric_terms(e, 1.0, g, tw, weights);
            p.has_metric = true;
            p.metric_time_weight = tw;
            for (auto &[id, w] : weights)
                if (w != 0.0)
                    p.metric_res_weights.emplace_back(id, w);
        } else {
            fail("unknown problem element '" + head + "'", s.line);
        }
    }
    if (p.init_resources.size() < p.res_names.size())
        p.init_resources.resize(p.res_names.size(), 0.0);
}

Sexp read_single(const string &text, const char *what) {
    Reader reader(text);
    vector<Sexp> all = reader.read_all();
    if (all.size() != 1 || all[0].head() != "define")
        throw ParseError(string("expected a single (define ...) form in ") + what, 1);
    return std::move(all[0]);
}

} // namespace

Problem load_problem_text(const string &domain_text, const string &problem_text) {
    Sexp dom_sexp = read_single(domain_text, "domain");
    Sexp prob_sexp = read_single(problem_text, "problem");
    Domain domain = parse_domain(dom_sexp);
    Problem problem;
    problem.domain_name = domain.name;
    Grounder grounder(domain, problem);
    parse_problem_body(prob_sexp, domain, grounder);
    finalize_problem(problem);
    decompile_metric(problem);
    return problem;
}

static string slurp(const string &path) {
    ifstream in(path, ios::binary);
    if (!in)
        throw runtime_error("cannot read file: " + path);
    ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Problem load_problem_files(const string &domain_path, const string &problem_path) {
    return load_problem_text(slurp(domain_path), slurp(problem_path));
}

} // namespace mtplan
