#include "ricb/expr.hpp"

#include <cctype>
#include <vector>

namespace ricb {

struct Expr::Node {
    enum class Kind { number, variable, unary_minus, binary, call } kind;
    long long value = 0;
    std::string name;  // variable, operator or function
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse_all()
    {
        auto n = parse_or();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ExprError("expression \"" + s_ + "\": " + what + " at offset " + std::to_string(pos_));
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(const std::string& tok)
    {
        skip();
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    static NodePtr binary(const std::string& op, NodePtr a, NodePtr b)
    {
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Node::Kind::binary;
        n->name = op;
        n->args = {std::move(a), std::move(b)};
        return n;
    }

    NodePtr parse_or()
    {
        auto n = parse_and();
        while (accept("||")) n = binary("||", n, parse_and());
        return n;
    }

    NodePtr parse_and()
    {
        auto n = parse_cmp();
        while (accept("&&")) n = binary("&&", n, parse_cmp());
        return n;
    }

    NodePtr parse_cmp()
    {
        auto n = parse_sum();
        for (const char* op : {"==", "!=", "<=", ">=", "<", ">"})
            if (accept(op)) return binary(op, n, parse_sum());
        return n;
    }

    NodePtr parse_sum()
    {
        auto n = parse_product();
        while (true) {
            if (accept("+")) n = binary("+", n, parse_product());
            else if (accept("-")) n = binary("-", n, parse_product());
            else return n;
        }
    }

    NodePtr parse_product()
    {
        auto n = parse_unary();
        while (true) {
            if (accept("*")) n = binary("*", n, parse_unary());
            else if (accept("/")) n = binary("/", n, parse_unary());
            else return n;
        }
    }

    NodePtr parse_unary()
    {
        if (accept("-")) {
            auto n = std::make_shared<Expr::Node>();
            n->kind = Expr::Node::Kind::unary_minus;
            n->args = {parse_unary()};
            return n;
        }
        return parse_power();
    }

    NodePtr parse_power()
    {
        auto base = parse_atom();
        if (accept("^")) return binary("^", base, parse_unary());
        return base;
    }

    NodePtr parse_atom()
    {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (accept("(")) {
            auto n = parse_or();
            if (!accept(")")) fail("expected ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            auto n = std::make_shared<Expr::Node>();
            n->kind = Expr::Node::Kind::number;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                n->value = n->value * 10 + (s_[pos_++] - '0');
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                id += s_[pos_++];
            auto n = std::make_shared<Expr::Node>();
            if (accept("(")) {
                if (id != "max" && id != "min") fail("unknown function " + id);
                n->kind = Expr::Node::Kind::call;
                n->name = id;
                do n->args.push_back(parse_or());
                while (accept(","));
                if (!accept(")")) fail("expected ')'");
                return n;
            }
            n->kind = Expr::Node::Kind::variable;
            n->name = id;
            return n;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

Rational eval_node(const Expr::Node& n, const std::map<std::string, long long>& env)
{
    using K = Expr::Node::Kind;
    switch (n.kind) {
    case K::number: return Rational(n.value);
    case K::variable: {
        auto it = env.find(n.name);
        if (it == env.end()) throw ExprError("unbound variable " + n.name);
        return Rational(it->second);
    }
    case K::unary_minus: return -eval_node(*n.args[0], env);
    case K::call: {
        Rational best = eval_node(*n.args[0], env);
        for (size_t i = 1; i < n.args.size(); ++i) {
            Rational v = eval_node(*n.args[i], env);
            if (n.name == "max" ? v > best : v < best) best = v;
        }
        return best;
    }
    case K::binary: break;
    }
    Rational a = eval_node(*n.args[0], env);
    Rational b = eval_node(*n.args[1], env);
    const std::string& op = n.name;
    if (op == "+") return a + b;
    if (op == "-") return a - b;
    if (op == "*") return a * b;
    if (op == "/") {
        if (b.numerator() == 0) throw ExprError("division by zero");
        return a / b;
    }
    if (op == "^") {
        if (b.denominator() != 1 || b.numerator() < 0) throw ExprError("exponent must be a non-negative integer");
        Rational r(1);
        for (long long i = 0; i < b.numerator(); ++i) r *= a;
        return r;
    }
    if (op == "==") return a == b;
    if (op == "!=") return a != b;
    if (op == "<") return a < b;
    if (op == "<=") return a <= b;
    if (op == ">") return a > b;
    if (op == ">=") return a >= b;
    if (op == "&&") return a.numerator() != 0 && b.numerator() != 0;
    if (op == "||") return a.numerator() != 0 || b.numerator() != 0;
    throw ExprError("unknown operator " + op);
}

}  // namespace

Expr Expr::parse(const std::string& text)
{
    Expr e;
    e.text_ = text;
    Parser p(text);
    e.root_ = p.parse_all();
    return e;
}

Rational Expr::eval(const std::map<std::string, long long>& env) const
{
    if (!root_) throw ExprError("empty expression");
    return eval_node(*root_, env);
}

long long Expr::eval_int(const std::map<std::string, long long>& env) const
{
    Rational v = eval(env);
    if (v.denominator() != 1) throw ExprError("expression \"" + text_ + "\" is not integral here");
    return v.numerator();
}

std::string expand_template(const std::string& tmpl, const std::map<std::string, long long>& env)
{
    std::string out;
    size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] != '{') {
            out += tmpl[i++];
            continue;
        }
        size_t depth = 1, j = i + 1;
        while (j < tmpl.size() && depth) {
            if (tmpl[j] == '{') ++depth;
            if (tmpl[j] == '}') --depth;
            ++j;
        }
        if (depth) throw ExprError("unbalanced braces in \"" + tmpl + "\"");
        out += std::to_string(Expr::parse(tmpl.substr(i + 1, j - i - 2)).eval_int(env));
        i = j;
    }
    return out;
}

}  // namespace ricb
