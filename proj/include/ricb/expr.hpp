#pragma once

#include <boost/rational.hpp>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace ricb {

using Rational = boost::rational<long long>;

class ExprError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Exact rational expressions over named integer variables, used for the catalog's closed forms.
// Grammar: + - * / ^, parentheses, integer literals, identifiers, max(...), min(...),
// comparisons (== != < <= > >=) and && / || yielding 0 or 1.
class Expr {
public:
    Expr() = default;
    static Expr parse(const std::string& text);

    Rational eval(const std::map<std::string, long long>& env) const;
    // Evaluates and requires an integral result.
    long long eval_int(const std::map<std::string, long long>& env) const;
    bool eval_bool(const std::map<std::string, long long>& env) const { return eval(env).numerator() != 0; }

    const std::string& text() const { return text_; }
    bool empty() const { return !root_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

// Substitutes every {expression} in `tmpl` by its integer value, e.g. "SO({2*r+1})".
std::string expand_template(const std::string& tmpl, const std::map<std::string, long long>& env);

}  // namespace ricb
