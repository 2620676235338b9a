#include "ricb/spacespec.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace ricb {

namespace {

std::string trim(const std::string& s)
{
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Splits on commas outside any bracket or parenthesis.
std::vector<std::string> split_args(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') {
            if (--depth < 0) throw SpaceSpecError("unbalanced brackets in \"" + s + "\"");
        }
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else
            cur += c;
    }
    if (depth != 0) throw SpaceSpecError("unbalanced brackets in \"" + s + "\"");
    out.push_back(trim(cur));
    return out;
}

int parse_mult(const std::string& s)
{
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw SpaceSpecError("multiplicity \"" + s + "\" is not a non-negative integer");
    return std::stoi(s);
}

SpaceSpec parse_datum(const std::smatch& m, const std::string& text)
{
    std::string letters = m[1];
    int rank = std::stoi(m[2]);
    std::optional<Family> fam;
    if (letters == "E" || letters == "F" || letters == "G")
        fam = parse_family(letters + std::string(m[2]));
    else
        fam = parse_family(letters);
    if (!fam) throw SpaceSpecError("unknown family in \"" + text + "\"");
    if (!rank_valid(*fam, rank)) throw SpaceSpecError("rank " + std::to_string(rank) + " invalid in \"" + text + "\"");

    auto parts = split_args(m[3]);
    std::optional<int> divisible;
    std::string& last = parts.back();
    if (!last.empty() && last.back() == ']') {
        auto open = last.find('[');
        if (open == std::string::npos) throw SpaceSpecError("bad divisible multiplicity in \"" + text + "\"");
        divisible = parse_mult(trim(last.substr(open + 1, last.size() - open - 2)));
        last = trim(last.substr(0, open));
    }
    std::vector<int> nodes;
    for (const auto& p : parts) nodes.push_back(parse_mult(p));
    if (static_cast<int>(nodes.size()) != rank)
        throw SpaceSpecError("expected " + std::to_string(rank) + " multiplicities in \"" + text + "\"");
    if ((*fam == Family::BC) != divisible.has_value())
        throw SpaceSpecError("divisible multiplicity [c] is required for BC and only for BC: \"" + text + "\"");
    return datum_space(*fam, rank, std::move(nodes), divisible);
}

}  // namespace

SpaceSpec datum_space(Family family, int rank, std::vector<int> nodes, std::optional<int> divisible)
{
    SpaceSpec s;
    s.kind = SpaceSpec::Kind::datum;
    s.family = family;
    s.rank = rank;
    s.nodes = std::move(nodes);
    s.divisible = divisible;
    return s;
}

SpaceSpec alias_space(std::string name)
{
    SpaceSpec s;
    s.kind = SpaceSpec::Kind::alias;
    s.alias = std::move(name);
    return s;
}

SpaceSpec product_space(std::vector<SpaceSpec> factors)
{
    SpaceSpec s;
    s.kind = SpaceSpec::Kind::product;
    s.factors = std::move(factors);
    return s;
}

SpaceSpec parse_space(const std::string& input)
{
    std::string text = trim(input);
    if (text.empty()) throw SpaceSpecError("empty space spec");

    static const std::regex product_re(R"(^product\s*\((.*)\)$)");
    static const std::regex datum_re(R"(^(BC|A|B|C|D|E|F|G)\s*(\d+)\s*\[(.*)\]$)");
    std::smatch m;
    if (std::regex_match(text, m, product_re)) {
        std::vector<SpaceSpec> factors;
        for (const auto& part : split_args(m[1])) factors.push_back(parse_space(part));
        return product_space(std::move(factors));
    }
    if (std::regex_match(text, m, datum_re)) return parse_datum(m, text);

    int depth = 0;
    for (char c : text) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (depth < 0 || (c == ',' && depth == 0)) throw SpaceSpecError("malformed space spec \"" + text + "\"");
    }
    if (depth != 0) throw SpaceSpecError("unbalanced brackets in \"" + text + "\"");
    return alias_space(text);
}

std::string print_space(const SpaceSpec& spec)
{
    switch (spec.kind) {
    case SpaceSpec::Kind::datum: {
        std::string out = family_name(spec.family);
        if (fixed_rank(spec.family) == 0) out += std::to_string(spec.rank);
        out += '[';
        for (size_t i = 0; i < spec.nodes.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(spec.nodes[i]);
        }
        if (spec.divisible) out += '[' + std::to_string(*spec.divisible) + ']';
        return out + ']';
    }
    case SpaceSpec::Kind::alias: return spec.alias;
    case SpaceSpec::Kind::product: {
        std::string out = "product(";
        for (size_t i = 0; i < spec.factors.size(); ++i) {
            if (i) out += ", ";
            out += print_space(spec.factors[i]);
        }
        return out + ')';
    }
    }
    return {};
}

}  // namespace ricb
