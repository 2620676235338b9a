#include "ricb/catalog.hpp"

#include <fstream>
#include <sstream>
#include <string_view>

#include <json.hpp>

namespace ricb {

extern const std::string_view kEmbeddedCatalog;

namespace {

using nlohmann::json;

Expr expr_field(const json& j, const char* key)
{
    if (!j.contains(key)) throw CatalogError(std::string("missing field ") + key);
    return Expr::parse(j.at(key).get<std::string>());
}

std::optional<Expr> optional_expr(const json& j, const char* key)
{
    if (!j.contains(key)) return std::nullopt;
    return Expr::parse(j.at(key).get<std::string>());
}

std::vector<Piece> pieces(const json& j)
{
    std::vector<Piece> out;
    for (const auto& p : j) out.push_back({optional_expr(p, "when"), expr_field(p, "value")});
    return out;
}

std::vector<Param> params(const json& j, const char* key = "params")
{
    std::vector<Param> out;
    if (!j.contains(key)) return out;
    for (const auto& p : j.at(key))
        out.push_back({p.at("var").get<std::string>(), expr_field(p, "min"), optional_expr(p, "max")});
    return out;
}

std::vector<std::string> strings(const json& j, const char* key)
{
    if (!j.contains(key)) return {};
    return j.at(key).get<std::vector<std::string>>();
}

std::vector<NamedSpace> named(const json& j, const char* key)
{
    std::vector<NamedSpace> out;
    if (!j.contains(key)) return out;
    for (const auto& e : j.at(key)) out.push_back({e.at("name").get<std::string>(), e.at("space").get<std::string>()});
    return out;
}

std::vector<std::string> split_top_level(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ')
            cur += c;
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Catalog Catalog::from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw CatalogError(std::string("catalog is not valid JSON: ") + e.what());
    }
    if (j.value("schema", "") != "ricb.catalog") throw CatalogError("unknown catalog schema");
    Catalog c;
    try {
        c.version = j.at("version").get<int>();
        for (const auto& r : j.at("irreducible")) {
            IrreducibleRow row;
            row.id = r.at("id").get<std::string>();
            auto fam = parse_family(r.at("family").get<std::string>());
            if (!fam) throw CatalogError("row " + row.id + ": unknown family");
            row.family = *fam;
            row.rank = expr_field(r, "rank");
            row.mults = r.at("mults").get<std::string>();
            row.name = r.at("name").get<std::string>();
            row.params = params(r);
            row.dim = expr_field(r, "dim");
            row.b = pieces(r.at("b"));
            row.kmax = pieces(r.at("kmax"));
            row.factor_dim = optional_expr(r, "factor_dim");
            row.factor_dim_when = optional_expr(r, "factor_dim_when");
            for (const auto& s : strings(r, "factor_dims")) row.factor_dims.push_back(Expr::parse(s));
            c.irreducible.push_back(std::move(row));
        }
        for (const auto& r : j.at("low_b"))
            c.low_b.push_back({r.at("name").get<std::string>(), r.at("space").get<std::string>(),
                               r.at("dim").get<int>(), r.at("b").get<int>()});
        for (const auto& r : j.at("rank_two")) {
            RankTwoRow row;
            row.g = r.at("g").get<int>();
            for (const auto& s : strings(r, "mults")) row.mults.push_back(Expr::parse(s));
            row.name = r.at("name").get<std::string>();
            for (const auto& p : r.at("space"))
                row.space.push_back({optional_expr(p, "when"), p.at("value").get<std::string>()});
            row.params = params(r);
            row.dim = expr_field(r, "dim");
            row.b = expr_field(r, "b");
            c.rank_two.push_back(std::move(row));
        }
        for (const auto& r : j.at("main"))
            c.main.push_back({r.at("id").get<std::string>(), expr_field(r, "d"), r.at("T").get<std::string>(),
                              expr_field(r, "k"), expr_field(r, "k3"), r.at("spaces").get<std::string>(),
                              strings(r, "factors")});
        for (const auto& r : j.at("fat_bundles")) {
            FatBundleRow row;
            row.set = r.at("set").get<int>();
            row.triple = r.at("triple").get<std::string>();
            row.total = r.at("total").get<std::string>();
            row.dim = expr_field(r, "dim");
            row.base = r.at("base").get<std::string>();
            row.params = params(r);
            row.k = pieces(r.at("k"));
            row.sphere_bundle = r.value("sphere_bundle", false);
            c.fat_bundles.push_back(std::move(row));
        }
        const auto& o = j.at("observations");
        c.observations = {named(o, "minimal_b"),
                          named(o, "not_dim_minus_3"),
                          named(o, "half_dim_rank2_exceptions"),
                          named(o, "half_dim_higher_rank"),
                          named(o, "third_dim_rank1_exceptions"),
                          named(o, "third_dim_higher_rank")};
    } catch (const json::exception& e) {
        throw CatalogError(std::string("malformed catalog: ") + e.what());
    } catch (const ExprError& e) {
        throw CatalogError(std::string("malformed catalog expression: ") + e.what());
    }
    return c;
}

Catalog Catalog::load_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw CatalogError("cannot open catalog " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

const Catalog& Catalog::embedded()
{
    static const Catalog c = from_json(std::string(kEmbeddedCatalog));
    return c;
}

long long eval_pieces(const std::vector<Piece>& pieces, const Env& env)
{
    for (const auto& p : pieces)
        if (!p.when || p.when->eval_bool(env)) return p.value.eval_int(env);
    throw CatalogError("no piece applies");
}

std::string eval_template_pieces(const std::vector<PiecewiseTemplate>& pieces, const Env& env)
{
    for (const auto& p : pieces)
        if (!p.when || p.when->eval_bool(env)) return expand_template(p.value, env);
    throw CatalogError("no piece applies");
}

std::vector<Env> enumerate_params(const std::vector<Param>& params, long long bound, const Env& base)
{
    std::vector<Env> out;
    Env env = base;
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == params.size()) {
            out.push_back(env);
            return;
        }
        const auto& p = params[i];
        long long lo = p.min.eval_int(env);
        long long hi = p.max ? p.max->eval_int(env) : bound;
        for (long long v = lo; v <= hi; ++v) {
            env[p.var] = v;
            self(self, i + 1);
        }
        env.erase(p.var);
    };
    rec(rec, 0);
    return out;
}

RootDatum datum_from_pattern(Family family, int rank, const std::string& pattern, const Env& env)
{
    auto tokens = split_top_level(pattern);
    std::optional<int> divisible;
    std::string& last = tokens.back();
    if (!last.empty() && last.back() == ']') {
        auto open = last.find('[');
        divisible = static_cast<int>(Expr::parse(last.substr(open + 1, last.size() - open - 2)).eval_int(env));
        last = last.substr(0, open);
    }
    // "a,...,a" collapses into one run filling the remaining nodes.
    int run_at = -1;
    std::vector<std::string> parts;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] == "...") {
            if (run_at >= 0 || parts.empty() || i + 1 >= tokens.size() || tokens[i + 1] != parts.back())
                throw CatalogError("bad multiplicity pattern " + pattern);
            run_at = static_cast<int>(parts.size()) - 1;
            ++i;
            continue;
        }
        parts.push_back(tokens[i]);
    }
    std::vector<int> nodes;
    int fixed = static_cast<int>(parts.size()) - (run_at >= 0 ? 1 : 0);
    for (int i = 0; i < static_cast<int>(parts.size()); ++i) {
        int value = static_cast<int>(Expr::parse(parts[i]).eval_int(env));
        int count = i == run_at ? rank - fixed : 1;
        if (count < 0) throw CatalogError("pattern " + pattern + " longer than rank");
        nodes.insert(nodes.end(), count, value);
    }
    return build_from_nodes(family, rank, nodes, divisible);
}

}  // namespace ricb
