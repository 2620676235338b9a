#include "ricb/symcat.hpp"

#include <algorithm>
#include <mutex>
#include <tuple>
#include <cctype>
#include <numeric>
#include <regex>
#include <set>

namespace ricb {

namespace {

std::string normalize_name(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '{' || c == '}') continue;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::string strip_parens(const std::string& s)
{
    std::string out;
    for (char c : s)
        if (c != '(' && c != ')') out += c;
    return out;
}

Factor symmetric_factor(const RootDatum& datum, std::string name)
{
    Factor f;
    f.symmetric = describe(datum, name);
    f.name = f.symmetric->name;
    f.dim = f.symmetric->dim;
    f.b_lo = f.b_hi = b_of_space(*f.symmetric);
    return f;
}

ProductSpace single(Factor f)
{
    return ProductSpace{{std::move(f)}};
}

ProductSpace from_datum(Family family, int rank, std::vector<int> nodes, std::optional<int> divisible,
                        const std::string& name)
{
    return single(symmetric_factor(build_from_nodes(family, rank, nodes, divisible), name));
}

ProductSpace sphere(int n, const std::string& name)
{
    if (n < 2) throw SpaceSpecError("sphere S^" + std::to_string(n) + " is not a symmetric space of compact type");
    return from_datum(Family::A, 1, {n - 1}, {}, name);
}

ProductSpace join(ProductSpace a, const ProductSpace& b)
{
    a.factors.insert(a.factors.end(), b.factors.begin(), b.factors.end());
    return a;
}

// Grassmannian of p-planes in F^N, F of real dimension d in {1,2,4}; oriented when d = 1.
ProductSpace grassmannian(int d, int p, int N, const std::string& name)
{
    int q = N - p;
    if (p > q) std::swap(p, q);
    if (p < 1) throw SpaceSpecError("Grassmannian " + name + " needs 1 <= p < N");
    if (d == 1) {
        if (p == 1) return sphere(N - 1, name);
        if (p == q && p == 2) return join(sphere(2, "S^2"), sphere(2, "S^2"));
        if (p == q) return from_datum(Family::D, p, std::vector<int>(p, 1), {}, name);
        std::vector<int> nodes(p, 1);
        nodes.back() = q - p;
        return from_datum(Family::B, p, nodes, {}, name);
    }
    int medium = d;
    int divisible = d - 1;
    if (p == q) {
        if (p == 1) return from_datum(Family::A, 1, {divisible}, {}, name);
        std::vector<int> nodes(p, medium);
        nodes.back() = divisible;
        return from_datum(Family::C, p, nodes, {}, name);
    }
    std::vector<int> nodes(p, medium);
    nodes.back() = d * (q - p);
    return from_datum(Family::BC, p, nodes, divisible, name);
}

ProductSpace compact_group(const std::string& kind, int n, const std::string& name)
{
    auto group = [&](Family f, int r) { return from_datum(f, r, std::vector<int>(r, 2), {}, name); };
    if (kind == "su") {
        if (n < 2) throw SpaceSpecError("SU(n) needs n >= 2");
        return group(Family::A, n - 1);
    }
    if (kind == "sp") {
        if (n < 1) throw SpaceSpecError("Sp(n) needs n >= 1");
        return n == 1 ? group(Family::A, 1) : group(Family::C, n);
    }
    // so / spin
    if (n < 3) throw SpaceSpecError("SO(n) needs n >= 3");
    if (n == 3) return group(Family::A, 1);
    if (n == 4) return join(sphere(3, "S^3"), sphere(3, "S^3"));
    if (n % 2 == 1) return group(Family::B, (n - 1) / 2);
    return group(Family::D, n / 2);
}

int gcd_ll(long long a, long long b)
{
    return static_cast<int>(std::gcd(a < 0 ? -a : a, b < 0 ? -b : b));
}

// Lower bound from the symmetric base, upper bound from the group inequality.
ProductSpace aloff_wallach(int d, long long p, long long q, const std::string& name)
{
    if (d < 7 || (d + 1) % 4 != 0) throw SpaceSpecError("W(d;p,q) needs d = 4n-1 with n >= 2");
    if (gcd_ll(p, q) != 1) throw SpaceSpecError("W(d;p,q) needs gcd(p,q) = 1");
    int n = (d + 1) / 4;
    auto base = grassmannian(2, 2, n + 1, "Gr_2(C^" + std::to_string(n + 1) + ")");
    auto group = compact_group("su", n + 1, "SU(" + std::to_string(n + 1) + ")");
    int dim_group = group.dim();
    int dim_isotropy = dim_group - d;
    int b_group = b_of_product(group).lo;
    Factor f;
    f.name = name;
    f.dim = d;
    f.b_lo = b_of_product(base).lo;
    f.b_hi = std::min(d, (b_group + d - dim_isotropy) / 2);
    f.note = "bounds-only";
    return single(f);
}

ProductSpace witte(int p, int q, long long k, long long l, const std::string& name)
{
    auto w = witte_b(p, q, k, l);
    Factor f;
    f.name = name;
    f.dim = 2 * p + 2 * q + 1;
    f.b_lo = w.exact ? *w.exact : w.lower;
    f.b_hi = w.exact ? *w.exact : w.upper;
    f.note = w.exact ? "exact via gap theorem" : "bounds-only";
    return single(f);
}

RootDatum row_datum(const IrreducibleRow& row, const Env& env)
{
    int rank = static_cast<int>(row.rank.eval_int(env));
    return datum_from_pattern(row.family, rank, row.mults, env);
}

ProductSpace resolve_alias(const std::string& text, const Catalog& catalog)
{
    const std::string s = normalize_name(text);
    std::smatch m;
    auto num = [&](int i) { return std::stoi(m[i].str()); };
    auto lnum = [&](int i) { return std::stoll(m[i].str()); };
    auto match = [&](const char* re) { return std::regex_match(s, m, std::regex(re)); };

    if (match(R"(s\^(\d+))")) return sphere(num(1), text);
    if (match(R"(cp\^(\d+))")) return grassmannian(2, 1, num(1) + 1, text);
    if (match(R"(hp\^(\d+))")) return grassmannian(4, 1, num(1) + 1, text);
    if (match(R"(op\^?2)")) return from_datum(Family::BC, 1, {8}, 7, text);
    if (match(R"(gr\+\((\d+),(\d+)\))") || match(R"(gr\+_(\d+)\(r\^(\d+)\))")) return grassmannian(1, num(1), num(2), text);
    if (match(R"(grc\((\d+),(\d+)\))") || match(R"(gr_(\d+)\(c\^(\d+)\))")) return grassmannian(2, num(1), num(2), text);
    if (match(R"(grh\((\d+),(\d+)\))") || match(R"(gr_(\d+)\(h\^(\d+)\))")) return grassmannian(4, num(1), num(2), text);
    if (match(R"(w\((\d+);(-?\d+),(-?\d+)\))")) return aloff_wallach(num(1), lnum(2), lnum(3), text);
    if (match(R"(m\((\d+),(\d+);(-?\d+),(-?\d+)\))")) return witte(num(1), num(2), lnum(3), lnum(4), text);

    const std::string flat = strip_parens(s);
    if (std::regex_match(flat, m, std::regex(R"(su(\d+)/so(\d+))")) && num(1) == num(2)) {
        int n = num(1);
        if (n < 2) throw SpaceSpecError(text + " is a point");
        return from_datum(Family::A, n - 1, std::vector<int>(n - 1, 1), {}, text);
    }
    if (std::regex_match(flat, m, std::regex(R"(su(\d+)/sp(\d+))")) && num(1) == 2 * num(2)) {
        int n = num(2);
        if (n < 2) throw SpaceSpecError(text + " is a point");
        return from_datum(Family::A, n - 1, std::vector<int>(n - 1, 4), {}, text);
    }
    if (std::regex_match(flat, m, std::regex(R"(sp(\d+)/u(\d+))")) && num(1) == num(2)) {
        int n = num(1);
        if (n == 1) return sphere(2, text);
        return from_datum(Family::C, n, std::vector<int>(n, 1), {}, text);
    }
    if (std::regex_match(flat, m, std::regex(R"(so(\d+)/u(\d+))")) && num(1) == 2 * num(2)) {
        int n = num(2);
        if (n < 2) throw SpaceSpecError(text + " is a point");
        if (n == 2) return sphere(2, text);
        int r = n / 2;
        if (n % 2 == 0) {
            std::vector<int> nodes(r, 4);
            nodes.back() = 1;
            return from_datum(Family::C, r, nodes, {}, text);
        }
        return from_datum(Family::BC, r, std::vector<int>(r, 4), 1, text);
    }
    if (std::regex_match(flat, m, std::regex(R"((su|sp|so|spin)(\d+))")))
        return compact_group(m[1] == "spin" ? "so" : m[1].str(), num(2), text);

    for (const auto& row : catalog.irreducible) {
        if (!row.params.empty()) continue;
        if (strip_parens(normalize_name(row.name)) == flat) return single(symmetric_factor(row_datum(row, {}), row.name));
    }
    throw SpaceSpecError("unknown space name \"" + text + "\"");
}

// Combined multiplicities m_lambda + m_{2 lambda}, one per orbit of indivisible roots, sorted.
std::vector<int> reduced_multiplicities(const RootDatum& d)
{
    std::vector<int> out;
    for (Orbit o : d.orbits()) {
        if (d.family == Family::BC && o == Orbit::long_) continue;
        int m = d.mult.at(o);
        if (d.family == Family::BC && o == Orbit::short_) m += d.mult.at(Orbit::long_);
        out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int indivisible_roots(const RootDatum& d)
{
    return static_cast<int>(std::count_if(d.positive.begin(), d.positive.end(), [&](const Root& r) {
        return !(d.family == Family::BC && r.orbit == Orbit::long_);
    }));
}

std::string join_names(const std::vector<const SymmetricSpaceDescriptor*>& xs)
{
    std::string out;
    std::set<std::string> seen;
    for (const auto* x : xs) {
        std::string label = x->name + " [" + x->row_id + "]";
        if (!seen.insert(label).second) continue;
        if (!out.empty()) out += ", ";
        out += label;
    }
    return out;
}

std::string describe_entry(const SymmetricSpaceDescriptor& e, int b)
{
    return e.name + " [" + e.row_id + "] " + datum_spec(e.datum) + ": b=" + std::to_string(b) +
           ", dim=" + std::to_string(e.dim) + ", rank=" + std::to_string(e.rank);
}

std::string key_of(const std::string& spec)
{
    auto s = parse_space(spec);
    return canonical_key(build_from_nodes(s.family, s.rank, s.nodes, s.divisible));
}

std::set<std::string> keys_of(const std::vector<NamedSpace>& xs)
{
    std::set<std::string> out;
    for (const auto& x : xs) out.insert(key_of(x.space));
    return out;
}

// Reports reference members that no catalog row produces, naming rows that carry the same name.
void check_present(CheckResult& check, const SpaceCatalog& spaces, const std::vector<NamedSpace>& expected,
                   const std::string& role)
{
    for (const auto& e : expected) {
        if (!spaces.with_key(key_of(e.space)).empty()) continue;
        std::string why = e.name + " (" + e.space + ") expected " + role + " is not produced by the catalog";
        for (const auto& inst : spaces.instances()) {
            if (normalize_name(inst.name) == normalize_name(e.name))
                why += "; row " + inst.row_id + " yields " + datum_spec(inst.datum) + " with b=" +
                       std::to_string(b_of_space(inst));
        }
        check.fail(why);
    }
}

}  // namespace

int ProductSpace::dim() const
{
    int d = 0;
    for (const auto& f : factors) d += f.dim;
    return d;
}

int ProductSpace::rank() const
{
    int r = 0;
    for (const auto& f : factors) r += f.symmetric ? f.symmetric->rank : 0;
    return r;
}

SymmetricSpaceDescriptor describe(const RootDatum& datum, std::string name)
{
    SymmetricSpaceDescriptor s;
    s.name = name.empty() ? datum_spec(datum) : std::move(name);
    s.datum = datum;
    s.dim = dimension(datum);
    s.rank = datum.rank;
    return s;
}

int b_of_space(const SymmetricSpaceDescriptor& space)
{
    return b_value(space.datum).b;
}

BBounds b_of_product(const ProductSpace& product)
{
    if (product.factors.empty()) throw std::invalid_argument("b of an empty product");
    const int dim = product.dim();
    BBounds out{0, 0};
    for (const auto& f : product.factors) {
        out.lo = std::max(out.lo, f.b_lo + dim - f.dim);
        out.hi = std::max(out.hi, f.b_hi + dim - f.dim);
    }
    return out;
}

std::string canonical_key(const RootDatum& datum)
{
    auto nodes = datum.node_multiplicities();
    if (datum.family == Family::C && datum.rank == 2)
        return "B2[" + std::to_string(nodes[1]) + "," + std::to_string(nodes[0]) + "]";
    if (datum.family == Family::D && datum.rank == 3) {
        std::string m = std::to_string(nodes[0]);
        return "A3[" + m + "," + m + "," + m + "]";
    }
    return datum_spec(datum);
}

SpaceCatalog::SpaceCatalog(const Catalog& catalog, int max_rank, int max_param) : catalog_(&catalog)
{
    for (const auto& row : catalog.irreducible) {
        for (const auto& env : enumerate_params(row.params, std::max(max_rank, max_param))) {
            bool within = true;
            for (const auto& [var, value] : env)
                if (var != "r" && value > max_param) within = false;
            int rank = static_cast<int>(row.rank.eval_int(env));
            if (!within || rank > max_rank) continue;
            SymmetricSpaceDescriptor s = describe(row_datum(row, env), expand_template(row.name, env));
            s.row_id = row.id;
            s.params = env;
            by_key_.emplace(canonical_key(s.datum), instances_.size());
            instances_.push_back(std::move(s));
        }
    }
}

std::vector<const SymmetricSpaceDescriptor*> SpaceCatalog::distinct() const
{
    std::vector<const SymmetricSpaceDescriptor*> out;
    for (auto it = by_key_.begin(); it != by_key_.end(); it = by_key_.upper_bound(it->first))
        out.push_back(&instances_[it->second]);
    return out;
}

std::vector<const SymmetricSpaceDescriptor*> SpaceCatalog::with_key(const std::string& key) const
{
    std::vector<const SymmetricSpaceDescriptor*> out;
    auto [lo, hi] = by_key_.equal_range(key);
    for (auto it = lo; it != hi; ++it) out.push_back(&instances_[it->second]);
    return out;
}

const SymmetricSpaceDescriptor* SpaceCatalog::find_named(const std::string& name) const
{
    const std::string wanted = strip_parens(normalize_name(name));
    for (const auto& s : instances_)
        if (strip_parens(normalize_name(s.name)) == wanted) return &s;
    return nullptr;
}

ProductSpace resolve(const SpaceSpec& spec, const Catalog& catalog)
{
    switch (spec.kind) {
    case SpaceSpec::Kind::datum:
        try {
            return single(symmetric_factor(build_from_nodes(spec.family, spec.rank, spec.nodes, spec.divisible), {}));
        } catch (const RootError& e) {
            throw SpaceSpecError(e.what());
        }
    case SpaceSpec::Kind::alias: return resolve_alias(spec.alias, catalog);
    case SpaceSpec::Kind::product: {
        ProductSpace out;
        for (const auto& f : spec.factors) out = join(std::move(out), resolve(f, catalog));
        if (out.factors.empty()) throw SpaceSpecError("empty product");
        return out;
    }
    }
    throw SpaceSpecError("unreachable space kind");
}

BBounds b_of_spec(const std::string& text, const Catalog& catalog)
{
    return b_of_product(resolve(parse_space(text), catalog));
}

WitteB witte_b(int p, int q, long long k, long long l)
{
    if (p < 1 || q < p) throw std::invalid_argument("witte_b needs 1 <= p <= q");
    if (gcd_ll(k, l) != 1) throw std::invalid_argument("witte_b needs gcd(k,l) = 1");
    auto cp = [](int n) { return grassmannian(2, 1, n + 1, "CP^" + std::to_string(n)); };
    WitteB out;
    out.lower = b_of_product(join(cp(p), cp(q))).lo;
    out.upper = b_of_product(join(sphere(2 * p + 1, "S"), sphere(2 * q + 1, "S"))).lo;
    if (p == 1 && k * l != 0 && l > 1) out.exact = 2 * q + 1;
    return out;
}

int diagonal_cheeger_k(int k1, int k2, int dim2)
{
    int k = std::max(k1, k2);
    return std::min(2 * k, k + dim2);
}

namespace {

// Called with the lock in main_values held.
int spec_dim(const std::string& spec, const Catalog& catalog)
{
    static std::map<std::pair<const Catalog*, std::string>, int> cache;
    auto key = std::make_pair(&catalog, spec);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, resolve(parse_space(spec), catalog).dim()).first;
    return it->second;
}

int main_family_dim_uncached(const std::string& id, int n, const Catalog& catalog)
{
    auto dim_of = [&](const std::string& s) { return spec_dim(s, catalog); };
    const std::string n1 = std::to_string(n + 1);
    if (id == "M") return 2 * dim_of("S^" + std::to_string(2 * n + 1)) - 1;
    // dim SU(n+1) - dim S(U(1)^{p,q} x U(n-1))
    int w = dim_of("SU(" + n1 + ")") - (n - 1) * (n - 1);
    int gr = dim_of("GrC(2," + n1 + ")");
    if (id == "W") return w;
    if (id == "WxW") return 2 * w;
    if (id == "WxGr") return w + gr;
    if (id == "WxPT") return w + gr + dim_of("CP^1");
    throw std::invalid_argument("unknown main family " + id);
}

int main_family_k_uncached(const std::string& id, int n, const Catalog& catalog)
{
    const std::string n1 = std::to_string(n + 1);
    auto spec_b = [&](const std::string& s) { return b_of_spec(s, catalog).lo; };
    if (id == "M") {
        int sphere_dim = 2 * n + 1;
        int kb = spec_b("S^" + std::to_string(sphere_dim));
        return diagonal_cheeger_k(kb, kb, sphere_dim);
    }
    // Fat bundles over Gr_2(C^{n+1}) carry Ric_k > 0 with k = b(base).
    int k_w = spec_b("GrC(2," + n1 + ")");
    if (id == "W") return k_w;
    if (id == "WxW") return diagonal_cheeger_k(k_w, k_w, main_family_dim_uncached("W", n, catalog));
    if (id == "WxGr") return diagonal_cheeger_k(k_w, k_w, main_family_dim_uncached("WxGr", n, catalog) - main_family_dim_uncached("W", n, catalog));
    if (id == "WxPT") return diagonal_cheeger_k(k_w, k_w, main_family_dim_uncached("WxPT", n, catalog) - main_family_dim_uncached("W", n, catalog));
    throw std::invalid_argument("unknown main family " + id);
}

struct MainValues {
    int d = 0;
    int k = 0;
};

const MainValues& main_values(const std::string& id, int n, const Catalog& catalog)
{
    static std::mutex mu;
    static std::map<std::tuple<const Catalog*, std::string, int>, MainValues> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(&catalog, id, n);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, MainValues{main_family_dim_uncached(id, n, catalog), main_family_k_uncached(id, n, catalog)}).first;
    return it->second;
}

}  // namespace

int main_family_dim(const std::string& id, int n, const Catalog& catalog)
{
    return main_values(id, n, catalog).d;
}

int main_family_k(const std::string& id, int n, const Catalog& catalog)
{
    return main_values(id, n, catalog).k;
}

std::vector<DimensionWitness> dimension_witnesses(int d, const Catalog& catalog)
{
    if (d < 7) throw std::invalid_argument("dimension_witnesses needs d >= 7");
    std::vector<DimensionWitness> out;
    for (const auto& row : catalog.main) {
        for (int n = 2;; ++n) {
            int dn = main_family_dim(row.id, n, catalog);
            if (dn > d) break;
            if (dn == d) out.push_back({row.id, row.spaces, row.T, n, d, main_family_k(row.id, n, catalog)});
        }
    }
    return out;
}

bool prop_inequality_check(int b_group, int b_quotient, int dim_quotient, int dim_isotropy)
{
    return 2 * b_quotient <= b_group + dim_quotient - dim_isotropy;
}

Report verify_tables(const SpaceCatalog& spaces)
{
    const Catalog& cat = spaces.source();
    Report rep{"tables", {}};

    CheckResult t1{"table1", "irreducible b, dim, k_max and factor dimensions", true, {}, {}};
    for (const auto& inst : spaces.instances()) {
        const IrreducibleRow* row = nullptr;
        for (const auto& r : cat.irreducible)
            if (r.id == inst.row_id) row = &r;
        const Env& env = inst.params;
        const std::string where = inst.name + " [" + inst.row_id + "] ";
        auto bv = b_value(inst.datum);
        auto bc = b_value_by_components(inst.datum);
        t1.expect(inst.dim == row->dim.eval_int(env),
                  where + "dim " + std::to_string(inst.dim) + " != " + std::to_string(row->dim.eval_int(env)));
        long long b_claim = eval_pieces(row->b, env);
        t1.expect(bv.b == b_claim, where + "b " + std::to_string(bv.b) + " != " + std::to_string(b_claim));
        t1.expect(bv.b == bc.b && bv.argmax == bc.argmax, where + "span filter and components disagree");
        long long kmax = eval_pieces(row->kmax, env);
        t1.expect(std::find(bv.argmax.begin(), bv.argmax.end(), kmax) != bv.argmax.end(),
                  where + "k_max " + std::to_string(kmax) + " is not a maximizer");
        for (int k = 1; k <= inst.rank; ++k) {
            int factor = filtered_multiplicity(inst.datum, k) + inst.rank - 1;
            Env ek = env;
            ek["k"] = k;
            std::optional<long long> claim;
            if (!row->factor_dims.empty())
                claim = row->factor_dims.at(k - 1).eval_int(ek);
            else if (row->factor_dim && (!row->factor_dim_when || row->factor_dim_when->eval_bool(ek)))
                claim = row->factor_dim->eval_int(ek);
            if (claim)
                t1.expect(factor == *claim, where + "factor dim at k=" + std::to_string(k) + " is " +
                                                std::to_string(factor) + ", table says " + std::to_string(*claim));
        }
    }
    t1.detail = std::to_string(spaces.instances().size()) + " instances";
    rep.checks.push_back(t1);

    CheckResult t2{"table2", "irreducible spaces with 3 <= b <= 6", true, {}, {}};
    std::set<std::string> listed;
    for (const auto& row : cat.low_b) {
        auto p = resolve(parse_space(row.space), cat);
        const auto& f = p.factors.front();
        t2.expect(p.factors.size() == 1 && f.symmetric, row.name + " is not irreducible");
        t2.expect(f.dim == row.dim && f.b_lo == row.b, row.name + ": computed dim " + std::to_string(f.dim) +
                                                           ", b " + std::to_string(f.b_lo));
        if (f.symmetric) listed.insert(canonical_key(f.symmetric->datum));
    }
    std::set<std::string> found;
    for (const auto* e : spaces.distinct()) {
        int b = b_of_space(*e);
        if (b >= 3 && b <= 6) found.insert(canonical_key(e->datum));
    }
    for (const auto& k : found)
        if (!listed.count(k)) t2.fail("catalog space " + join_names(spaces.with_key(k)) + " has 3 <= b <= 6 but is not listed");
    for (const auto& k : listed)
        if (!found.count(k)) t2.fail("listed space " + k + " not found among catalog spaces with 3 <= b <= 6");
    t2.detail = std::to_string(listed.size()) + " spaces";
    rep.checks.push_back(t2);

    CheckResult t3{"table3", "rank two spaces: g, multiplicities, dim, b", true, {}, {}};
    std::set<std::string> covered;
    int t3_instances = 0;
    for (const auto& row : cat.rank_two) {
        for (const auto& env : enumerate_params(row.params, 16)) {
            ++t3_instances;
            std::string spec = eval_template_pieces(row.space, env);
            std::string where = expand_template(row.name, env) + " (" + spec + ") ";
            auto p = resolve(parse_space(spec), cat);
            int g = 0;
            std::vector<int> mults;
            for (const auto& f : p.factors) {
                g += indivisible_roots(f.symmetric->datum);
                auto m = reduced_multiplicities(f.symmetric->datum);
                mults.insert(mults.end(), m.begin(), m.end());
            }
            std::sort(mults.begin(), mults.end());
            std::vector<int> claimed;
            for (const auto& m : row.mults) claimed.push_back(static_cast<int>(m.eval_int(env)));
            std::sort(claimed.begin(), claimed.end());
            int b = b_of_product(p).lo;
            t3.expect(p.rank() == 2, where + "rank " + std::to_string(p.rank()));
            t3.expect(g == row.g, where + "g " + std::to_string(g) + " != " + std::to_string(row.g));
            t3.expect(mults == claimed, where + "multiplicities differ");
            t3.expect(p.dim() == row.dim.eval_int(env), where + "dim " + std::to_string(p.dim()));
            t3.expect(b == row.b.eval_int(env), where + "b " + std::to_string(b) + " != " + std::to_string(row.b.eval_int(env)));
            t3.expect(b == 2 + mults.back(), where + "b differs from 2 + max multiplicity");
            if (p.factors.size() == 1) covered.insert(canonical_key(p.factors.front().symmetric->datum));
        }
    }
    for (const auto* e : spaces.distinct())
        if (e->rank == 2 && !covered.count(canonical_key(e->datum)))
            t3.fail("rank two catalog space " + e->name + " (" + datum_spec(e->datum) + ") not covered");
    t3.detail = std::to_string(cat.rank_two.size()) + " rows, " + std::to_string(t3_instances) + " instances";
    rep.checks.push_back(t3);
    return rep;
}

Report verify_observations(const SpaceCatalog& spaces)
{
    const Catalog& cat = spaces.source();
    const auto& obs = cat.observations;
    Report rep{"observations", {}};
    const auto distinct = spaces.distinct();

    const auto minimal = keys_of(obs.minimal_b);
    const auto not_dm3 = keys_of(obs.not_dim_minus_3);
    const auto half_ex = keys_of(obs.half_dim_rank2_exceptions);
    const auto half_hi = keys_of(obs.half_dim_higher_rank);
    const auto third_ex = keys_of(obs.third_dim_rank1_exceptions);
    const auto third_hi = keys_of(obs.third_dim_higher_rank);

    CheckResult a{"a", "b >= 2 rank - 1, equality exactly for rank one and the listed spaces, b never 2", true, {}, {}};
    CheckResult b{"b", "b <= dim - 3 unless a factor is S^2, S^3 or SU(3)/SO(3)", true, {}, {}};
    CheckResult c{"c", "b <= dim/2 exactly for the listed irreducibles", true, {}, {}};
    CheckResult d{"d", "b <= dim/3 exactly for rank one except S^2, and G2", true, {}, {}};
    check_present(a, spaces, obs.minimal_b, "with b = 2 rank - 1");
    check_present(b, spaces, obs.not_dim_minus_3, "with b > dim - 3");
    check_present(c, spaces, obs.half_dim_higher_rank, "with b <= dim/2");
    check_present(c, spaces, obs.half_dim_rank2_exceptions, "with b > dim/2");
    check_present(d, spaces, obs.third_dim_higher_rank, "with b <= dim/3");
    check_present(d, spaces, obs.third_dim_rank1_exceptions, "with b > dim/3");

    for (const auto* e : distinct) {
        const std::string key = canonical_key(e->datum);
        const int bv = b_of_space(*e);
        const int r = e->rank;
        const int n = e->dim;
        for (const auto* inst : spaces.with_key(key)) {
            const std::string who = describe_entry(*inst, bv);
            a.expect(bv >= 2 * r - 1, who + " violates b >= 2 rank - 1");
            a.expect(bv != 2, who + " has b = 2");
            a.expect((bv == 2 * r - 1) == (r == 1 || minimal.count(key) > 0),
                     who + (bv == 2 * r - 1 ? " attains" : " misses") + " b = 2 rank - 1 against the reference set");
            b.expect((bv <= n - 3) == (not_dm3.count(key) == 0), who + " disagrees on b <= dim - 3");
            bool half = r <= 2 ? half_ex.count(key) == 0 : half_hi.count(key) > 0;
            c.expect((2 * bv <= n) == half, who + " disagrees on b <= dim/2");
            bool third = r == 1 ? third_ex.count(key) == 0 : third_hi.count(key) > 0;
            d.expect((3 * bv <= n) == third, who + " disagrees on b <= dim/3");
        }
    }

    // Reducible spaces through the product formula: pairs of small factors and triples of the smallest.
    std::vector<const SymmetricSpaceDescriptor*> small, tiny;
    for (const auto* e : distinct) {
        if (e->dim <= 16) small.push_back(e);
        if (e->dim <= 6) tiny.push_back(e);
    }
    auto is_key = [](const SymmetricSpaceDescriptor* e, const char* k) { return canonical_key(e->datum) == k; };
    auto check_product = [&](const std::vector<const SymmetricSpaceDescriptor*>& fs) {
        ProductSpace p;
        std::string name;
        bool all_s2 = true, splits = false;
        for (const auto* f : fs) {
            Factor x;
            x.name = f->name;
            x.dim = f->dim;
            x.b_lo = x.b_hi = b_of_space(*f);
            x.symmetric = *f;
            p.factors.push_back(x);
            name += (name.empty() ? "" : " x ") + f->name;
            all_s2 = all_s2 && is_key(f, "A1[1]");
            splits = splits || not_dm3.count(canonical_key(f->datum)) > 0;
        }
        int bv = b_of_product(p).lo, r = p.rank(), n = p.dim();
        std::string who = name + ": b=" + std::to_string(bv) + ", dim=" + std::to_string(n);
        a.expect(bv >= 2 * r - 1 && (bv == 2 * r - 1) == all_s2, who + " disagrees on b = 2 rank - 1");
        a.expect(bv != 2, who + " has b = 2");
        b.expect((bv <= n - 3) == !splits, who + " disagrees on b <= dim - 3");
        c.expect(2 * bv > n, who + " is reducible with b <= dim/2");
        d.expect(3 * bv > n, who + " is reducible with b <= dim/3");
    };
    std::size_t products = 0;
    for (std::size_t i = 0; i < small.size(); ++i)
        for (std::size_t j = i; j < small.size(); ++j, ++products) check_product({small[i], small[j]});
    for (std::size_t i = 0; i < tiny.size(); ++i)
        for (std::size_t j = i; j < tiny.size(); ++j)
            for (std::size_t k = j; k < tiny.size(); ++k, ++products) check_product({tiny[i], tiny[j], tiny[k]});

    const std::string scope = std::to_string(distinct.size()) + " irreducibles, " + std::to_string(products) + " products";
    a.detail = b.detail = c.detail = d.detail = scope;
    rep.checks.insert(rep.checks.end(), {a, b, c, d});

    auto tables = verify_tables(spaces);
    CheckResult e = *tables.find("table2");
    e.id = "e";
    e.title = "all irreducibles with 3 <= b <= 6 are the listed ones";
    CheckResult f = *tables.find("table3");
    f.id = "f";
    f.title = "rank two values of b";
    rep.checks.push_back(e);
    rep.checks.push_back(f);
    return rep;
}

Report verify_fat_bundles(const Catalog& catalog, int max_n)
{
    Report rep{"fat_bundles", {}};
    CheckResult chk{"fat_k", "claimed k equals b of the base; total dim = base + fiber", true, {}, {}};
    int count = 0;
    for (const auto& row : catalog.fat_bundles) {
        for (const auto& env : enumerate_params(row.params, max_n)) {
            ++count;
            std::string base = expand_template(row.base, env);
            std::string total = expand_template(row.total, env);
            auto p = resolve(parse_space(base), catalog);
            auto bb = b_of_product(p);
            long long k = eval_pieces(row.k, env);
            long long dim = row.dim.eval_int(env);
            long long fiber = dim - p.dim();
            chk.expect(bb.exact() && bb.lo == k, total + " over " + base + ": claimed k " + std::to_string(k) +
                                                     ", b(base) " + std::to_string(bb.lo));
            chk.expect(fiber > 0, total + ": fiber dimension " + std::to_string(fiber));
            if (row.sphere_bundle) chk.expect(fiber == 3, total + ": expected S^3 fibers, got dim " + std::to_string(fiber));
        }
    }
    chk.detail = std::to_string(count) + " bundles";
    rep.checks.push_back(chk);
    return rep;
}

Report verify_main_table(const Catalog& catalog, int max_n, int max_dim)
{
    Report rep{"main", {}};
    CheckResult tab{"main_table", "d(n) and k(n) for every family, with the n = 3 values", true, {}, {}};
    CheckResult half{"half_dim", "k(n) < d(n)/2 for n >= 2, n != 3", true, {}, {}};
    for (const auto& row : catalog.main) {
        for (int n = 2; n <= max_n; ++n) {
            Env env{{"n", n}};
            int d = main_family_dim(row.id, n, catalog);
            int k = main_family_k(row.id, n, catalog);
            long long d_claim = row.d.eval_int(env);
            long long k_claim = n == 3 ? row.k3.eval_int(env) : row.k.eval_int(env);
            std::string who = row.id + " n=" + std::to_string(n);
            tab.expect(d == d_claim, who + ": d " + std::to_string(d) + " != " + std::to_string(d_claim));
            tab.expect(k == k_claim, who + ": k " + std::to_string(k) + " != " + std::to_string(k_claim));
            if (n != 3) half.expect(2 * k < d, who + ": k " + std::to_string(k) + " not below d/2");
        }
    }
    CheckResult cover{"coverage", "d = 3,5,6,7 mod 8 has a homotopy witness with k < d/2; d = 1 mod 4 has k = 2", true, {}, {}};
    for (int d = 7; d <= max_dim; ++d) {
        auto ws = dimension_witnesses(d, catalog);
        bool homotopy = false, homeo = false;
        for (const auto& w : ws) {
            if (w.type == "homotopy" && 2 * w.k < d) homotopy = true;
            if (w.type == "homeomorphism" && w.k == 2) homeo = true;
        }
        int r8 = d % 8;
        bool want_homotopy = r8 == 3 || r8 == 5 || r8 == 6 || r8 == 7;
        bool want_homeo = d >= 9 && d % 4 == 1;
        cover.expect(!want_homotopy || homotopy, "d=" + std::to_string(d) + " lacks a homotopy witness");
        cover.expect(!want_homeo || homeo, "d=" + std::to_string(d) + " lacks a homeomorphism witness");
        cover.expect(ws.empty() == (r8 == 0 || r8 == 2 || r8 == 4),
                     "d=" + std::to_string(d) + " has " + std::to_string(ws.size()) + " witnesses");
    }
    cover.detail = "7 <= d <= " + std::to_string(max_dim);
    rep.checks.insert(rep.checks.end(), {tab, half, cover});
    return rep;
}

}  // namespace ricb
