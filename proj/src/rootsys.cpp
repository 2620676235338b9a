#include "ricb/rootsys.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace ricb {

namespace {

const std::vector<std::pair<Family, std::string>> kFamilyNames = {
    {Family::A, "A"},   {Family::B, "B"},   {Family::C, "C"},   {Family::D, "D"},
    {Family::BC, "BC"}, {Family::E6, "E6"}, {Family::E7, "E7"}, {Family::E8, "E8"},
    {Family::F4, "F4"}, {Family::G2, "G2"},
};

std::vector<int> interval(int r, int from, int to, int value, std::vector<int> c = {})
{
    // Adds `value` on the 0-based half-open range [from, to).
    if (c.empty()) c.assign(r, 0);
    for (int m = from; m < to; ++m) c[m] += value;
    return c;
}

// Closed-form positive roots of the classical families in simple-root coordinates.
std::vector<Root> classical_roots(Family f, int r)
{
    std::vector<Root> out;
    auto add = [&](std::vector<int> c, Orbit o) { out.push_back({std::move(c), o}); };
    switch (f) {
    case Family::A:
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j <= r; ++j) add(interval(r, i, j, 1), Orbit::single);
        break;
    case Family::B:
    case Family::BC: {
        const bool bc = f == Family::BC;
        const Orbit pair = bc ? Orbit::medium : Orbit::long_;
        for (int i = 0; i < r; ++i) {
            for (int j = i + 1; j < r; ++j) {
                add(interval(r, i, j, 1), pair);                                 // e_i - e_j
                add(interval(r, j, r, 2, interval(r, i, j, 1)), pair);          // e_i + e_j
            }
            add(interval(r, i, r, 1), Orbit::short_);                           // e_i
            if (bc) add(interval(r, i, r, 2), Orbit::long_);                    // 2 e_i
        }
        break;
    }
    case Family::C:
        for (int i = 0; i < r; ++i) {
            for (int j = i + 1; j < r; ++j) {
                add(interval(r, i, j, 1), Orbit::short_);
                auto c = interval(r, j, r - 1, 2, interval(r, i, j, 1));
                c[r - 1] += 1;
                add(c, Orbit::short_);
            }
            auto c = interval(r, i, r - 1, 2);
            c[r - 1] += 1;
            add(c, Orbit::long_);
        }
        break;
    case Family::D:
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) {
                add(interval(r, i, j, 1), Orbit::single);
                if (j == r - 1) {
                    auto c = interval(r, i, r - 2, 1);
                    c[r - 1] += 1;
                    add(c, Orbit::single);
                } else {
                    auto c = interval(r, j, r - 2, 2, interval(r, i, j, 1));
                    c[r - 2] += 1;
                    c[r - 1] += 1;
                    add(c, Orbit::single);
                }
            }
        break;
    default:
        throw RootError("not a classical family");
    }
    return out;
}

std::vector<std::vector<int>> edges_gram(int r, const std::vector<std::pair<int, int>>& edges)
{
    std::vector<std::vector<int>> g(r, std::vector<int>(r, 0));
    for (int i = 0; i < r; ++i) g[i][i] = 2;
    for (auto [a, b] : edges) {
        g[a - 1][b - 1] = -1;
        g[b - 1][a - 1] = -1;
    }
    return g;
}

std::vector<std::vector<int>> chain(int r)
{
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i < r; ++i) e.emplace_back(i, i + 1);
    return edges_gram(r, e);
}

int root_length(const std::vector<int>& c, const std::vector<std::vector<int>>& g)
{
    int s = 0;
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < c.size(); ++j) s += c[i] * g[i][j] * c[j];
    return s;
}

std::vector<std::vector<int>> cartan_of(const std::vector<std::vector<int>>& g)
{
    const int r = static_cast<int>(g.size());
    std::vector<std::vector<int>> a(r, std::vector<int>(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) a[i][j] = 2 * g[i][j] / g[j][j];
    return a;
}

void sort_roots(std::vector<Root>& roots)
{
    std::sort(roots.begin(), roots.end(), [](const Root& x, const Root& y) {
        if (x.height() != y.height()) return x.height() < y.height();
        return x.coeff > y.coeff;
    });
}

}  // namespace

std::string family_name(Family f)
{
    for (auto& [fam, name] : kFamilyNames)
        if (fam == f) return name;
    return "?";
}

std::optional<Family> parse_family(const std::string& s)
{
    for (auto& [fam, name] : kFamilyNames)
        if (name == s) return fam;
    return std::nullopt;
}

std::string orbit_name(Orbit o)
{
    switch (o) {
    case Orbit::single: return "single";
    case Orbit::short_: return "short";
    case Orbit::long_: return "long";
    case Orbit::medium: return "medium";
    }
    return "?";
}

std::optional<Orbit> parse_orbit(const std::string& s)
{
    for (Orbit o : {Orbit::single, Orbit::short_, Orbit::long_, Orbit::medium})
        if (orbit_name(o) == s) return o;
    return std::nullopt;
}

int fixed_rank(Family f)
{
    switch (f) {
    case Family::E6: return 6;
    case Family::E7: return 7;
    case Family::E8: return 8;
    case Family::F4: return 4;
    case Family::G2: return 2;
    default: return 0;
    }
}

bool rank_valid(Family f, int rank)
{
    if (int fr = fixed_rank(f)) return rank == fr;
    switch (f) {
    case Family::A:
    case Family::BC: return rank >= 1;
    case Family::B:
    case Family::C: return rank >= 2;
    case Family::D: return rank >= 3;
    default: return false;
    }
}

int Root::height() const { return std::accumulate(coeff.begin(), coeff.end(), 0); }

std::vector<std::vector<int>> family_gram(Family f, int r)
{
    if (!rank_valid(f, r))
        throw RootError("invalid rank " + std::to_string(r) + " for family " + family_name(f));
    std::vector<std::vector<int>> g;
    switch (f) {
    case Family::A: return chain(r);
    case Family::B:
    case Family::BC:
        g = chain(r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) g[i][j] *= 2;
        g[r - 1][r - 1] = 2;
        return g;
    case Family::C:
        g = chain(r);
        g[r - 1][r - 1] = 4;
        g[r - 1][r - 2] = g[r - 2][r - 1] = -2;
        return g;
    case Family::D: {
        std::vector<std::pair<int, int>> e;
        for (int i = 1; i < r - 1; ++i) e.emplace_back(i, i + 1);
        e.emplace_back(r - 2, r);
        return edges_gram(r, e);
    }
    case Family::E6: return edges_gram(6, {{1, 3}, {3, 4}, {4, 5}, {5, 6}, {2, 4}});
    case Family::E7: return edges_gram(7, {{1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {2, 5}});
    case Family::E8:
        return edges_gram(8, {{1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {2, 6}});
    case Family::F4:
        return {{4, -2, 0, 0}, {-2, 4, -2, 0}, {0, -2, 2, -1}, {0, 0, -1, 2}};
    case Family::G2: return {{2, -3}, {-3, 6}};
    }
    return g;
}

std::vector<Root> roots_from_cartan(const std::vector<std::vector<int>>& g)
{
    const int r = static_cast<int>(g.size());
    const auto a = cartan_of(g);
    std::set<std::vector<int>> known;
    std::vector<std::vector<int>> level;
    for (int i = 0; i < r; ++i) {
        std::vector<int> c(r, 0);
        c[i] = 1;
        known.insert(c);
        level.push_back(c);
    }
    std::vector<std::vector<int>> all = level;
    while (!level.empty()) {
        std::set<std::vector<int>> next;
        for (const auto& beta : level) {
            for (int i = 0; i < r; ++i) {
                int p = 0;
                auto down = beta;
                while (true) {
                    down[i] -= 1;
                    if (!known.count(down)) break;
                    ++p;
                }
                int pairing = 0;
                for (int j = 0; j < r; ++j) pairing += beta[j] * a[j][i];
                if (p - pairing > 0) {
                    auto up = beta;
                    up[i] += 1;
                    if (!known.count(up)) next.insert(up);
                }
            }
        }
        level.assign(next.begin(), next.end());
        for (const auto& c : level) {
            known.insert(c);
            all.push_back(c);
        }
    }
    std::set<int> lengths;
    for (const auto& c : all) lengths.insert(root_length(c, g));
    std::vector<Root> out;
    for (const auto& c : all) {
        Orbit o = Orbit::single;
        if (lengths.size() > 1) o = root_length(c, g) == *lengths.rbegin() ? Orbit::long_ : Orbit::short_;
        out.push_back({c, o});
    }
    sort_roots(out);
    return out;
}

std::vector<std::vector<int>> RootDatum::gram() const { return family_gram(family, rank); }

std::vector<std::vector<int>> RootDatum::cartan() const { return cartan_of(gram()); }

Orbit RootDatum::simple_orbit(int i) const
{
    for (const auto& root : positive)
        if (root.height() == 1 && root.coeff[i] == 1) return root.orbit;
    throw RootError("simple root missing");
}

std::vector<int> RootDatum::node_multiplicities() const
{
    std::vector<int> m(rank);
    for (int i = 0; i < rank; ++i) m[i] = mult.at(simple_orbit(i));
    return m;
}

std::optional<int> RootDatum::divisible_multiplicity() const
{
    if (family != Family::BC) return std::nullopt;
    return mult.at(Orbit::long_);
}

std::vector<Orbit> RootDatum::orbits() const
{
    std::set<Orbit> s;
    for (const auto& root : positive) s.insert(root.orbit);
    return {s.begin(), s.end()};
}

RootDatum build_root_datum(Family family, int rank, const std::map<Orbit, int>& mult)
{
    if (!rank_valid(family, rank))
        throw RootError("invalid rank " + std::to_string(rank) + " for family " + family_name(family));
    RootDatum d;
    d.family = family;
    d.rank = rank;
    if (fixed_rank(family))
        d.positive = roots_from_cartan(family_gram(family, rank));
    else {
        d.positive = classical_roots(family, rank);
        sort_roots(d.positive);
    }
    for (Orbit o : d.orbits()) {
        auto it = mult.find(o);
        if (it == mult.end())
            throw RootError("missing multiplicity for " + orbit_name(o) + " roots of " +
                            family_name(family) + std::to_string(rank));
        if (it->second < 1) throw RootError("multiplicities must be positive");
        d.mult[o] = it->second;
    }
    for (auto& [o, m] : mult)
        if (!d.mult.count(o))
            throw RootError("no " + orbit_name(o) + " roots in " + family_name(family) +
                            std::to_string(rank));
    return d;
}

RootDatum build_from_nodes(Family family, int rank, const std::vector<int>& node_mult,
                           std::optional<int> divisible)
{
    if (static_cast<int>(node_mult.size()) != rank)
        throw RootError("expected " + std::to_string(rank) + " node multiplicities, got " +
                        std::to_string(node_mult.size()));
    if ((family == Family::BC) != divisible.has_value())
        throw RootError(family == Family::BC ? "BC requires a divisible multiplicity"
                                             : "divisible multiplicity only allowed for BC");
    RootDatum shape;
    shape.family = family;
    shape.rank = rank;
    if (!rank_valid(family, rank))
        throw RootError("invalid rank " + std::to_string(rank) + " for family " + family_name(family));
    shape.positive = fixed_rank(family) ? roots_from_cartan(family_gram(family, rank))
                                        : classical_roots(family, rank);
    std::map<Orbit, int> mult;
    for (int i = 0; i < rank; ++i) {
        Orbit o = shape.simple_orbit(i);
        auto [it, fresh] = mult.emplace(o, node_mult[i]);
        if (!fresh && it->second != node_mult[i])
            throw RootError("nodes in the " + orbit_name(o) + " orbit carry different multiplicities");
    }
    if (divisible) mult[Orbit::long_] = *divisible;
    return build_root_datum(family, rank, mult);
}

namespace {

// Finds perm with sub[perm[i]][perm[j]] == target[i][j].
bool match_cartan(const std::vector<std::vector<int>>& sub, const std::vector<std::vector<int>>& target,
                  std::vector<int>& perm)
{
    const int n = static_cast<int>(sub.size());
    if (static_cast<int>(target.size()) != n) return false;
    perm.assign(n, -1);
    std::vector<bool> used(n, false);
    std::function<bool(int)> place = [&](int i) {
        if (i == n) return true;
        for (int c = 0; c < n; ++c) {
            if (used[c]) continue;
            bool ok = sub[c][c] == target[i][i];
            for (int j = 0; j < i && ok; ++j)
                ok = sub[c][perm[j]] == target[i][j] && sub[perm[j]][c] == target[j][i];
            if (!ok) continue;
            used[c] = true;
            perm[i] = c;
            if (place(i + 1)) return true;
            used[c] = false;
        }
        return false;
    };
    return place(0);
}

std::vector<Family> candidate_families(int n)
{
    std::vector<Family> c{Family::A};
    if (n >= 2) c.push_back(Family::B);
    if (n >= 3) c.push_back(Family::C);
    if (n >= 4) c.push_back(Family::D);
    if (n == 6) c.push_back(Family::E6);
    if (n == 7) c.push_back(Family::E7);
    if (n == 8) c.push_back(Family::E8);
    if (n == 4) c.push_back(Family::F4);
    if (n == 2) c.push_back(Family::G2);
    return c;
}

}  // namespace

SubDatum delete_node(const RootDatum& datum, int k)
{
    if (k < 1 || k > datum.rank)
        throw RootError("node index " + std::to_string(k) + " out of range 1.." + std::to_string(datum.rank));
    const auto a = datum.cartan();
    const int r = datum.rank;
    std::vector<int> comp(r, -1);
    comp[k - 1] = -2;
    int ncomp = 0;
    for (int s = 0; s < r; ++s) {
        if (comp[s] != -1) continue;
        std::vector<int> stack{s};
        comp[s] = ncomp;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w = 0; w < r; ++w)
                if (comp[w] == -1 && a[v][w] != 0) {
                    comp[w] = ncomp;
                    stack.push_back(w);
                }
        }
        ++ncomp;
    }
    const auto node_mult = datum.node_multiplicities();
    SubDatum sub;
    sub.removed_index = k;
    for (int c = 0; c < ncomp; ++c) {
        std::vector<int> nodes;
        for (int v = 0; v < r; ++v)
            if (comp[v] == c) nodes.push_back(v);
        const int n = static_cast<int>(nodes.size());
        std::vector<std::vector<int>> subcartan(n, std::vector<int>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) subcartan[i][j] = a[nodes[i]][nodes[j]];
        const bool divisible = datum.family == Family::BC && comp[r - 1] == c;
        std::vector<Family> candidates = divisible ? std::vector<Family>{Family::BC} : candidate_families(n);
        bool found = false;
        for (Family f : candidates) {
            if (!rank_valid(f, n)) continue;
            std::vector<int> perm;
            if (!match_cartan(subcartan, cartan_of(family_gram(f, n)), perm)) continue;
            if (divisible && nodes[perm[n - 1]] != r - 1) continue;
            std::vector<int> mapped(n), mults(n);
            for (int i = 0; i < n; ++i) {
                mapped[i] = nodes[perm[i]];
                mults[i] = node_mult[mapped[i]];
            }
            Component cmp{build_from_nodes(f, n, mults, divisible ? datum.divisible_multiplicity() : std::nullopt),
                          mapped};
            sub.components.push_back(std::move(cmp));
            found = true;
            break;
        }
        if (!found) throw RootError("unrecognized Dynkin component");
    }
    return sub;
}

int dimension(const RootDatum& datum)
{
    int d = datum.rank;
    for (const auto& root : datum.positive) d += datum.multiplicity(root);
    return d;
}

int filtered_multiplicity(const RootDatum& datum, int k)
{
    int s = 0;
    for (const auto& root : datum.positive)
        if (root.coeff[k - 1] == 0) s += datum.multiplicity(root);
    return s;
}

BValue b_value(const RootDatum& datum)
{
    BValue out;
    int best = -1;
    for (int k = 1; k <= datum.rank; ++k) {
        int s = filtered_multiplicity(datum, k);
        if (s > best) {
            best = s;
            out.argmax.clear();
        }
        if (s == best) out.argmax.push_back(k);
    }
    out.b = datum.rank + best;
    return out;
}

BValue b_value_by_components(const RootDatum& datum)
{
    BValue out;
    int best = -1;
    for (int k = 1; k <= datum.rank; ++k) {
        int z = 1;
        for (const auto& c : delete_node(datum, k).components) z += dimension(c.datum);
        if (z > best) {
            best = z;
            out.argmax.clear();
        }
        if (z == best) out.argmax.push_back(k);
    }
    out.b = best;
    return out;
}

std::string type_label(const RootDatum& datum)
{
    return family_name(datum.family) + (fixed_rank(datum.family) ? "" : std::to_string(datum.rank));
}

std::string type_label(const SubDatum& sub)
{
    if (sub.components.empty()) return "pt";
    std::string s;
    for (const auto& c : sub.components) {
        if (!s.empty()) s += "+";
        s += type_label(c.datum);
    }
    return s;
}

std::string datum_spec(const RootDatum& datum)
{
    std::ostringstream os;
    os << family_name(datum.family);
    if (!fixed_rank(datum.family)) os << datum.rank;
    os << '[';
    const auto m = datum.node_multiplicities();
    for (int i = 0; i < datum.rank; ++i) {
        if (i) os << ',';
        os << m[i];
    }
    if (auto c = datum.divisible_multiplicity()) os << '[' << *c << ']';
    os << ']';
    return os.str();
}

}  // namespace ricb
