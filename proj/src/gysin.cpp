#include "ricb/gysin.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <regex>
#include <sstream>

#include <boost/integer/common_factor.hpp>
#include <json.hpp>

namespace ricb {

IntegerMatrix::IntegerMatrix(int rows, int cols) : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows) * cols)
{
    if (rows < 0 || cols < 0) throw TopologyError("negative matrix size");
}

IntegerMatrix::IntegerMatrix(std::initializer_list<std::initializer_list<long long>> rows)
{
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != cols_) throw TopologyError("ragged matrix literal");
        for (long long v : r) entries_.emplace_back(v);
    }
}

IntegerMatrix IntegerMatrix::identity(int n)
{
    IntegerMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

BigInt IntegerMatrix::determinant() const
{
    if (rows_ != cols_) throw TopologyError("determinant of a non-square matrix");
    int n = rows_;
    if (n == 0) return 1;
    IntegerMatrix a = *this;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a.at(k, k) == 0) {
            int swap = -1;
            for (int i = k + 1; i < n && swap < 0; ++i)
                if (a.at(i, k) != 0) swap = i;
            if (swap < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(swap, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
            a.at(i, k) = 0;
        }
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

std::string IntegerMatrix::to_string() const
{
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < rows_; ++i) {
        os << (i ? ",[" : "[");
        for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j);
        os << ']';
    }
    os << ']';
    return os.str();
}

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b)
{
    if (a.cols() != b.rows()) throw TopologyError("matrix size mismatch");
    IntegerMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            if (a.at(i, k) == 0) continue;
            for (int j = 0; j < b.cols(); ++j) c.at(i, j) += a.at(i, k) * b.at(k, j);
        }
    return c;
}

IntegerMatrix euler_stencil(int n, long long p, long long q)
{
    IntegerMatrix t(n, n);
    for (int i = 0; i < n; ++i) {
        t.at(i, 0) = i == 0 ? p + q : q;
        if (i > 0) t.at(i, i) = p;
        if (i + 1 < n) t.at(i, i + 1) = -q;
    }
    return t;
}

namespace {

void check_parameters(int n, long long p, long long q)
{
    if (n < 2) throw TopologyError("n must be at least 2");
    if (boost::integer::gcd(p, q) != 1) throw TopologyError("p and q must be coprime");
}

}  // namespace

IntegerMatrix euler_matrix(int n, long long p, long long q)
{
    check_parameters(n, p, q);
    return euler_stencil(n, p, q);
}

BigInt tau(int n, long long p, long long q)
{
    check_parameters(n, p, q);
    BigInt sum = 0;
    for (int i = 0; i <= n; ++i) sum += boost::multiprecision::pow(BigInt(p), n - i) * boost::multiprecision::pow(BigInt(q), i);
    return abs(sum);
}

SmithForm smith_normal_form(const IntegerMatrix& m)
{
    const int rows = m.rows();
    const int cols = m.cols();
    IntegerMatrix a = m;
    IntegerMatrix left = IntegerMatrix::identity(rows);
    IntegerMatrix right = IntegerMatrix::identity(cols);

    auto swap_rows = [&](int i, int j) {
        if (i == j) return;
        for (int c = 0; c < cols; ++c) std::swap(a.at(i, c), a.at(j, c));
        for (int c = 0; c < rows; ++c) std::swap(left.at(i, c), left.at(j, c));
    };
    auto swap_cols = [&](int i, int j) {
        if (i == j) return;
        for (int r = 0; r < rows; ++r) std::swap(a.at(r, i), a.at(r, j));
        for (int r = 0; r < cols; ++r) std::swap(right.at(r, i), right.at(r, j));
    };
    // row_i += f * row_j
    auto add_row = [&](int i, int j, const BigInt& f) {
        for (int c = 0; c < cols; ++c) a.at(i, c) += f * a.at(j, c);
        for (int c = 0; c < rows; ++c) left.at(i, c) += f * left.at(j, c);
    };
    auto add_col = [&](int i, int j, const BigInt& f) {
        for (int r = 0; r < rows; ++r) a.at(r, i) += f * a.at(r, j);
        for (int r = 0; r < cols; ++r) right.at(r, i) += f * right.at(r, j);
    };

    const int steps = std::min(rows, cols);
    for (int t = 0; t < steps; ++t) {
        int pr = -1, pc = -1;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j)
                if (a.at(i, j) != 0 && (pr < 0 || abs(a.at(i, j)) < abs(a.at(pr, pc)))) {
                    pr = i;
                    pc = j;
                }
        if (pr < 0) break;
        swap_rows(t, pr);
        swap_cols(t, pc);

        for (;;) {
            bool clean = true;
            for (int i = t + 1; i < rows; ++i) {
                if (a.at(i, t) == 0) continue;
                add_row(i, t, -(a.at(i, t) / a.at(t, t)));
                if (a.at(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < cols; ++j) {
                if (a.at(t, j) == 0) continue;
                add_col(j, t, -(a.at(t, j) / a.at(t, t)));
                if (a.at(t, j) != 0) clean = false;
            }
            if (!clean) {
                // Remainders are smaller than the pivot; bring the smallest one to (t, t).
                int bi = t, bj = t;
                for (int i = t + 1; i < rows; ++i)
                    if (a.at(i, t) != 0 && abs(a.at(i, t)) < abs(a.at(bi, bj))) bi = i, bj = t;
                for (int j = t + 1; j < cols; ++j)
                    if (a.at(t, j) != 0 && abs(a.at(t, j)) < abs(a.at(bi, bj))) bi = t, bj = j;
                swap_rows(t, bi);
                swap_cols(t, bj);
                continue;
            }
            int bad = -1;
            for (int i = t + 1; i < rows && bad < 0; ++i)
                for (int j = t + 1; j < cols; ++j)
                    if (a.at(i, j) % a.at(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            add_row(t, bad, 1);
        }
        if (a.at(t, t) < 0) {
            for (int c = 0; c < cols; ++c) a.at(t, c) = -a.at(t, c);
            for (int c = 0; c < rows; ++c) left.at(t, c) = -left.at(t, c);
        }
    }

    SmithForm out{{}, std::move(left), std::move(right)};
    for (int i = 0; i < steps; ++i) out.diagonal.push_back(a.at(i, i));
    return out;
}

BigInt Group::torsion_order() const
{
    BigInt o = 1;
    for (const auto& t : torsion) o *= t;
    return o;
}

std::string Group::to_string() const
{
    std::string out;
    if (rank > 0) out = rank == 1 ? "Z" : "Z^" + std::to_string(rank);
    for (const auto& t : torsion) out += (out.empty() ? "" : " + ") + ("Z/" + t.str());
    return out.empty() ? "0" : out;
}

Group make_group(const std::vector<BigInt>& cyclic)
{
    Group g;
    std::vector<BigInt> finite;
    for (const auto& c : cyclic) {
        if (c == 0)
            ++g.rank;
        else if (abs(c) != 1)
            finite.push_back(abs(c));
    }
    if (finite.empty()) return g;
    IntegerMatrix d(static_cast<int>(finite.size()), static_cast<int>(finite.size()));
    for (std::size_t i = 0; i < finite.size(); ++i) d.at(static_cast<int>(i), static_cast<int>(i)) = finite[i];
    for (const auto& x : smith_normal_form(d).diagonal)
        if (x != 1) g.torsion.push_back(x);
    return g;
}

const Group& GradedGroups::at(int d) const
{
    static const Group zero;
    auto it = degree.find(d);
    return it == degree.end() ? zero : it->second;
}

std::string GradedGroups::to_json() const
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [d, g] : degree) {
        nlohmann::ordered_json tors = nlohmann::ordered_json::array();
        for (const auto& t : g.torsion) {
            if (t <= std::numeric_limits<long long>::max())
                tors.push_back(static_cast<long long>(t));
            else
                tors.push_back(t.str());
        }
        j["H" + std::to_string(d)] = {{"rank", g.rank}, {"torsion", tors}};
    }
    return j.dump();
}

namespace {

// Cokernel and kernel rank of an integer map given by its matrix.
std::pair<Group, int> coker_ker(const IntegerMatrix& m)
{
    auto snf = smith_normal_form(m);
    std::vector<BigInt> cyclic(static_cast<std::size_t>(m.rows()), BigInt(0));
    int image_rank = 0;
    for (std::size_t i = 0; i < snf.diagonal.size(); ++i) {
        cyclic[i] = snf.diagonal[i];
        if (snf.diagonal[i] != 0) ++image_rank;
    }
    return {make_group(cyclic), m.cols() - image_rank};
}

// Cup product with e = -q x + p y from H^{2k-2} to H^{2k} of P_C T CP^n for k < n, where no
// relation applies: bases x^{k-1-j} y^j and x^{k-i} y^i.
IntegerMatrix euler_low_degree(int k, long long p, long long q)
{
    IntegerMatrix m(k + 1, k);
    for (int j = 0; j < k; ++j) {
        m.at(j, j) = -q;
        m.at(j + 1, j) = p;
    }
    return m;
}

}  // namespace

AloffWallachCohomology aloff_wallach_cohomology(int n, long long p, long long q, bool allow_nonpositive)
{
    check_parameters(n, p, q);
    AloffWallachCohomology out;
    out.n = n;
    out.p = p;
    out.q = q;
    out.nonpositive = p * q <= 0;
    if (out.nonpositive && !allow_nonpositive) throw TopologyError("pq <= 0 is outside the supported range");
    out.groups.degree[0] = Group{1, {}};
    for (int k = 1; k <= n; ++k) {
        auto [coker, ker] = coker_ker(k < n ? euler_low_degree(k, p, q) : euler_matrix(n, p, q));
        out.groups.degree[2 * k - 1] = Group{ker, {}};
        out.groups.degree[2 * k] = coker;
    }
    return out;
}

namespace {

std::string normalize(const std::string& s)
{
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '{' && c != '}') out += static_cast<char>(std::tolower(c));
    return out;
}

GradedGroups free_groups(const std::vector<int>& betti_even, int max_degree)
{
    GradedGroups g;
    for (int d = 0; d <= max_degree; ++d) g.degree[d] = Group{d % 2 == 0 && d / 2 < static_cast<int>(betti_even.size()) ? betti_even[d / 2] : 0, {}};
    return g;
}

}  // namespace

GradedGroups factor_cohomology(const std::string& spec, int max_degree)
{
    std::string s = normalize(spec);
    std::smatch m;
    if (std::regex_match(s, m, std::regex(R"(w\((\d+);(-?\d+),(-?\d+)\))"))) {
        int d = std::stoi(m[1]);
        if (d < 7 || (d + 1) % 4 != 0) throw TopologyError("Aloff-Wallach dimension must be 4n-1 with n >= 2");
        int n = (d + 1) / 4;
        auto aw = aloff_wallach_cohomology(n, std::stoll(m[2]), std::stoll(m[3]));
        GradedGroups g;
        for (int j = 0; j <= max_degree; ++j) {
            if (j <= 2 * n)
                g.degree[j] = aw.groups.at(j);
            else if (j <= d)
                // Poincare duality with the universal coefficient theorem above the middle degree.
                g.degree[j] = Group{j % 2 == 1 ? 1 : 0, {}};
            else
                g.degree[j] = Group{};
        }
        return g;
    }
    if (std::regex_match(s, m, std::regex(R"(grc\(2,(\d+)\)|gr_2\(c\^(\d+)\))"))) {
        int N = std::stoi(m[1].matched ? m[1].str() : m[2].str());
        if (N < 3) throw TopologyError("Gr_2(C^N) needs N >= 3");
        // Partitions fitting in a 2 x (N-2) box.
        std::vector<int> betti(2 * (N - 2) + 1, 0);
        for (int a = 0; a <= N - 2; ++a)
            for (int b = 0; b <= a; ++b) ++betti[a + b];
        return free_groups(betti, max_degree);
    }
    if (std::regex_match(s, m, std::regex(R"((?:ptcp|p_ctcp)\^?(\d+))"))) {
        int n = std::stoi(m[1]);
        if (n < 1) throw TopologyError("P_C T CP^n needs n >= 1");
        std::vector<int> betti(2 * n, 0);
        for (int a = 0; a <= n; ++a)
            for (int b = 0; b <= n - 1; ++b) ++betti[a + b];
        return free_groups(betti, max_degree);
    }
    if (std::regex_match(s, m, std::regex(R"(cp\^?(\d+))"))) {
        return free_groups(std::vector<int>(std::stoi(m[1]) + 1, 1), max_degree);
    }
    if (std::regex_match(s, m, std::regex(R"(s\^?(\d+))"))) {
        int n = std::stoi(m[1]);
        if (n < 1) throw TopologyError("sphere dimension must be positive");
        GradedGroups g;
        for (int d = 0; d <= max_degree; ++d) g.degree[d] = Group{d == 0 || d == n ? 1 : 0, {}};
        return g;
    }
    throw TopologyError("unsupported factor \"" + spec + "\"");
}

namespace {

std::vector<BigInt> cyclic_parts(const Group& g)
{
    std::vector<BigInt> out(static_cast<std::size_t>(g.rank), BigInt(0));
    out.insert(out.end(), g.torsion.begin(), g.torsion.end());
    return out;
}

void append_tensor(std::vector<BigInt>& acc, const Group& a, const Group& b)
{
    for (const auto& x : cyclic_parts(a))
        for (const auto& y : cyclic_parts(b)) acc.push_back(boost::multiprecision::gcd(x, y));
}

void append_tor(std::vector<BigInt>& acc, const Group& a, const Group& b)
{
    for (const auto& x : a.torsion)
        for (const auto& y : b.torsion) acc.push_back(boost::multiprecision::gcd(x, y));
}

struct Fold {
    GradedGroups groups;
    std::vector<BigInt> last_tor;
};

Fold fold(const GradedGroups& a, const GradedGroups& b, int max_degree)
{
    Fold out;
    for (int d = 0; d <= max_degree; ++d) {
        std::vector<BigInt> parts, tor;
        for (int i = 0; i <= d; ++i) append_tensor(parts, a.at(i), b.at(d - i));
        for (int i = 0; i <= d + 1; ++i) append_tor(tor, a.at(i), b.at(d + 1 - i));
        parts.insert(parts.end(), tor.begin(), tor.end());
        out.groups.degree[d] = make_group(parts);
        if (d == max_degree) out.last_tor = tor;
    }
    return out;
}

}  // namespace

Group kunneth(const std::vector<GradedGroups>& factors, int deg)
{
    if (factors.empty()) throw TopologyError("empty product");
    GradedGroups acc = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) acc = fold(acc, factors[i], deg + 1).groups;
    return acc.at(deg);
}

KunnethResult kunneth_h2n(const std::vector<std::string>& factors)
{
    if (factors.empty()) throw TopologyError("empty product");
    int n = 0;
    std::regex w(R"(w\((\d+);(-?\d+),(-?\d+)\))");
    for (const auto& f : factors) {
        std::smatch m;
        std::string s = normalize(f);
        if (!std::regex_match(s, m, w)) continue;
        int fn = (std::stoi(m[1]) + 1) / 4;
        if (n != 0 && fn != n) throw TopologyError("Aloff-Wallach factors of different dimension");
        n = fn;
    }
    if (n == 0) throw TopologyError("no Aloff-Wallach factor W(4n-1;p,q)");
    const int deg = 2 * n;
    std::vector<GradedGroups> groups;
    for (const auto& f : factors) groups.push_back(factor_cohomology(f, deg + 1));
    KunnethResult out;
    out.n = n;
    GradedGroups acc = groups[0];
    std::vector<BigInt> tor;
    for (std::size_t i = 1; i < groups.size(); ++i) {
        auto step = fold(acc, groups[i], deg + 1);
        // Tor terms landing in degree deg of the final product.
        tor.clear();
        for (int j = 0; j <= deg + 1; ++j) append_tor(tor, acc.at(j), groups[i].at(deg + 1 - j));
        acc = std::move(step.groups);
    }
    out.group = acc.at(deg);
    out.tor_part = make_group(tor);
    return out;
}

TauEnumeration distinct_tau_enumeration(int n, int bound)
{
    if (n < 2) throw TopologyError("n must be at least 2");
    if (bound < 3) throw TopologyError("bound must be at least 3");
    TauEnumeration out;
    out.n = n;
    out.bound = bound;
    for (long long p = 1; p < bound; ++p)
        for (long long q = 1; p + q <= bound; ++q) {
            if (std::gcd(p, q) != 1) continue;
            BigInt t = tau(n, p, q);
            out.entries.push_back({p, q, t});
            out.by_tau[t].emplace_back(p, q);
        }
    return out;
}

}  // namespace ricb
