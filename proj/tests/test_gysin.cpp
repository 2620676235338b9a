#include <catch_amalgamated.hpp>

#include <random>

#include "ricb/gysin.hpp"

using namespace ricb;

namespace {

// Cup product with e = -q x + p y in degree 2n of Z[x,y] / (x^n + x^{n-1} y + ... + y^n, ...),
// in the bases x^{n-1-j} y^j (source) and x^{n-1-i} y^{i+1} (target). Polynomials of degree n
// are stored by their y exponent.
IntegerMatrix cup_with_euler(int n, long long p, long long q)
{
    IntegerMatrix m(n, n);
    for (int j = 0; j < n; ++j) {
        std::vector<BigInt> poly(n + 1, 0);
        poly[j] += -q;     // x * x^{n-1-j} y^j
        poly[j + 1] += p;  // y * x^{n-1-j} y^j
        // x^n = -(x^{n-1} y + ... + y^n)
        BigInt lead = poly[0];
        poly[0] = 0;
        for (int i = 1; i <= n; ++i) poly[i] -= lead;
        for (int i = 1; i <= n; ++i) m.at(i - 1, j) = poly[i];
    }
    return m;
}

BigInt closed_form(int n, long long p, long long q)
{
    BigInt s = 0;
    for (int i = 0; i <= n; ++i) s += boost::multiprecision::pow(BigInt(p), n - i) * boost::multiprecision::pow(BigInt(q), i);
    return s;
}

IntegerMatrix diagonal(const std::vector<BigInt>& d, int rows, int cols)
{
    IntegerMatrix m(rows, cols);
    for (std::size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

void check_snf(const IntegerMatrix& m)
{
    auto s = smith_normal_form(m);
    CHECK(s.left * m * s.right == diagonal(s.diagonal, m.rows(), m.cols()));
    CHECK(abs(s.left.determinant()) == 1);
    CHECK(abs(s.right.determinant()) == 1);
    for (std::size_t i = 0; i < s.diagonal.size(); ++i) {
        CHECK(s.diagonal[i] >= 0);
        if (i + 1 < s.diagonal.size() && s.diagonal[i] != 0) CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
        if (i + 1 < s.diagonal.size() && s.diagonal[i] == 0) CHECK(s.diagonal[i + 1] == 0);
    }
    if (m.rows() == m.cols()) {
        BigInt prod = 1;
        for (const auto& d : s.diagonal) prod *= d;
        CHECK(prod == abs(m.determinant()));
    }
}

}  // namespace

TEST_CASE("euler matrix stencil")
{
    CHECK(euler_matrix(2, 1, 1) == IntegerMatrix{{2, -1}, {1, 1}});
    CHECK(euler_matrix(3, 1, 2) == IntegerMatrix{{3, -2, 0}, {2, 1, -2}, {2, 0, 1}});
    CHECK_THROWS_AS(euler_matrix(3, 2, 4), TopologyError);
    CHECK_THROWS_AS(euler_matrix(1, 1, 1), TopologyError);
    CHECK_NOTHROW(euler_matrix(3, 1, 0));
    for (int n = 2; n <= 6; ++n)
        for (long long p = -4; p <= 4; ++p)
            for (long long q = -4; q <= 4; ++q)
                if (std::gcd(p, q) == 1) CHECK(euler_matrix(n, p, q) == cup_with_euler(n, p, q));
}

TEST_CASE("tau values")
{
    CHECK(tau(2, 1, 1) == 3);
    CHECK(tau(3, 1, 1) == 4);
    CHECK(tau(2, 1, 2) == 7);
    CHECK(tau(2, 1, -1) == 1);
    CHECK(tau(3, 1, -1) == 0);
    CHECK(tau(5, 2, 3) == tau(5, 3, 2));
}

TEST_CASE("determinant equals the closed form")
{
    for (int n = 2; n <= 10; ++n)
        for (long long p = -20; p <= 20; ++p)
            for (long long q = -20; q <= 20; ++q) {
                auto det = euler_stencil(n, p, q).determinant();
                if (det != closed_form(n, p, q)) FAIL("n=" << n << " p=" << p << " q=" << q);
            }
    CHECK(IntegerMatrix{{0, 1}, {1, 0}}.determinant() == -1);
    CHECK(IntegerMatrix{{1, 2}, {2, 4}}.determinant() == 0);
}

TEST_CASE("smith normal form")
{
    CHECK(smith_normal_form(IntegerMatrix{{2, -1}, {1, 1}}).diagonal == std::vector<BigInt>{1, 3});
    CHECK(smith_normal_form(IntegerMatrix::identity(4)).diagonal == std::vector<BigInt>(4, 1));
    CHECK(smith_normal_form(IntegerMatrix{{2, 0}, {0, 2}}).diagonal == std::vector<BigInt>{2, 2});
    CHECK(smith_normal_form(IntegerMatrix{{2, 0}, {0, 3}}).diagonal == std::vector<BigInt>{1, 6});
    CHECK(smith_normal_form(IntegerMatrix{{0, 0}, {0, 0}}).diagonal == std::vector<BigInt>{0, 0});

    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> entry(-9, 9), size(1, 5);
    for (int trial = 0; trial < 200; ++trial) {
        int r = size(rng), c = size(rng);
        IntegerMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m.at(i, j) = entry(rng) * (trial % 3 == 0 ? 6 : 1);
        check_snf(m);
    }
    for (int n = 2; n <= 6; ++n) check_snf(euler_matrix(n, 3, 5));
}

TEST_CASE("aloff wallach cohomology")
{
    auto w = aloff_wallach_cohomology(2, 1, 1);
    CHECK(w.groups.at(0) == Group{1, {}});
    CHECK(w.groups.at(1) == Group{});
    CHECK(w.groups.at(2) == Group{1, {}});
    CHECK(w.groups.at(3) == Group{});
    CHECK(w.groups.at(4) == Group{0, {3}});
    CHECK(w.groups.to_json() ==
          R"({"H0":{"rank":1,"torsion":[]},"H1":{"rank":0,"torsion":[]},"H2":{"rank":1,"torsion":[]},"H3":{"rank":0,"torsion":[]},"H4":{"rank":0,"torsion":[3]}})");

    CHECK(aloff_wallach_cohomology(2, 1, 2).groups.at(4) == Group{0, {7}});
    auto w3 = aloff_wallach_cohomology(3, 1, 1);
    CHECK(w3.groups.at(6).torsion_order() == 4);
    CHECK(w3.groups.at(6).rank == 0);

    for (int n = 2; n <= 5; ++n)
        for (long long p = 1; p <= 7; ++p)
            for (long long q = 1; q <= 7; ++q) {
                if (std::gcd(p, q) != 1) continue;
                auto g = aloff_wallach_cohomology(n, p, q).groups;
                for (int k = 1; k < n; ++k) {
                    CHECK(g.at(2 * k) == Group{1, {}});
                    CHECK(g.at(2 * k - 1) == Group{});
                }
                CHECK(g.at(2 * n - 1) == Group{});
                CHECK(g.at(2 * n).rank == 0);
                CHECK(g.at(2 * n).torsion_order() == tau(n, p, q));
            }

    CHECK_THROWS_AS(aloff_wallach_cohomology(2, 1, -1), TopologyError);
    auto flagged = aloff_wallach_cohomology(3, 1, -1, true);
    CHECK(flagged.nonpositive);
    CHECK(flagged.groups.at(6).rank == 1);
}

TEST_CASE("kunneth in the middle degree")
{
    auto ww = kunneth_h2n({"W(7;1,1)", "W(7;1,1)"});
    CHECK(ww.group == Group{1, {3, 3}});
    CHECK(ww.tor_part == Group{});
    for (int n = 2; n <= 5; ++n) {
        std::string w = "W(" + std::to_string(4 * n - 1) + ";1,2)";
        auto t = tau(n, 1, 2);
        CHECK(kunneth_h2n({w, w}).group == Group{n - 1, {t, t}});
        // H^0(W) (x) H^{2n}(PT) contributes n, the lower W degrees contribute 2 + 3 + ... + n.
        CHECK(kunneth_h2n({w, "PTCP^" + std::to_string(n)}).group == Group{n + (n * (n + 1) / 2 - 1), {t}});
        auto gr = kunneth_h2n({w, "GrC(2," + std::to_string(n + 1) + ")"});
        CHECK(gr.group.torsion == std::vector<BigInt>{t});
        CHECK(gr.tor_part == Group{});
    }
    CHECK(kunneth_h2n({"W(7;1,1)", "P_C T CP^2"}).group == Group{4, {3}});
    CHECK(kunneth_h2n({"W(7;1,1)", "S^3"}).group == Group{0, {3}});
    CHECK(kunneth_h2n({"W(7;1,1)", "CP^2"}).group.torsion == std::vector<BigInt>{3});
    CHECK_THROWS_AS(kunneth_h2n({"CP^2"}), TopologyError);
    CHECK_THROWS_AS(kunneth_h2n({"W(7;1,1)", "E8"}), TopologyError);
    CHECK_THROWS_AS(kunneth_h2n({"W(7;1,1)", "W(11;1,1)"}), TopologyError);
}

TEST_CASE("kunneth detects tor terms")
{
    GradedGroups a;
    a.degree[0] = Group{1, {}};
    a.degree[3] = Group{0, {2}};
    CHECK(kunneth({a, a}, 3) == Group{0, {2, 2}});
    CHECK(kunneth({a, a}, 5) == Group{0, {2}});
    CHECK(kunneth({a, a}, 6) == Group{0, {2}});
}

TEST_CASE("distinct tau enumeration")
{
    auto small = distinct_tau_enumeration(2, 10);
    REQUIRE(small.by_tau.count(3));
    CHECK(small.by_tau.at(3) == std::vector<std::pair<long long, long long>>{{1, 1}});
    CHECK(small.by_tau.at(7) == std::vector<std::pair<long long, long long>>{{1, 2}, {2, 1}});
    CHECK(distinct_tau_enumeration(2, 50).distinct() >= 30);
    for (int n = 2; n <= 6; ++n) {
        auto e = distinct_tau_enumeration(n, 20);
        for (const auto& x : e.entries) CHECK(tau(n, x.q, x.p) == x.tau);
        for (long long q = 1; q < 19; ++q) CHECK(tau(n, 1, q) < tau(n, 1, q + 1));
    }
    CHECK_THROWS_AS(distinct_tau_enumeration(2, 2), TopologyError);
}
