#include <catch_amalgamated.hpp>

#include <random>

#include "ricb/pairlab.hpp"
#include "ricb/symcat.hpp"

using namespace ricb;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Case {
    std::string kind;
    std::vector<int> params;
};

const std::vector<Case>& classical_cases()
{
    static const std::vector<Case> cases{
        {"real_grassmannian", {2, 3}},    {"real_grassmannian", {2, 4}},    {"real_grassmannian", {3, 3}},
        {"real_grassmannian", {1, 4}},    {"complex_grassmannian", {1, 2}}, {"complex_grassmannian", {2, 2}},
        {"complex_grassmannian", {2, 3}}, {"quaternionic_grassmannian", {1, 2}}, {"su_so", {3}},
        {"su_so", {4}},                   {"su_sp", {2}},                   {"su_sp", {3}},
        {"sp_u", {2}},                    {"sp_u", {3}},                    {"so_u", {3}},
        {"so_u", {4}},                    {"group_su", {2}},                {"group_su", {3}},
        {"group_so", {5}},                {"group_sp", {2}},
    };
    return cases;
}

VectorXd random_unit(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> g;
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = g(rng);
    return v / v.norm();
}

}  // namespace

TEST_CASE("realization dimensions")
{
    auto gr = realize_pair("real_grassmannian", {2, 3});
    CHECK(gr.dim_g() == 10);
    CHECK(gr.dim_p() == 6);
    CHECK(maximal_abelian(gr).cols() == 2);

    auto su2 = realize_pair("group_su", {2});
    CHECK(su2.dim_p() == 3);
    CHECK(su2.dim_h() == 3);

    auto tri = realize_pair("triple_diagonal", {});
    CHECK(tri.dim_p() == 6);
    CHECK_FALSE(tri.symmetric);

    CHECK(realize_pair("quaternionic_grassmannian", {1, 2}).dim_p() == 8);
    CHECK(realize_pair("su_sp", {2}).dim_p() == 5);
    CHECK(realize_pair("sp_u", {2}).dim_p() == 6);
    CHECK(realize_pair("so_u", {3}).dim_p() == 6);
    CHECK(realize_pair("su_so", {3}).dim_p() == 5);

    CHECK_THROWS_AS(realize_pair("e8", {}), PairError);
    CHECK_THROWS_AS(realize_pair("su_so", {1}), PairError);
    CHECK_THROWS_AS(realize_pair("group_su", {2}, {1.0}), PairError);
    CHECK_THROWS_AS(realize_pair("group_su", {12}), PairError);
}

TEST_CASE("realizations satisfy the algebra invariants")
{
    auto check = [](const SymmetricPairRealization& pair) {
        INFO(pair.label);
        auto e = check_invariants(pair);
        CHECK(e.g_closed < 1e-12);
        CHECK(e.h_closed < 1e-12);
        CHECK(e.hp_in_p < 1e-12);
        CHECK(e.ad_invariance < 1e-12);
        CHECK(e.jacobi < 1e-10);
        if (pair.symmetric) CHECK(e.pp_in_h < 1e-12);
        for (int i = 0; i < pair.dim_p(); ++i)
            for (int j = 0; j < pair.dim_p(); ++j) CHECK(std::abs(pair.inner(pair.p_basis[i], pair.p_basis[j]) - (i == j)) < 1e-12);
        for (int i = 0; i < pair.dim_h(); ++i)
            for (int j = 0; j < pair.dim_p(); ++j) CHECK(std::abs(pair.inner(pair.h_basis[i], pair.p_basis[j])) < 1e-12);
    };
    for (const auto& c : classical_cases()) check(realize_pair(c.kind, c.params));
    auto tri = realize_pair("triple_diagonal", {});
    check(tri);
    CHECK(check_invariants(tri).pp_in_h > 1e-3);
    check(realize_pair("group_su", {2}, {0.5, 2.0}));
}

TEST_CASE("centralizer dimensions")
{
    auto pair = realize_pair("su_so", {3});
    MatrixXd a = maximal_abelian(pair);
    REQUIRE(a.cols() == 2);
    auto generic = centralizer_dim(pair, pair.from_p(a * VectorXd::Random(2)));
    CHECK(generic.dim_zp == 2);
    CHECK(generic.stable);

    auto roots = restricted_roots(pair, a);
    REQUIRE(roots.size() == 3);
    for (const auto& r : roots) CHECK(r.multiplicity == 1);
    // A point on one root hyperplane.
    VectorXd n = roots[0].alpha;
    VectorXd face(2);
    face << -n(1), n(0);
    auto rep = centralizer_dim(pair, pair.from_p(a * face));
    CHECK(rep.dim_zp == 3);
    CHECK(rep.stable);

    auto tri = realize_pair("triple_diagonal", {});
    CMat y = CMat::Zero(2, 2);
    y(0, 0) = std::complex<double>(0, 1);
    y(1, 1) = std::complex<double>(0, -1);
    CMat x = CMat::Zero(6, 6);
    x.block(2, 2, 2, 2) = y;
    x.block(4, 4, 2, 2) = -y;
    CHECK(centralizer_dim(tri, x).dim_zp == 2);

    CHECK_THROWS_AS(centralizer_dim(pair, CMat::Zero(3, 3)), PairError);
    CHECK_THROWS_AS(centralizer_dim(pair, pair.h_basis[0]), PairError);
}

TEST_CASE("brute force b equals the combinatorial value")
{
    for (const auto& c : classical_cases()) {
        auto pair = realize_pair(c.kind, c.params);
        INFO(pair.label);
        auto expected = b_of_spec(pair.space_spec);
        REQUIRE(expected.exact());
        auto res = brute_force_b(pair, 1, 200);
        CHECK(res.b == expected.lo);
        CHECK(res.unstable == 0);
        CHECK(res.witness.dim_zp == res.b);
        CHECK(res.witness.face_label != "random");
    }
    auto tri = brute_force_b(realize_pair("triple_diagonal", {}), 1, 200);
    CHECK(tri.b == 2);
    CHECK(realize_pair("group_su", {2}).space_spec == "SU(2)");
    CHECK(brute_force_b(realize_pair("group_su", {2})).b == 1);
}

TEST_CASE("restricted root multiplicities fill p")
{
    for (const auto& c : classical_cases()) {
        auto pair = realize_pair(c.kind, c.params);
        MatrixXd a = maximal_abelian(pair);
        int total = static_cast<int>(a.cols());
        for (const auto& r : restricted_roots(pair, a)) total += r.multiplicity;
        CHECK(total == pair.dim_p());
    }
}

TEST_CASE("centralizers do not depend on the normal metric")
{
    for (std::string kind : {"group_su", "group_sp"}) {
        auto base = realize_pair(kind, {2});
        int b = brute_force_b(base, 1, 100).b;
        for (double s1 : {0.5, 1.0, 2.0})
            for (double s2 : {0.5, 1.0, 2.0}) {
                auto scaled = realize_pair(kind, {2}, {s1, s2});
                CHECK(brute_force_b(scaled, 1, 100).b == b);
                CHECK(maximal_abelian(scaled).cols() == maximal_abelian(base).cols());
            }
    }
    auto tri = realize_pair("triple_diagonal", {}, {0.5, 1.0, 2.0});
    CHECK(brute_force_b(tri, 1, 100).b == 2);
}

TEST_CASE("centralizer lies in the normal space of the orbit")
{
    std::mt19937_64 rng(11);
    for (const auto& c : classical_cases()) {
        auto pair = realize_pair(c.kind, c.params);
        for (int s = 0; s < 10; ++s) {
            CMat x = pair.from_p(random_unit(rng, pair.dim_p()));
            auto rep = centralizer_dim(pair, x);
            for (int k = 0; k < rep.kernel.cols(); ++k) {
                CMat z = pair.from_p(rep.kernel.col(k));
                for (const auto& h : pair.h_basis) CHECK(std::abs(pair.inner(z, bracket(h, x))) < 1e-9);
            }
        }
    }
}

TEST_CASE("centralizer in g bounds the centralizer in p")
{
    std::mt19937_64 rng(5);
    auto tri = realize_pair("triple_diagonal", {});
    for (const auto& pair : {realize_pair("su_so", {3}), realize_pair("complex_grassmannian", {2, 3}), tri}) {
        MatrixXd a = maximal_abelian(pair);
        for (int s = 0; s < 100; ++s) {
            // Mix generic points with points of a, where the centralizers jump.
            VectorXd c = s % 2 ? random_unit(rng, pair.dim_p()) : VectorXd(a * random_unit(rng, static_cast<int>(a.cols())));
            CMat x = pair.from_p(c);
            int zg = centralizer_dim_g(pair, x);
            int zp = centralizer_dim(pair, x).dim_zp;
            CHECK(zg >= 2 * zp + pair.dim_h() - pair.dim_p());
        }
    }
}

TEST_CASE("normal sectional curvature")
{
    auto pair = realize_pair("complex_grassmannian", {2, 2});
    MatrixXd a = maximal_abelian(pair);
    REQUIRE(a.cols() == 2);
    CHECK(std::abs(normal_sec(pair, pair.from_p(a.col(0)), pair.from_p(a.col(1)))) < 1e-12);

    std::mt19937_64 rng(3);
    for (int s = 0; s < 50; ++s) {
        VectorXd u = random_unit(rng, pair.dim_p()), v = random_unit(rng, pair.dim_p());
        v -= u.dot(v) * u;
        v.normalize();
        CMat x = pair.from_p(u), y = pair.from_p(v);
        double k = normal_sec(pair, x, y);
        CHECK(k >= 0);
        if (bracket(x, y).norm() > 1e-6) CHECK(k > 0);
    }

    // Group case: p = {(X, -X)/sqrt 2} and the curvature is twice the bi-invariant 1/4 |[X, Y]|^2.
    auto grp = realize_pair("group_su", {3});
    for (int s = 0; s < 20; ++s) {
        VectorXd u = random_unit(rng, grp.dim_p()), v = random_unit(rng, grp.dim_p());
        v -= u.dot(v) * u;
        v.normalize();
        CMat x = grp.from_p(u), y = grp.from_p(v);
        CMat X = std::sqrt(2.0) * x.topLeftCorner(3, 3), Y = std::sqrt(2.0) * y.topLeftCorner(3, 3);
        double bi = 0.25 * bracket(X, Y).squaredNorm();
        CHECK(normal_sec(grp, x, y) == Catch::Approx(2 * bi).epsilon(1e-10));
    }
    CHECK_THROWS_AS(normal_sec(pair, pair.p_basis[0], pair.p_basis[0]), PairError);
}
