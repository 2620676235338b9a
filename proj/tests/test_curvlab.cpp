#include <catch_amalgamated.hpp>

#include <json.hpp>
#include <random>

#include "ricb/curvlab.hpp"

using namespace ricb;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd gaussian(std::mt19937_64& rng, Eigen::Index n)
{
    std::normal_distribution<double> g;
    VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
    return v;
}

std::pair<VectorXd, VectorXd> orthonormal_pair(const CurvatureModel& model, VectorXd x, VectorXd y)
{
    x /= std::sqrt(model.inner(x, x));
    y -= model.inner(x, y) * x;
    y /= std::sqrt(model.inner(y, y));
    return {x, y};
}

std::shared_ptr<const TripleModel> shared(TripleModel t) { return std::make_shared<const TripleModel>(std::move(t)); }

double residual(const MatrixXd& basis, const VectorXd& v) { return (v - basis * (basis.transpose() * v)).norm(); }

// Max over basis pairs of the component of [a_i, b_j] outside `target`.
double bracket_leak(const LieAlgebra& g, const MatrixXd& a, const MatrixXd& b, const MatrixXd& target)
{
    double worst = 0;
    for (Eigen::Index i = 0; i < a.cols(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) worst = std::max(worst, residual(target, g.bracket(a.col(i), b.col(j))));
    return worst;
}

}  // namespace

TEST_CASE("structure constants")
{
    std::mt19937_64 rng(1);
    for (const auto& g : {su_algebra(2), su_algebra(3), lie_algebra(realize_pair("sp_u", {2}))}) {
        for (const auto& a : g.ad) CHECK((a + a.transpose()).norm() < 1e-12);
        for (int s = 0; s < 50; ++s) {
            VectorXd x = gaussian(rng, g.dim), y = gaussian(rng, g.dim), z = gaussian(rng, g.dim);
            VectorXd jac = g.bracket(x, g.bracket(y, z)) + g.bracket(y, g.bracket(z, x)) + g.bracket(z, g.bracket(x, y));
            CHECK(jac.norm() < 1e-10);
        }
    }
    CHECK(su_algebra(2).dim == 3);
    CHECK(abelian_algebra(2).bracket(VectorXd::Unit(2, 0), VectorXd::Unit(2, 1)).norm() == 0);
    CHECK_THROWS_AS(su_algebra(1), CurvatureError);
}

TEST_CASE("fat triples realize the expected homogeneous spaces")
{
    struct Expect {
        std::string name;
        int total, base;
    };
    std::vector<Expect> cases;
    for (int n = 2; n <= 4; ++n) {
        cases.push_back({"aloff_wallach:" + std::to_string(n) + ",1,1", 4 * n - 1, 4 * (n - 1)});
        cases.push_back({"aloff_wallach:" + std::to_string(n) + ",1,2", 4 * n - 1, 4 * (n - 1)});
        cases.push_back({"ptcp:" + std::to_string(n), 4 * n - 2, 4 * (n - 1)});
        cases.push_back({"hflag:" + std::to_string(n), 8 * n - 4, 8 * (n - 1)});
    }
    cases.push_back({"su6", 21, 16});
    cases.push_back({"so10", 23, 16});
    for (const auto& c : cases) {
        INFO(c.name);
        auto t = triple_by_name(c.name);
        CHECK(t.g.dim - t.h.cols() == c.total);
        CHECK(t.dim_p() == c.base);
        CHECK(t.dim_m() + t.h.cols() == t.k.cols());
        CHECK((t.h.transpose() * t.h - MatrixXd::Identity(t.h.cols(), t.h.cols())).norm() < 1e-10);
        for (Eigen::Index i = 0; i < t.m.cols(); ++i) CHECK(residual(t.k, t.m.col(i)) < 1e-10);
        CHECK((t.m.transpose() * t.h).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(bracket_leak(t.g, t.h, t.h, t.h) < 1e-10);
        CHECK(bracket_leak(t.g, t.k, t.k, t.k) < 1e-10);
        CHECK(bracket_leak(t.g, t.k, t.p, t.p) < 1e-10);
        CHECK(bracket_leak(t.g, t.p, t.p, t.k) < 1e-10);
    }
    CHECK(triple_by_name("W(11;1,2)").name == "aloff_wallach:3,1,2");
    CHECK(first_set_triples(4).size() == 14);
    CHECK_THROWS_AS(triple_by_name("aloff_wallach:2,2,4"), CurvatureError);
    CHECK_THROWS_AS(triple_by_name("aloff_wallach:2,1,-1"), CurvatureError);
    CHECK_THROWS_AS(triple_by_name("W(8;1,1)"), CurvatureError);
    CHECK_THROWS_AS(triple_by_name("e8"), CurvatureError);
    CHECK_THROWS_AS(triple_by_name("ptcp:x"), CurvatureError);
}

TEST_CASE("deformed metric scales k")
{
    auto tr = shared(triple_from_pair(realize_pair("su_so", {3})));
    for (double t : {0.5, 1.0, 2.0}) {
        GroupDeformation g(tr, t);
        for (Eigen::Index i = 0; i < tr->k.cols(); ++i) CHECK(g.inner(tr->k.col(i), tr->k.col(i)) == Catch::Approx(t / (1 + t)));
        for (Eigen::Index i = 0; i < tr->p.cols(); ++i) CHECK(g.inner(tr->p.col(i), tr->p.col(i)) == Catch::Approx(1.0));
        CHECK(std::abs(g.inner(tr->k.col(0), tr->p.col(0))) < 1e-15);
        // The lift projects back: -a + b = x.
        VectorXd x = VectorXd::LinSpaced(8, -1, 1);
        auto l = g.lift(x);
        CHECK((l.b - l.a - x).norm() < 1e-14);
    }
    CHECK_THROWS_AS(GroupDeformation(tr, 0.0), CurvatureError);
    CHECK_THROWS_AS(QuotientDeformation(tr, -1.0), CurvatureError);
}

TEST_CASE("deformed group curvature")
{
    auto tr = shared(triple_from_pair(realize_pair("su_so", {3})));
    std::mt19937_64 rng(2);

    // Two commuting directions of p.
    MatrixXd p = tr->p;
    MatrixXd a(tr->g.dim, 2);
    {
        VectorXd x = p * gaussian(rng, p.cols());
        Eigen::FullPivLU<MatrixXd> lu(tr->g.ad_of(x) * p);
        MatrixXd ker = p * lu.kernel();
        REQUIRE(ker.cols() == 2);
        a = ker;
    }
    GroupDeformation g(tr, 1.0);
    auto [x, y] = orthonormal_pair(g, a.col(0), a.col(1));
    CHECK(std::abs(sec_deformed_group(g, x, y)) < 1e-12);

    GroupDeformation far(tr, 1e3);
    for (int s = 0; s < 50; ++s) {
        VectorXd u = gaussian(rng, 8), v = gaussian(rng, 8);
        double bi = 0.25 * tr->g.bracket(u, v).squaredNorm();
        CHECK(std::abs(far.curv(u, v) - bi) <= 1e-2 * bi);
    }

    CHECK_THROWS_AS(sec_deformed_group(g, x, x), CurvatureError);
    CHECK_THROWS_AS(sec_deformed_group(g, VectorXd::Unit(3, 0), VectorXd::Unit(3, 1)), CurvatureError);
}

TEST_CASE("zero planes of the deformed metric are the commuting ones")
{
    for (double t : {0.5, 1.0, 2.0}) {
        GroupDeformation g(shared(triple_from_pair(realize_pair("su_so", {3}))), t);
        auto r = eschenburg_check(g, 10000, 100, 11);
        CHECK(r.samples == 10100);
        CHECK(r.mismatches == 0);
        CHECK(r.zero_planes == 100);
        CHECK(r.commuting == 100);
        CHECK(r.min_curv >= -1e-10);
    }
    GroupDeformation gr(shared(triple_from_pair(realize_pair("complex_grassmannian", {2, 2}))), 1.0);
    auto r = eschenburg_check(gr, 2000, 100, 3);
    CHECK(r.mismatches == 0);
    CHECK(r.zero_planes >= 100);
}

TEST_CASE("curvature forms are symmetric and quadratic")
{
    auto w = shared(triple_by_name("W(7;1,1)"));
    GroupDeformation g(w, 0.7);
    QuotientDeformation q(w, 0.7);
    ProductGroupMetric pr(su_algebra(2));
    DiagonalCheeger d(su_algebra(2), 1.3);
    std::mt19937_64 rng(4);
    for (const CurvatureModel* m : std::vector<const CurvatureModel*>{&g, &q, &pr, &d}) {
        INFO(m->name());
        for (int s = 0; s < 200; ++s) {
            VectorXd x = gaussian(rng, m->dim()), y = gaussian(rng, m->dim());
            double c = m->curv(x, y), a = gaussian(rng, 1)(0), b = gaussian(rng, 1)(0);
            CHECK(std::abs(m->curv(y, x) - c) <= 1e-10 * std::max(1.0, c));
            CHECK(std::abs(m->curv(x, a * x + b * y) - b * b * c) <= 1e-10 * std::max(1.0, b * b * c));
            CHECK(c >= -1e-10);
        }
    }
}

TEST_CASE("quotient metric on the Aloff-Wallach space")
{
    auto w = shared(triple_by_name("W(7;1,1)"));
    QuotientDeformation q(w, 1.0);
    GroupDeformation g(w, 1.0);
    REQUIRE(q.dim() == 7);
    std::mt19937_64 rng(5);
    MatrixXd ph = w->h * w->h.transpose();
    double min_q = 1e9, min_g = 1e9;
    for (int s = 0; s < 10000; ++s) {
        auto [x, y] = orthonormal_pair(q, gaussian(rng, 7), gaussian(rng, 7));
        double kq = sec_qt(q, x, y);
        VectorXd gx = q.to_g(x), gy = q.to_g(y);
        double kg = sec_deformed_group(g, gx, gy);
        min_q = std::min(min_q, kq);
        min_g = std::min(min_g, kg);
        CHECK(kq >= kg - 1e-10);
        // The second submersion G -> G/H adds 3/4 |A|^2, with the h component measured in <,>_t.
        double a = 0.75 * (1.0 / 2.0) * (ph * w->g.bracket(gx, gy)).squaredNorm();
        CHECK(std::abs(kq - (kg + a)) < 1e-10);
    }
    CHECK(min_q > 0);
    // Planes of h^perp stay positive in <,>_t when they are positive for q_t (k = 1).
    CHECK(min_g > 0);

    // A plane in an abelian subspace of p (rank two base): the group term vanishes, the total stays non-negative.
    auto w11 = shared(triple_by_name("W(11;1,1)"));
    QuotientDeformation q11(w11, 1.0);
    MatrixXd p = w11->p;
    VectorXd x0 = p * gaussian(rng, p.cols());
    Eigen::FullPivLU<MatrixXd> lu(w11->g.ad_of(x0) * p);
    MatrixXd ker = p * lu.kernel();
    REQUIRE(ker.cols() == 2);
    MatrixXd to_q = w11->hperp().transpose();
    auto [x, y] = orthonormal_pair(q11, to_q * ker.col(0), to_q * ker.col(1));
    CHECK(w11->g.bracket(q11.to_g(x), q11.to_g(y)).norm() < 1e-10);
    CHECK(GroupDeformation(w11, 1.0).curv(q11.to_g(x), q11.to_g(y)) < 1e-12);
    CHECK(sec_qt(q11, x, y) >= -1e-12);
}

TEST_CASE("fatness margins")
{
    for (const auto& name : first_set_triples(4)) {
        INFO(name);
        auto r = fatness_margin(triple_by_name(name), 100, 1);
        CHECK(r.fat);
        CHECK(r.margin > 1e-6);
        CHECK(!r.degenerate);
    }
    auto torus = fatness_margin(triple_by_name("torus"));
    CHECK(torus.margin < 1e-9);
    CHECK_FALSE(torus.fat);

    auto point_fiber = fatness_margin(triple_from_pair(realize_pair("su_so", {3})));
    CHECK(point_fiber.degenerate);
    CHECK(point_fiber.fat);

    auto a = fatness_margin(triple_by_name("W(7;1,1)"), 20, 9);
    auto b = fatness_margin(triple_by_name("W(7;1,1)"), 20, 9);
    CHECK(a.margin == b.margin);
    CHECK_THROWS_AS(fatness_margin(triple_by_name("torus"), 0), CurvatureError);
}

TEST_CASE("diagonal Cheeger deformation of S3 x S3")
{
    auto su2 = su_algebra(2);
    std::mt19937_64 rng(6);

    for (double lambda : {1e2, 1e3}) {
        DiagonalCheeger d(su2, lambda);
        for (int s = 0; s < 100; ++s) {
            VectorXd v = gaussian(rng, 6);
            CHECK(std::abs(d.inner(v, v) - v.squaredNorm()) <= 2 * v.squaredNorm() / lambda);
        }
    }

    DiagonalCheeger d(su2, 1.0);
    for (int s = 0; s < 1000; ++s) {
        VectorXd v = gaussian(rng, 6), w = gaussian(rng, 3);
        CHECK((d.kappa(d.orbit_projection(v)) - d.kappa(v)).norm() < 1e-10);
        VectorXd normal(6);
        normal << w, -w;
        CHECK(d.kappa(normal).norm() < 1e-10);
        CHECK(d.kappa(v).size() == 3);
    }

    // Planes whose kappa images are positively curved for Q stay positively curved.
    int implied = 0;
    for (int s = 0; s < 2000; ++s) {
        auto [u, v] = orthonormal_pair(d, gaussian(rng, 6), gaussian(rng, 6));
        double kq = 0.25 * su2.bracket(d.kappa(u), d.kappa(v)).squaredNorm();
        double k = diagonal_cheeger_curv(d, u, v);
        CHECK(k >= -1e-10);
        if (kq > 1e-9) {
            ++implied;
            CHECK(k > 0);
        }
    }
    CHECK(implied > 1000);

    ProductGroupMetric pr(su2);
    CHECK_THROWS_AS(diagonal_cheeger_curv(pr, VectorXd::Unit(6, 0), VectorXd::Unit(6, 1)), CurvatureError);
    CHECK_THROWS_AS(DiagonalCheeger(su2, 0.0), CurvatureError);
}

TEST_CASE("Ric_k minimization")
{
    auto su2 = su_algebra(2);
    ProductGroupMetric pr(su2, "S^3");
    SamplerConfig cfg;
    cfg.samples = 2000;
    cfg.restarts = 4;

    auto split = split_flag(pr, 3);
    CHECK(split.value == 0);
    auto found = ric_k_min(pr, 3, cfg, {split});
    CHECK(std::abs(found.value) < 1e-12);

    DiagonalCheeger d(su2, 1.0, "S^3");
    cfg.samples = 100000;
    cfg.restarts = 20;
    auto pos = ric_k_min(d, 2, cfg);
    CHECK(pos.value > 1e-6);
    MatrixXd all(6, 3);
    all << pos.x, pos.frame;
    CHECK((all.transpose() * d.gram() * all - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(pos.value == Catch::Approx(pos.planes[0] + pos.planes[1]).epsilon(1e-12));

    auto w = shared(triple_by_name("W(7;1,1)"));
    QuotientDeformation q(w, 1.0);
    CHECK(ric_k_min(q, 1, cfg).value > 1e-6);

    // Seeded and independent of the thread count.
    cfg.samples = 5000;
    cfg.restarts = 3;
    auto a = ric_k_min(d, 2, cfg);
    cfg.jobs = 4;
    auto b = ric_k_min(d, 2, cfg);
    CHECK(a.value == b.value);
    CHECK(a.x == b.x);

    CHECK_THROWS_AS(ric_k_min(d, 0, cfg), CurvatureError);
    CHECK_THROWS_AS(ric_k_min(d, 6, cfg), CurvatureError);
    cfg.samples = 0;
    CHECK_THROWS_AS(ric_k_min(d, 2, cfg), CurvatureError);
    CHECK_THROWS_AS(split_flag(d, 2), CurvatureError);
}

TEST_CASE("flag samples serialize")
{
    ProductGroupMetric pr(su_algebra(2), "S^3");
    auto j = nlohmann::json::parse(split_flag(pr, 2).to_json());
    CHECK(j["schema"] == "ricb.flag");
    CHECK(j["k"] == 2);
    CHECK(j["mode"] == "product");
    CHECK(j["frame"].size() == 2);
    CHECK(j["x"].size() == 6);
    CHECK(j["value"] == 0.0);
    CHECK_THROWS_AS(evaluate_flag(pr, VectorXd::Unit(6, 0), MatrixXd::Zero(6, 1)), CurvatureError);
}

TEST_CASE("projection audit of zero flags")
{
    ProductGroupMetric pr(su_algebra(2), "S^3");
    auto split = split_flag(pr, 3);
    auto audit = flag_projection_audit(split, 1, 3);
    CHECK(audit.ok);
    CHECK(audit.p1_line == 1);
    CHECK(audit.p1_flag == 1);
    CHECK(audit.p2_line == 0);
    CHECK(audit.dim_flag == 4);

    // Fault injection: claiming Ric_0 > 0 on the factors contradicts the flag.
    auto broken = flag_projection_audit(split, 0, 3);
    CHECK_FALSE(broken.ok);
    CHECK_FALSE(broken.failures.empty());

    DiagonalCheeger d(su_algebra(2), 1.0);
    SamplerConfig cfg;
    cfg.samples = 20000;
    auto best = ric_k_min(d, 2, cfg);
    CHECK(best.value > 1e-6);  // no zero flag to audit
    CHECK_THROWS_AS(flag_projection_audit(best, 1, 3), CurvatureError);

    auto w = shared(triple_by_name("W(7;1,1)"));
    QuotientDeformation q(w, 1.0);
    auto flat = ric_k_min(q, 1, cfg);
    flat.value = 0;
    CHECK_THROWS_AS(flag_projection_audit(flat, 1, 3), CurvatureError);
}
