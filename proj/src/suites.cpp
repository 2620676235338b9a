#include "ricb/suites.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ricb/curvlab.hpp"
#include "ricb/gysin.hpp"
#include "ricb/pairlab.hpp"
#include "ricb/symcat.hpp"

namespace ricb {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const SpaceCatalog& spaces()
{
    static const SpaceCatalog s(Catalog::embedded(), 12, 12);
    return s;
}

std::string num(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Report pick(const Report& src, const std::string& suite, const std::vector<std::string>& ids)
{
    Report r{suite, {}};
    for (const auto& id : ids)
        if (const auto* c = src.find(id)) r.checks.push_back(*c);
    return r;
}

BigInt closed_form_tau(int n, long long p, long long q)
{
    BigInt s = 0;
    for (int i = 0; i <= n; ++i) s += boost::multiprecision::pow(BigInt(p), n - i) * boost::multiprecision::pow(BigInt(q), i);
    return s;
}

VectorXd gaussian(std::mt19937_64& rng, Eigen::Index n)
{
    std::normal_distribution<double> g;
    VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
    return v;
}

std::pair<VectorXd, VectorXd> orthonormal_pair(const CurvatureModel& m, VectorXd x, VectorXd y)
{
    x /= std::sqrt(m.inner(x, x));
    y -= m.inner(x, y) * x;
    y /= std::sqrt(m.inner(y, y));
    return {x, y};
}

}  // namespace

Report suite_tables()
{
    return pick(verify_tables(spaces()), "tables", {"table1", "table2", "table3"});
}

Report suite_observations()
{
    return verify_observations(spaces());
}

Report suite_oracle(const SuiteOptions& opts)
{
    struct Pair {
        std::string kind;
        std::vector<int> params;
    };
    static const std::vector<Pair> classical{
        {"real_grassmannian", {2, 3}}, {"real_grassmannian", {2, 4}}, {"real_grassmannian", {3, 3}}, {"real_grassmannian", {1, 4}},
        {"complex_grassmannian", {1, 2}}, {"complex_grassmannian", {2, 2}}, {"complex_grassmannian", {2, 3}},
        {"quaternionic_grassmannian", {1, 2}}, {"su_so", {3}}, {"su_so", {4}}, {"su_sp", {2}}, {"su_sp", {3}},
        {"sp_u", {2}}, {"sp_u", {3}}, {"so_u", {3}}, {"so_u", {4}},
        {"group_su", {2}}, {"group_su", {3}}, {"group_so", {5}}, {"group_sp", {2}},
    };
    Report rep{"oracle", {}};
    CheckResult c{"oracle_pairs", "brute-force centralizer maximum equals the combinatorial b", true, {}, {}};
    int matched = 0, symmetric = 0;
    for (const auto& p : classical) {
        auto pair = realize_pair(p.kind, p.params);
        auto expected = b_of_spec(pair.space_spec);
        auto got = brute_force_b(pair, opts.seed);
        if (!expected.exact()) {
            c.fail(pair.label + ": no exact combinatorial value");
            continue;
        }
        if (c.expect(got.b == expected.lo && got.unstable == 0,
                     pair.label + ": brute force " + std::to_string(got.b) + ", expected " + std::to_string(expected.lo)))
            ++matched;
        if (pair.symmetric && got.rank <= 4 && p.kind.rfind("group_", 0) != 0) ++symmetric;
    }
    // (SU(2)^3, diag SU(2)) is the normal homogeneous space with b = 2.
    auto tri = brute_force_b(realize_pair("triple_diagonal", {}), opts.seed);
    if (c.expect(tri.b == 2, "SU(2)^3/diag: brute force " + std::to_string(tri.b) + ", expected 2")) ++matched;
    c.expect(symmetric >= 8, "fewer than 8 classical symmetric pairs checked");
    c.detail = std::to_string(matched) + "/" + std::to_string(classical.size() + 1) + " pairs";
    rep.checks.push_back(c);
    return rep;
}

Report suite_topology()
{
    Report rep{"topology", {}};

    CheckResult t{"tau", "tau_2(1,1) = 3", true, {}, {}};
    t.expect(tau(2, 1, 1) == 3, "tau_2(1,1) = " + tau(2, 1, 1).str());
    rep.checks.push_back(t);

    CheckResult s{"snf", "H^4(W^7_{1,1}) = Z/3 from the Smith normal form", true, {}, {}};
    auto snf = smith_normal_form(euler_matrix(2, 1, 1)).diagonal;
    s.expect(snf == std::vector<BigInt>{1, 3}, "invariant factors of T_2(1,1) are not (1, 3)");
    auto h4 = aloff_wallach_cohomology(2, 1, 1).groups.at(4);
    s.expect(h4 == Group{0, {3}}, "H^4 = " + h4.to_string());
    rep.checks.push_back(s);

    CheckResult d{"determinant", "det T_n(p,q) = p^n + ... + q^n for n <= 10, |p|,|q| <= 20", true, {}, {}};
    int count = 0;
    for (int n = 2; n <= 10; ++n)
        for (long long p = -20; p <= 20; ++p)
            for (long long q = -20; q <= 20; ++q) {
                ++count;
                auto det = euler_stencil(n, p, q).determinant();
                if (det != closed_form_tau(n, p, q))
                    d.fail("n=" + std::to_string(n) + " p=" + std::to_string(p) + " q=" + std::to_string(q));
            }
    d.detail = std::to_string(count) + " matrices";
    rep.checks.push_back(d);

    CheckResult e{"enumeration", "distinct_tau_enumeration(2, 50) has >= 30 distinct values", true, {}, {}};
    auto en = distinct_tau_enumeration(2, 50);
    e.expect(en.distinct() >= 30, std::to_string(en.distinct()) + " distinct values");
    e.detail = std::to_string(en.distinct()) + " distinct";
    rep.checks.push_back(e);

    CheckResult k{"kunneth", "H^{2n} torsion of the W products is Gamma or Gamma + Gamma", true, {}, {}};
    for (int n = 2; n <= 5; ++n) {
        std::string w = "W(" + std::to_string(4 * n - 1) + ";1,2)";
        BigInt g = tau(n, 1, 2);
        auto ww = kunneth_h2n({w, w});
        k.expect(ww.group.torsion == std::vector<BigInt>{g, g}, w + " x " + w + ": " + ww.group.to_string());
        auto wp = kunneth_h2n({w, "PTCP^" + std::to_string(n)});
        k.expect(wp.group.torsion == std::vector<BigInt>{g}, w + " x PTCP: " + wp.group.to_string());
        k.expect(wp.tor_part == Group{}, w + " x PTCP: nonzero Tor part");
    }
    rep.checks.push_back(k);
    return rep;
}

Report suite_sampling(const SuiteOptions& opts)
{
    Report rep{"curvature", {}};
    SamplerConfig cfg;
    cfg.samples = opts.budget;
    cfg.restarts = 20;
    cfg.seed = opts.seed;
    cfg.jobs = opts.jobs;
    std::mt19937_64 rng(opts.seed);

    CheckResult esch{"eschenburg", "SU(3)/SO(3): zero planes of <,>_t are exactly the commuting ones, t = 0.5, 1, 2", true, {}, {}};
    auto su3 = std::make_shared<const TripleModel>(triple_from_pair(realize_pair("su_so", {3})));
    int samples = 0;
    for (double t : {0.5, 1.0, 2.0}) {
        auto r = eschenburg_check(GroupDeformation(su3, t), 10000, 100, opts.seed);
        samples += r.samples;
        esch.expect(r.mismatches == 0, "t=" + num(t) + ": " + std::to_string(r.mismatches) + " mismatches");
        esch.expect(r.zero_planes >= 100, "t=" + num(t) + ": constructed commuting pairs not flat");
    }
    esch.detail = std::to_string(samples) + " pairs";
    rep.checks.push_back(esch);

    auto w7 = std::make_shared<const TripleModel>(triple_by_name("W(7;1,1)"));
    QuotientDeformation qt(w7, 1.0);
    GroupDeformation gt(w7, 1.0);
    CheckResult w{"w7_qt", "W^7_{1,1}, q_1: sampled and optimized min sec > 1e-6", true, {}, {}};
    auto wmin = ric_k_min(qt, 1, cfg);
    w.expect(wmin.value > 1e-6, "min sec " + num(wmin.value));
    w.detail = "min " + num(wmin.value) + " over " + std::to_string(cfg.samples) + " flags";
    rep.checks.push_back(w);

    auto su2 = su_algebra(2);
    ProductGroupMetric product(su2, "S^3");
    CheckResult ps{"product_split", "S^3 x S^3 product: Ric_3 minimum is 0 at the split flag", true, {}, {}};
    auto split = split_flag(product, 3);
    auto pmin = ric_k_min(product, 3, cfg, {split});
    ps.expect(std::abs(split.value) <= 1e-12, "split flag value " + num(split.value));
    ps.expect(std::abs(pmin.value) <= 1e-12, "minimum " + num(pmin.value));
    auto audit = flag_projection_audit(split, 1, 3);
    ps.expect(audit.ok, "projection audit failed on the split flag");
    rep.checks.push_back(ps);

    DiagonalCheeger diag(su2, 1.0, "S^3");
    CheckResult dc{"diagonal", "S^3 x S^3 diagonal Cheeger (lambda = 1): Ric_2 min > 1e-6", true, {}, {}};
    auto dmin = ric_k_min(diag, 2, cfg);
    dc.expect(dmin.value > 1e-6, "min Ric_2 " + num(dmin.value));
    dc.detail = "min " + num(dmin.value) + " over " + std::to_string(cfg.samples) + " flags";
    rep.checks.push_back(dc);

    CheckResult on{"oneill", "O'Neill monotonicity q_t >= <,>_t on h^perp, all sampled curvatures >= -1e-10", true, {}, {}};
    double worst_gap = 0, worst_neg = 0;
    std::vector<const CurvatureModel*> models{&qt, &gt, &product, &diag};
    for (int s = 0; s < 10000; ++s) {
        auto [x, y] = orthonormal_pair(qt, gaussian(rng, qt.dim()), gaussian(rng, qt.dim()));
        double kq = qt.curv(x, y), kg = gt.curv(qt.to_g(x), qt.to_g(y));
        worst_gap = std::min(worst_gap, kq - kg);
        for (const auto* m : models) {
            auto [u, v] = orthonormal_pair(*m, gaussian(rng, m->dim()), gaussian(rng, m->dim()));
            worst_neg = std::min(worst_neg, m->curv(u, v));
        }
    }
    for (const auto* f : {&wmin, &pmin, &dmin})
        for (double p : f->planes) worst_neg = std::min(worst_neg, p);
    on.expect(worst_gap >= -1e-10, "q_t below <,>_t by " + num(-worst_gap));
    on.expect(worst_neg >= -1e-10, "negative curvature " + num(worst_neg));
    on.detail = "10000 planes per model";
    rep.checks.push_back(on);
    return rep;
}

Report suite_fatness(const SuiteOptions& opts)
{
    Report rep{"fatness", {}};
    CheckResult fat{"fatness", "first-set triples with n <= 4 have margin > 1e-6", true, {}, {}};
    double smallest = 1e9;
    auto names = first_set_triples(4);
    for (const auto& name : names) {
        auto r = fatness_margin(triple_by_name(name), 100, opts.seed);
        smallest = std::min(smallest, r.margin);
        fat.expect(r.fat && r.margin > 1e-6, name + ": margin " + num(r.margin));
    }
    fat.detail = std::to_string(names.size()) + " triples, smallest margin " + num(smallest);
    rep.checks.push_back(fat);

    CheckResult torus{"torus", "{e} < S^1 < T^2 has margin < 1e-9", true, {}, {}};
    auto tr = fatness_margin(triple_by_name("torus"), 100, opts.seed);
    torus.expect(tr.margin < 1e-9 && !tr.fat, "margin " + num(tr.margin));
    rep.checks.push_back(torus);
    return rep;
}

Report suite_curvature(const SuiteOptions& opts)
{
    Report rep = suite_sampling(opts);
    rep.append(suite_fatness(opts));
    return rep;
}

Report suite_dimensions()
{
    return verify_main_table(Catalog::embedded(), 50, 200);
}

std::vector<std::string> suite_names() { return {"observations", "tables", "oracle", "curvature", "topology", "dimensions", "all"}; }

Report run_suite(const std::string& name, const SuiteOptions& opts)
{
    if (name == "tables") return suite_tables();
    if (name == "observations") return suite_observations();
    if (name == "oracle") return suite_oracle(opts);
    if (name == "topology") return suite_topology();
    if (name == "curvature") return suite_curvature(opts);
    if (name == "dimensions") return suite_dimensions();
    if (name == "all") {
        Report all{"all", {}};
        for (const auto& n : suite_names())
            if (n != "all") all.append(run_suite(n, opts));
        return all;
    }
    throw std::invalid_argument("unknown suite \"" + name + "\"");
}

}  // namespace ricb
