#include <catch_amalgamated.hpp>

#include <numeric>

#include "ricb/catalog.hpp"
#include "ricb/expr.hpp"
#include "ricb/spacespec.hpp"
#include "ricb/symcat.hpp"

using namespace ricb;

namespace {

const SpaceCatalog& spaces()
{
    static const SpaceCatalog s(Catalog::embedded(), 12, 12);
    return s;
}

int b_of(const std::string& spec)
{
    auto b = b_of_spec(spec);
    REQUIRE(b.exact());
    return b.lo;
}

void require_pass(const Report& rep)
{
    INFO(format_report(rep));
    REQUIRE(rep.ok());
}

}  // namespace

TEST_CASE("expressions evaluate exactly")
{
    Env env{{"r", 4}, {"n", 3}, {"k", 2}};
    CHECK(Expr::parse("r*(r+3)/2").eval_int(env) == 14);
    CHECK(Expr::parse("2^3^2").eval_int({}) == 512);
    CHECK(Expr::parse("-r^2").eval_int(env) == -16);
    CHECK(Expr::parse("max(4, 2*k-1)").eval_int(env) == 4);
    CHECK(Expr::parse("min(r, n, k)").eval_int(env) == 2);
    CHECK(Expr::parse("r>=4 && n==3").eval_bool(env));
    CHECK_FALSE(Expr::parse("r<4 || k!=2").eval_bool(env));
    CHECK(Expr::parse("7/2").eval(env) == Rational(7, 2));
    CHECK_THROWS_AS(Expr::parse("7/2").eval_int(env), ExprError);
    CHECK_THROWS_AS(Expr::parse("r+").eval(env), ExprError);
    CHECK_THROWS_AS(Expr::parse("q").eval(env), ExprError);
    CHECK_THROWS_AS(Expr::parse("1/(r-4)").eval(env), ExprError);
    CHECK(expand_template("SU({r+1})/SO({r+1})", env) == "SU(5)/SO(5)");
}

TEST_CASE("catalog loads and instantiates patterns")
{
    const auto& c = Catalog::embedded();
    CHECK(c.version == 1);
    CHECK(c.irreducible.size() == 33);
    CHECK(c.low_b.size() == 13);
    CHECK(c.rank_two.size() == 13);
    CHECK(c.main.size() == 5);

    auto d = datum_from_pattern(Family::BC, 3, "2,...,2,2*n[1]", {{"n", 2}});
    CHECK(datum_spec(d) == "BC3[2,2,4[1]]");
    CHECK(datum_spec(datum_from_pattern(Family::BC, 1, "2,...,2,2*n[1]", {{"n", 2}})) == "BC1[4[1]]");
    CHECK(datum_spec(datum_from_pattern(Family::D, 3, "1,...,1,1,1", {})) == "D3[1,1,1]");
    CHECK_THROWS(datum_from_pattern(Family::D, 1, "1,...,1,1,1", {}));

    auto envs = enumerate_params({{"k", Expr::parse("1"), {}}, {"l", Expr::parse("k+3"), Expr::parse("k+4")}}, 2);
    REQUIRE(envs.size() == 4);
    CHECK(envs[3].at("k") == 2);
    CHECK(envs[3].at("l") == 6);

    CHECK_THROWS_AS(Catalog::from_json("{"), CatalogError);
    CHECK_THROWS_AS(Catalog::from_json(R"({"schema":"other"})"), CatalogError);
}

TEST_CASE("space spec round trip")
{
    for (const char* text : {"G2[1,1]", "BC2[6,8[1]]", "A2[8,8]", "E8[2,2,2,2,2,2,2,2]", "SU3/SO3", "Gr+(2,7)",
                             "W(7;1,1)", "product(S^3, S^3)", "product(A1[1], product(CP^2, B2[1,3]))"}) {
        auto spec = parse_space(text);
        CHECK(parse_space(print_space(spec)) == spec);
        CHECK(print_space(spec) == text);
    }
    CHECK(parse_space("A 2 [1, 1]") == parse_space("A2[1,1]"));
    CHECK(parse_space("product( S^2 ,S^3 )").factors.size() == 2);
    CHECK_THROWS_AS(parse_space(""), SpaceSpecError);
    CHECK_THROWS_AS(parse_space("A2[1]"), SpaceSpecError);
    CHECK_THROWS_AS(parse_space("BC2[1,1]"), SpaceSpecError);
    CHECK_THROWS_AS(parse_space("B2[1,1[1]]"), SpaceSpecError);
    CHECK_THROWS_AS(parse_space("D2[1,1]"), SpaceSpecError);
    CHECK_THROWS_AS(parse_space("product()"), SpaceSpecError);
    CHECK_THROWS_AS(parse_space("Gr+(2,7"), SpaceSpecError);
    CHECK_THROWS_AS(b_of_spec("Flag(3)"), SpaceSpecError);
    CHECK_THROWS_AS(b_of_spec("A2[1,2]"), SpaceSpecError);
}

TEST_CASE("b of named spaces")
{
    CHECK(b_of("SU(3)/SO(3)") == 3);
    CHECK(b_of("SU3/SO3") == 3);
    CHECK(b_of("Gr+(2,5)") == 3);
    CHECK(b_of("Gr+_2(R^5)") == 3);
    CHECK(b_of("G2[1,1]") == 3);
    CHECK(b_of("G2/SO(4)") == 3);
    CHECK(b_of("E6/F4") == 10);
    CHECK(b_of("E8") == 134);
    CHECK(b_of("F4/Sp3Sp1") == 13);
    CHECK(b_of("F4/Spin9") == 1);
    CHECK(b_of("OP^2") == 1);
    CHECK(b_of("SO(10)/U(5)") == 7);
    CHECK(b_of("Sp(2)") == 4);
    CHECK(b_of("Spin(7)") == b_of("SO(7)"));
    CHECK(b_of("GrC(2,3)") == 1);
    for (int k = 2; k <= 12; ++k)
        CHECK(b_of("GrC(2," + std::to_string(k + 2) + ")") == std::max(4, 2 * k - 1));
    // Isomorphic presentations agree.
    CHECK(b_of("Gr+(2,6)") == b_of("GrC(2,4)"));
    CHECK(b_of("SU(4)") == b_of("SO(6)"));
    CHECK(b_of("Sp(2)/U(2)") == b_of("Gr+(2,5)"));
    CHECK(b_of("SO(8)/U(4)") == b_of("Gr+(2,8)"));
    CHECK(b_of("CP^3") == b_of("SO(6)/U(3)"));
}

TEST_CASE("product formula")
{
    CHECK(b_of("product(S^3, S^3)") == 4);
    CHECK(b_of("product(S^3, S^5)") == 6);
    CHECK(b_of("product(S^3, S^3, S^3)") == 7);
    for (const char* m : {"S^4", "SU(3)/SO(3)", "G2", "product(S^2, CP^3)"}) {
        int dim = resolve(parse_space(m)).dim();
        CHECK(b_of(std::string("product(S^2, ") + m + ")") == dim + 1);
    }
    // Permutation invariance and the lower bound b(M x N) >= b(M) + dim N.
    const std::vector<std::string> xs{"S^2", "S^5", "SU(3)", "Gr+(2,7)", "E6/F4", "CP^4"};
    for (const auto& x : xs)
        for (const auto& y : xs) {
            int bxy = b_of("product(" + x + ", " + y + ")");
            CHECK(bxy == b_of("product(" + y + ", " + x + ")"));
            int dy = resolve(parse_space(y)).dim();
            int dx = resolve(parse_space(x)).dim();
            CHECK(bxy >= b_of(x) + dy);
            if (b_of(y) + dx <= b_of(x) + dy) CHECK(bxy == b_of(x) + dy);
        }
    CHECK_THROWS(b_of_product(ProductSpace{}));
}

TEST_CASE("bounds-only spaces")
{
    auto w = b_of_spec("W(7;1,1)");
    CHECK(w.lo == 1);
    CHECK(w.hi == 5);
    auto w11 = b_of_spec("W(11;1,2)");
    CHECK(w11.lo == 4);
    CHECK(w11.hi == 8);
    CHECK_THROWS_AS(b_of_spec("W(9;1,1)"), SpaceSpecError);
    CHECK_THROWS_AS(b_of_spec("W(7;2,2)"), SpaceSpecError);
    auto prod = b_of_spec("product(W(7;1,1), S^2)");
    CHECK(prod.lo == 8);
    CHECK(prod.hi == 8);
}

TEST_CASE("witte-type spaces")
{
    auto w = witte_b(1, 2, 1, 3);
    CHECK(w.lower == 5);
    CHECK(w.upper == 6);
    REQUIRE(w.exact);
    CHECK(*w.exact == 5);
    for (int q = 1; q <= 8; ++q) {
        auto s = witte_b(1, q, 2, 1);
        CHECK(s.lower == 2 * q + 1);
        CHECK(s.upper == 2 * q + 2);
        CHECK_FALSE(s.exact);
    }
    auto edge = witte_b(1, 1, 0, 1);
    CHECK_FALSE(edge.exact);
    CHECK_THROWS(witte_b(1, 2, 2, 4));
    CHECK_THROWS(witte_b(3, 2, 1, 1));
}

TEST_CASE("group inequality")
{
    CHECK(prop_inequality_check(4, 3, 5, 3));
    CHECK_FALSE(prop_inequality_check(4, 4, 5, 3));
    CHECK(prop_inequality_check(1, 1, 3, 0));
    int b_cube = b_of("product(S^3, S^3, S^3)");
    CHECK(b_cube == 7);
    CHECK(prop_inequality_check(b_cube, 2, 6, 3));
}

TEST_CASE("dimension witnesses")
{
    auto w23 = dimension_witnesses(23);
    REQUIRE(w23.size() == 1);
    CHECK(w23[0].family == "W");
    CHECK(w23[0].n == 6);
    CHECK(w23[0].k == 9);

    auto w19 = dimension_witnesses(19);
    REQUIRE(w19.size() == 2);
    CHECK(w19[0].family == "W");
    CHECK(w19[0].k == 7);
    CHECK(w19[1].family == "WxGr");
    CHECK(w19[1].n == 3);
    CHECK(w19[1].k == 8);

    auto w14 = dimension_witnesses(14);
    REQUIRE(w14.size() == 1);
    CHECK(w14[0].family == "WxW");
    CHECK(w14[0].k == 2);

    auto w9 = dimension_witnesses(9);
    REQUIRE(w9.size() == 1);
    CHECK(w9[0].family == "M");
    CHECK(w9[0].n == 2);
    CHECK(w9[0].k == 2);

    for (int d : {8, 10, 12, 16, 200}) CHECK(dimension_witnesses(d).empty());
    CHECK_THROWS(dimension_witnesses(6));
    // Exceptional n = 3 values, in table order.
    std::vector<int> k3;
    for (const auto& row : Catalog::embedded().main) k3.push_back(main_family_k(row.id, 3));
    CHECK(k3 == std::vector<int>{4, 8, 8, 8, 2});
}

TEST_CASE("catalog tables reproduce")
{
    require_pass(verify_tables(spaces()));
}

TEST_CASE("observations hold over the catalog")
{
    auto rep = verify_observations(spaces());
    require_pass(rep);
    CHECK(rep.checks.size() == 6);
}

TEST_CASE("observation check names a corrupted row")
{
    Catalog bad = Catalog::embedded();
    for (auto& row : bad.irreducible)
        if (row.id == "G2-1") row.mults = "1,2";
    SpaceCatalog sc(bad, 8, 6);
    auto rep = verify_observations(sc);
    const auto* a = rep.find("a");
    REQUIRE(a);
    CHECK_FALSE(a->pass);
    bool named = false;
    for (const auto& f : a->failures) named = named || (f.find("G2/SO(4)") != std::string::npos && f.find("G2-1") != std::string::npos);
    CHECK(named);
}

TEST_CASE("fat bundle and main table checks")
{
    require_pass(verify_fat_bundles(Catalog::embedded(), 12));
    require_pass(verify_main_table(Catalog::embedded(), 50, 200));
}

TEST_CASE("b never equals dim - 1 without an S^2 factor")
{
    for (const auto* e : spaces().distinct()) {
        int b = b_of_space(*e);
        if (b == e->dim - 1) CHECK(datum_spec(e->datum) == "A1[1]");
    }
    CHECK(b_of("product(S^2, SU(3))") == 9);
}
