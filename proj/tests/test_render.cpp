#include <catch_amalgamated.hpp>

#include <json.hpp>

#include "ricb/render.hpp"

using namespace ricb;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows(1, std::vector<std::string>(1));
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                rows.back().back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                rows.back().back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            rows.back().emplace_back();
        } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            ++i;
            rows.emplace_back(1);
        } else {
            rows.back().back() += c;
        }
    }
    if (rows.back().size() == 1 && rows.back()[0].empty()) rows.pop_back();
    return rows;
}

}  // namespace

TEST_CASE("rendering is byte stable")
{
    for (std::string which : {"1", "2", "3", "main"})
        for (auto f : {TableFormat::text, TableFormat::json, TableFormat::csv, TableFormat::latex})
            CHECK(render_table(which, f, Catalog::embedded(), 6) == render_table(which, f, Catalog::embedded(), 6));
}

TEST_CASE("rank two table as json")
{
    auto j = nlohmann::json::parse(render_table("3", TableFormat::json));
    REQUIRE(j["rows"].size() == 13);
    bool found = false;
    for (const auto& row : j["rows"]) {
        if (row["space"] == "G2/SO(4)") {
            found = true;
            CHECK(row["g"] == 6);
            CHECK(row["multiplicities"] == "1,1");
            CHECK(row["b"] == 3);
        }
    }
    CHECK(found);
}

TEST_CASE("main table as csv")
{
    auto rows = parse_csv(render_table("main", TableFormat::csv));
    REQUIRE(rows.size() == 6);
    CHECK(rows[0][3] == "k(3)");
    std::vector<std::string> k3;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 5);
        k3.push_back(rows[i][3]);
    }
    CHECK(k3 == std::vector<std::string>{"4", "8", "8", "8", "2"});
}

TEST_CASE("table one instances agree with datum")
{
    auto t = build_table("1", Catalog::embedded(), 4);
    auto j = nlohmann::json::parse(render(t, TableFormat::json));
    bool grc = false;
    for (const auto& row : j["rows"]) {
        if (row["multiplicities"] == "BC2[2,4[1]]") {
            grc = true;
            CHECK(row["b"] == 7);
            CHECK(row["dim"] == 16);
        }
    }
    CHECK(grc);
}

TEST_CASE("table two grouped by b")
{
    auto t = build_table("2");
    REQUIRE(!t.rows.empty());
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(std::stoi(t.rows[i - 1][0]) <= std::stoi(t.rows[i][0]));
    CHECK(std::stoi(t.rows.front()[0]) == 3);
    CHECK(std::stoi(t.rows.back()[0]) == 6);
}

TEST_CASE("latex escapes and csv quoting")
{
    Table t{"x", "demo", {"a", "b"}, {{"S^2_x", "p,q \"r\""}}, {""}};
    auto latex = render(t, TableFormat::latex);
    CHECK(latex.find("$S^2_x$ & p,q \"r\" \\\\") != std::string::npos);
    auto csv = render(t, TableFormat::csv);
    CHECK(csv == "a,b\r\nS^2_x,\"p,q \"\"r\"\"\"\r\n");
    CHECK(parse_csv(csv)[1][1] == "p,q \"r\"");
    CHECK_FALSE(parse_table_format("xml"));
}
