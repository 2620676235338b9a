#include "ricb/render.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include <json.hpp>

#include "ricb/symcat.hpp"

namespace ricb {

namespace {

// Drops template braces where the grouping is already visible: "SU({r+1})" -> "SU(r+1)",
// "S^{n}" -> "S^n", but "S^{n+1}" keeps them.
std::string unbrace(const std::string& s)
{
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t close = s[i] == '{' ? s.find('}', i) : std::string::npos;
        if (close == std::string::npos) {
            out += s[i++];
            continue;
        }
        std::string inner = s.substr(i + 1, close - i - 1);
        bool simple = std::all_of(inner.begin(), inner.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)); });
        char before = i > 0 ? s[i - 1] : ' ';
        char after = close + 1 < s.size() ? s[close + 1] : ' ';
        bool delimited = (before == '(' || before == ',') && (after == ')' || after == ',');
        out += simple || delimited ? inner : "{" + inner + "}";
        i = close + 1;
    }
    return out;
}

std::string pieces_text(const std::vector<Piece>& pieces)
{
    std::string out;
    for (const auto& p : pieces) {
        if (!out.empty()) out += "; ";
        out += p.value.text();
        if (p.when) out += " if " + p.when->text();
    }
    return out;
}

std::string join_ints(const std::vector<int>& xs)
{
    std::string out;
    for (int x : xs) out += (out.empty() ? "" : ",") + std::to_string(x);
    return out;
}

bool is_integer(const std::string& s)
{
    if (s.empty()) return false;
    std::size_t i = s[0] == '-' ? 1 : 0;
    return i < s.size() && std::all_of(s.begin() + i, s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

Table table_one(const Catalog& catalog, int max_rank)
{
    Table t{"1", "Irreducible symmetric spaces", {"space", "row", "diagram", "multiplicities", "dim", "b", "k_max", "argmax"}, {}, {}};
    for (const auto& row : catalog.irreducible) {
        if (row.params.empty()) continue;
        t.rows.push_back({unbrace(row.name), row.id, family_name(row.family) + "_" + row.rank.text(), row.mults,
                          row.dim.text(), pieces_text(row.b), pieces_text(row.kmax), ""});
        t.groups.push_back("families");
    }
    SpaceCatalog spaces(catalog, max_rank, max_rank);
    for (const auto& inst : spaces.instances()) {
        const IrreducibleRow* row = nullptr;
        for (const auto& r : catalog.irreducible)
            if (r.id == inst.row_id) row = &r;
        auto bv = b_value(inst.datum);
        t.rows.push_back({inst.name, inst.row_id, type_label(inst.datum), datum_spec(inst.datum),
                          std::to_string(inst.dim), std::to_string(bv.b),
                          std::to_string(eval_pieces(row->kmax, inst.params)), join_ints(bv.argmax)});
        t.groups.push_back("instances");
    }
    return t;
}

Table table_two(const Catalog& catalog)
{
    Table t{"2", "Irreducible symmetric spaces with 3 <= b <= 6", {"b", "space", "datum", "dim"}, {}, {}};
    struct Entry {
        int b, order;
        std::vector<std::string> cells;
    };
    std::vector<Entry> entries;
    int order = 0;
    for (const auto& row : catalog.low_b) {
        auto p = resolve(parse_space(row.space), catalog);
        int b = b_of_product(p).lo;
        entries.push_back({b, order++, {std::to_string(b), row.name, row.space, std::to_string(p.dim())}});
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.b < y.b; });
    for (auto& e : entries) {
        t.rows.push_back(e.cells);
        t.groups.push_back("b = " + std::to_string(e.b));
    }
    return t;
}

Table table_three(const Catalog& catalog)
{
    Table t{"3", "Rank two symmetric spaces", {"g", "multiplicities", "space", "dim", "b"}, {}, {}};
    for (const auto& row : catalog.rank_two) {
        std::string mults;
        for (const auto& m : row.mults) mults += (mults.empty() ? "" : ",") + m.text();
        t.rows.push_back({std::to_string(row.g), mults, unbrace(row.name), row.dim.text(), row.b.text()});
        t.groups.push_back("g = " + std::to_string(row.g));
    }
    return t;
}

Table table_main(const Catalog& catalog)
{
    Table t{"main", "Dimensions and k", {"d(n)", "T", "k(n)", "k(3)", "spaces"}, {}, {}};
    for (const auto& row : catalog.main) {
        t.rows.push_back({row.d.text(), row.T, row.k.text(), std::to_string(main_family_k(row.id, 3, catalog)), row.spaces});
        t.groups.push_back("");
    }
    return t;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string latex_cell(const std::string& s)
{
    std::string out;
    bool math = s.find_first_of("^_") != std::string::npos;
    for (char c : s) {
        if (c == '&' || c == '%' || c == '#' || (!math && c == '_')) out += '\\';
        if (c == '*') {
            out += math ? "\\cdot " : "*";
            continue;
        }
        out += c;
    }
    return math ? "$" + out + "$" : out;
}

std::string render_text(const Table& t)
{
    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        width[c] = t.columns[c].size();
        for (const auto& r : t.rows) width[c] = std::max(width[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out += cells[c];
            if (c + 1 < cells.size()) out += std::string(width[c] - cells[c].size() + 2, ' ');
        }
        return out + '\n';
    };
    std::string out = t.title + '\n' + line(t.columns);
    std::size_t total = 0;
    for (auto w : width) total += w + 2;
    out += std::string(total - 2, '-') + '\n';
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (i > 0 && t.groups[i] != t.groups[i - 1]) out += '\n';
        out += line(t.rows[i]);
    }
    return out;
}

std::string render_json(const Table& t)
{
    nlohmann::ordered_json j;
    j["schema"] = "ricb.table";
    j["version"] = 1;
    j["table"] = t.id;
    j["title"] = t.title;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        nlohmann::ordered_json o;
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            if (is_integer(r[c]))
                o[t.columns[c]] = std::stoll(r[c]);
            else
                o[t.columns[c]] = r[c];
        }
        j["rows"].push_back(o);
    }
    return j.dump(2) + '\n';
}

std::string render_csv(const Table& t)
{
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) out += (c ? "," : "") + csv_field(cells[c]);
        out += "\r\n";
    };
    line(t.columns);
    for (const auto& r : t.rows) line(r);
    return out;
}

std::string render_latex(const Table& t)
{
    std::string out = "% " + t.title + "\n\\hline\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? " & " : "") + latex_cell(t.columns[c]);
    out += " \\\\\n\\hline\n\\endhead\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (i > 0 && t.groups[i] != t.groups[i - 1]) out += "\\hline\n";
        for (std::size_t c = 0; c < t.rows[i].size(); ++c) out += (c ? " & " : "") + latex_cell(t.rows[i][c]);
        out += " \\\\\n";
    }
    return out + "\\hline\n";
}

}  // namespace

std::optional<TableFormat> parse_table_format(const std::string& s)
{
    if (s == "text") return TableFormat::text;
    if (s == "json") return TableFormat::json;
    if (s == "csv") return TableFormat::csv;
    if (s == "latex") return TableFormat::latex;
    return std::nullopt;
}

Table build_table(const std::string& which, const Catalog& catalog, int max_rank)
{
    if (which == "1") return table_one(catalog, max_rank);
    if (which == "2") return table_two(catalog);
    if (which == "3") return table_three(catalog);
    if (which == "main") return table_main(catalog);
    throw std::invalid_argument("unknown table \"" + which + "\"");
}

std::string render(const Table& table, TableFormat format)
{
    switch (format) {
    case TableFormat::text: return render_text(table);
    case TableFormat::json: return render_json(table);
    case TableFormat::csv: return render_csv(table);
    case TableFormat::latex: return render_latex(table);
    }
    return {};
}

std::string render_table(const std::string& which, TableFormat format, const Catalog& catalog, int max_rank)
{
    return render(build_table(which, catalog, max_rank), format);
}

}  // namespace ricb
