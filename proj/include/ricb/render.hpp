#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ricb/catalog.hpp"

namespace ricb {

enum class TableFormat { text, json, csv, latex };

std::optional<TableFormat> parse_table_format(const std::string& s);

struct Table {
    std::string id;
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    // Optional group label per row; text output starts a new block when it changes.
    std::vector<std::string> groups;
};

// which: "1", "2", "3" or "main". Table 1 lists the symbolic family rows followed by
// every instance with rank <= max_rank (other parameters <= max_rank as well).
Table build_table(const std::string& which, const Catalog& catalog = Catalog::embedded(), int max_rank = 12);
std::string render(const Table& table, TableFormat format);
std::string render_table(const std::string& which, TableFormat format, const Catalog& catalog = Catalog::embedded(),
                         int max_rank = 12);

}  // namespace ricb
