#include "ricb/report.hpp"

#include <algorithm>

namespace ricb {

bool Report::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* Report::find(const std::string& id) const
{
    for (const auto& c : checks)
        if (c.id == id) return &c;
    return nullptr;
}

void Report::append(const Report& other)
{
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

std::string format_report(const Report& report, std::size_t max_failures)
{
    std::string out;
    for (const auto& c : report.checks) {
        out += c.pass ? "PASS " : "FAIL ";
        out += c.id + ": " + c.title;
        if (!c.detail.empty()) out += " (" + c.detail + ")";
        out += '\n';
        for (std::size_t i = 0; i < c.failures.size() && i < max_failures; ++i) out += "    " + c.failures[i] + '\n';
        if (c.failures.size() > max_failures)
            out += "    ... " + std::to_string(c.failures.size() - max_failures) + " more\n";
    }
    return out;
}

}  // namespace ricb
