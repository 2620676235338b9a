#pragma once

#include <string>
#include <vector>

namespace ricb {

struct CheckResult {
    std::string id;
    std::string title;
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void fail(std::string why)
    {
        pass = false;
        failures.push_back(std::move(why));
    }
    // Records a failure unless `ok`; returns `ok`.
    bool expect(bool ok, const std::string& why)
    {
        if (!ok) fail(why);
        return ok;
    }
};

struct Report {
    std::string suite;
    std::vector<CheckResult> checks;

    bool ok() const;
    const CheckResult* find(const std::string& id) const;
    void append(const Report& other);
};

// One "PASS"/"FAIL" line per check, followed by indented failure reasons.
std::string format_report(const Report& report, std::size_t max_failures = 10);

}  // namespace ricb
