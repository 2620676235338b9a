// Runs every acceptance criterion and prints one PASS/FAIL line each. Exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>

#include "ricb/suites.hpp"

namespace {

struct Criterion {
    int number;
    std::string title;
    double budget_s;
    std::function<ricb::Report()> run;
};

}  // namespace

int main(int argc, char** argv)
{
    ricb::SuiteOptions opts;
    if (argc > 1) opts.jobs = std::stoi(argv[1]);

    const Criterion criteria[] = {
        {1, "table regeneration", 5, [] { return ricb::suite_tables(); }},
        {2, "irreducible bounds (a)-(f)", 5, [] { return ricb::suite_observations(); }},
        {3, "oracle equivalence", 60, [&] { return ricb::suite_oracle(opts); }},
        {4, "topology", 10, [] { return ricb::suite_topology(); }},
        {5, "curvature sampling", 600, [&] { return ricb::suite_sampling(opts); }},
        {6, "fatness", 120, [&] { return ricb::suite_fatness(opts); }},
        {7, "dimension coverage", 1, [] { return ricb::suite_dimensions(); }},
    };

    bool all = true;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        ricb::Report rep;
        std::string error;
        try {
            rep = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool ok = error.empty() && rep.ok() && secs < c.budget_s;
        all = all && ok;

        std::string why;
        if (!error.empty()) why = "; exception: " + error;
        else if (secs >= c.budget_s) why = "; over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget";
        for (const auto& check : rep.checks)
            if (!check.pass) why += "; " + check.id + (check.failures.empty() ? "" : ": " + check.failures.front());

        std::printf("%s criterion %d: %s [%zu checks, %.2f s]%s\n", ok ? "PASS" : "FAIL", c.number, c.title.c_str(),
                    rep.checks.size(), secs, why.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
