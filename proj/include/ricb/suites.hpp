#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ricb/report.hpp"

namespace ricb {

struct SuiteOptions {
    std::uint64_t seed = 1;
    int jobs = 1;
    int budget = 100000;  // random flags per curvature minimization
};

// Each suite returns one CheckResult per property; ids are stable and used by the acceptance runner.
Report suite_tables();                                // table1, table2, table3
Report suite_observations();                          // a .. f
Report suite_oracle(const SuiteOptions& opts = {});   // oracle_pairs
Report suite_topology();                              // tau, snf, determinant, enumeration, kunneth
Report suite_sampling(const SuiteOptions& opts = {});  // eschenburg, w7_qt, product_split, diagonal, oneill
Report suite_fatness(const SuiteOptions& opts = {});   // fatness, torus
Report suite_curvature(const SuiteOptions& opts = {}); // sampling followed by fatness
Report suite_dimensions();                            // main_table, half_dim, coverage

std::vector<std::string> suite_names();  // including "all"
// Throws std::invalid_argument on an unknown name.
Report run_suite(const std::string& name, const SuiteOptions& opts = {});

}  // namespace ricb
