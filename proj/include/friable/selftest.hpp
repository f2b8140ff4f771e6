#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace friable {

struct CriterionResult {
    std::string name;
    bool passed = false;
    std::string detail;   // measured numbers vs thresholds
    double seconds = 0.0;
};

struct SelftestConfig {
    // Scale of the heavyweight checks (sieve tables, exact counts).  The
    // acceptance binary runs the full 1e7; the CLI default is 1e6; --quick
    // drops to 1e5 with fewer random queries.
    uint64_t big_x = 10'000'000;
    int sandwich_queries = 50;
    std::string cache_dir;        // reuse prime/factor caches when set
    std::ostream* progress = nullptr;
};

std::vector<CriterionResult> run_selftest(const SelftestConfig& cfg);

bool all_passed(const std::vector<CriterionResult>& rs);

// "PASS name (detail) [1.23s]" per criterion plus a summary line.
void print_results(std::ostream& os, const std::vector<CriterionResult>& rs);

}  // namespace friable
