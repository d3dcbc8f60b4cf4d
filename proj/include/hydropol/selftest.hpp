#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hydropol::selftest {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    bool quick = false;  // reduced model sizes, skips the long figure sweeps
    int workers = 2;
};

// Runs the acceptance criteria in order and returns one result per criterion.
std::vector<CriterionResult> run_all(const Options& opts, std::ostream& log);

// Prints one pass/fail line per criterion; returns the number of failures.
int summarize(const std::vector<CriterionResult>& results, std::ostream& os);

}  // namespace hydropol::selftest
