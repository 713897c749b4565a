#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stirred::accept {

struct Options {
    std::uint64_t seed = 20240601;
    int threads = 1;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Criteria 1 through 10.
std::vector<int> criterion_ids();
std::string criterion_title(int id);

/// Run one criterion. Exceptions from the modules are caught and reported
/// as a failure with the message in `detail`.
CriterionResult run_criterion(int id, const Options& opt);

/// "PASS  3  <title>: <detail> (<seconds> s)"
std::string format_line(const CriterionResult& r);

}  // namespace stirred::accept
