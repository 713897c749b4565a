// Runs acceptance criteria and prints one PASS/FAIL line per criterion.
// Usage: stirred_acceptance [id ...]   (no ids runs all ten)
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "stirred/acceptance.hpp"

int main(int argc, char** argv) {
    using namespace stirred::accept;
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    if (ids.empty()) ids = criterion_ids();

    Options opt;
    if (const char* s = std::getenv("STIRRED_SEED"); s && *s) opt.seed = std::strtoull(s, nullptr, 10);
    int failed = 0;
    for (int id : ids) {
        const auto r = run_criterion(id, opt);
        std::cout << format_line(r) << std::endl;
        failed += !r.pass;
    }
    return failed == 0 ? 0 : 1;
}
