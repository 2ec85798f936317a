#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "rvline/colouring.hpp"
#include "rvline/harness.hpp"

// Verification suite driver: runs every criterion (or the ones named by
// --criterion N ...) and prints one PASS/FAIL line each.
int main(int argc, char** argv) {
    std::vector<int> criteria;
    unsigned kappa = rvline::effective_kappa();
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            criteria.push_back(std::atoi(argv[++i]));
        } else if (arg == "--kappa" && i + 1 < argc) {
            kappa = static_cast<unsigned>(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: rvline_acceptance [--criterion N]... [--kappa K]\n";
            return 2;
        }
    }
    const auto results = rvline::harness::run_acceptance(criteria, kappa, std::cout);
    for (const auto& result : results) {
        if (!result.passed) {
            return 1;
        }
    }
    return results.empty() ? 2 : 0;
}
