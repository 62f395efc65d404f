// Prints one line per acceptance criterion. With an argument, runs only that
// criterion and exits nonzero when it fails (one ctest entry per criterion).
#include <cstdlib>
#include <iostream>
#include <string>

#include "ncpii/acceptance.hpp"

int main(int argc, char** argv) {
    int first = 1, last = ncpii::kCriterionCount;
    if (argc > 1) first = last = std::atoi(argv[1]);
    if (first < 1 || last > ncpii::kCriterionCount) {
        std::cerr << "usage: acceptance [criterion 1.." << ncpii::kCriterionCount << "]\n";
        return 2;
    }
    bool all = true;
    for (int id = first; id <= last; ++id) {
        const ncpii::CriterionResult r = ncpii::run_criterion(id, 0);
        std::cout << r.line() << "\n";
        for (const auto& [k, v] : r.metrics) std::cout << "    " << k << " = " << v << "\n";
        for (const auto& n : r.notes) std::cout << "    note: " << n << "\n";
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
