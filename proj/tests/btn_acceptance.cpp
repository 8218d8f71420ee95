// Dedicated acceptance binary: one pass/fail line per criterion, nonzero
// exit when any criterion fails. `btn-sim verify` runs the same suite.

#include <iostream>

#include "btn/verify.hpp"

int main() {
    const int failures = btn::verify::run_acceptance(std::cout);
    if (failures > 0) {
        std::cout << failures << " criteria FAILED\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
