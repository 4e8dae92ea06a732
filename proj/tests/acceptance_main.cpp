// Reference-scenario gate: runs every check at its pinned tolerance and
// prints one PASS/FAIL line per check. Exit status 0 only if all pass.
#include <iostream>

#include "homsim/refchecks.hpp"

int main() {
    const auto results = homsim::refchecks::run_reference_checks(1.0);
    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << homsim::refchecks::format_line(r) << std::endl;
        all_pass = all_pass && r.pass;
    }
    std::cout << (all_pass ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << std::endl;
    return all_pass ? 0 : 1;
}
