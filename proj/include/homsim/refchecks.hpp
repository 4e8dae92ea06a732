#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace homsim::refchecks {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // measured value, expectation, tolerance
};

// The reference scenario checks: every desk-scale expectation of the
// 415 nm -> 830 nm group-velocity-matched KDP configuration, each with
// its tolerance pinned here. tol_scale multiplies every tolerance
// (used only to demonstrate that the harness actually fails; keep 1.0).
// `only` selects a subset of check ids; empty runs all.
std::vector<CheckResult> run_reference_checks(double tol_scale = 1.0,
                                              const std::vector<int>& only = {},
                                              std::ostream* log = nullptr);

// One "PASS,..."/"FAIL,..." CSV line per check.
std::string format_line(const CheckResult& r);

}  // namespace homsim::refchecks
