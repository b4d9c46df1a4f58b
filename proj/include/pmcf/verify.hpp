// Runnable property checks (the library's invariants), exposed both to the
// `pmcflow verify` CLI and to tests.  Each check is small, deterministic and
// reports a pass flag plus a measured margin.
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace pmcf {

struct VerifyResult {
    std::string name;
    bool pass = false;
    double margin = 0.0;       // positive clearance in the check's own units
    std::string detail;
    double seconds = 0.0;
};

struct VerifyCheck {
    std::string name;
    std::function<VerifyResult()> fn;
};

// The registry, in execution order.
const std::vector<VerifyCheck>& verify_registry();

// Run all checks whose name contains `filter` (all, if empty).
std::vector<VerifyResult> verify_suite(const std::string& filter = {});

} // namespace pmcf
