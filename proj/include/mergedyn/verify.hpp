#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mergedyn {

struct CheckResult {
    std::string name;
    bool pass = true;
    bool skipped = false;
    std::string detail;
    double seconds = 0;
};

struct VerifyOptions {
    int max_n = 7; // ranges in the individual checks are clipped to this
    bool sister_cut = true;
};

// runs the full acceptance battery; one result per criterion
std::vector<CheckResult> run_acceptance(const VerifyOptions& opt);

// pretty printer; returns true when everything asserted passed
bool print_results(const std::vector<CheckResult>& results, std::ostream& os);

std::string results_to_json(const std::vector<CheckResult>& results);

} // namespace mergedyn
