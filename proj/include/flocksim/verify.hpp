#pragma once

#include <string>
#include <vector>

namespace flocksim {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = true;
    std::vector<std::string> lines;  // one "PASS/FAIL <check>: measured vs expected" per sub-check

    std::string summary() const;
};

int criterion_count();
const char* criterion_name(int id);

/// Runs one acceptance criterion (1-based id).
CriterionResult run_criterion(int id);

/// Criteria making up a named verification suite
/// (lemmas | theorem1 | theorem2 | theorem3 | all).
std::vector<int> suite_criteria(const std::string& suite);

}  // namespace flocksim
