#pragma once

#include <string>
#include <vector>

namespace hypent::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool numeric_pass = false;
    double seconds = 0.0;
    double budget_seconds = 0.0;
    std::string detail;
    bool passed() const { return numeric_pass && seconds <= budget_seconds; }
};

std::vector<int> criterion_ids();
std::string criterion_name(int id);

/// Throws std::out_of_range for an unknown id.
CriterionResult run_criterion(int id, int threads = 0);

std::string format_line(const CriterionResult& r);

}  // namespace hypent::acceptance
