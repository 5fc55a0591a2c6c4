#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "systolic/report.hpp"

namespace systolic::acceptance {

inline constexpr std::uint64_t kDefaultSeed = 7;

struct CriterionResult {
    int id = 0;
    std::string title;
    double limit_seconds = 0.0;
    double seconds = 0.0;
    std::vector<Entry> entries;
    bool within_time = false;
    bool passed = false;
};

/// Number of acceptance criteria.
int criterion_count();

/// Runs criterion `id` (1-based) with its own generator derived from `seed`.
CriterionResult run_criterion(int id, std::uint64_t seed);

/// Runs every criterion in order; `on_done` is called after each one.
std::vector<CriterionResult> run_all(std::uint64_t seed,
                                     const std::function<void(const CriterionResult&)>& on_done = {});

} // namespace systolic::acceptance
