#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bdrd/generators.hpp"
#include "bdrd/tester.hpp"

namespace bdrd {

/// One tester sweep: for each size, `trials` independent runs on the family
/// rescaled to that size. Per-trial seeds derive from the master seed by the
/// documented splitting rule seed + trial index, so reports are reproducible
/// bit-exactly from (config, seed). Timing is off by default for that reason.
struct ExperimentConfig {
    std::shared_ptr<const PropertySpec> property;
    Rational epsilon{1, 10};
    ParamMode mode = ParamMode::calibrated;
    GeneratorSpec family;               // rescaled per size
    std::vector<std::uint64_t> sizes;   // target domain sizes
    std::uint64_t trials = 1;           // per size
    std::uint64_t master_seed = 0;
    bool timing = false;                // when false, runtime_us is reported as 0
};

struct ExperimentRow {
    std::uint64_t trial = 0;  // global index, also the seed offset
    std::uint64_t seed = 0;
    std::uint64_t n = 0;
    Verdict::Branch branch = Verdict::Branch::full_check;
    bool accept = false;
    std::uint64_t queries = 0;
    std::optional<Rational> l1_min;
    std::uint64_t runtime_us = 0;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;  // sorted by trial index

    std::uint64_t accept_count() const;
    std::uint64_t max_queries() const;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

/// Fixed columns: trial,seed,n,branch,verdict,queries,l1_min,runtime_us.
std::string report_to_csv(const ExperimentReport& report);

}  // namespace bdrd
