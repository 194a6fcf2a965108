#include "bdrd/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <sstream>
#include <thread>

#include "bdrd/errors.hpp"

namespace bdrd {

std::uint64_t ExperimentReport::accept_count() const {
    std::uint64_t count = 0;
    for (const auto& row : rows) count += row.accept ? 1 : 0;
    return count;
}

std::uint64_t ExperimentReport::max_queries() const {
    std::uint64_t best = 0;
    for (const auto& row : rows) best = std::max(best, row.queries);
    return best;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    if (!config.property) throw Error("experiment needs a property");
    if (config.sizes.empty()) throw Error("experiment needs at least one size");

    ExperimentReport report;
    report.rows.resize(config.sizes.size() * config.trials);

    std::uint64_t next_trial = 0;
    for (std::uint64_t size : config.sizes) {
        GeneratorSpec spec = with_target_size(config.family, size);
        // Deterministic families share one database per size; the random
        // family is re-drawn per trial from the trial seed.
        const bool per_trial_db =
            config.family.family == GeneratorSpec::Family::random_bounded_degree;
        std::optional<Database> shared;
        if (!per_trial_db) shared.emplace(generate(spec));

        const std::uint64_t first = next_trial;
        auto run_range = [&, spec, first](std::uint64_t lo, std::uint64_t hi) {
            for (std::uint64_t t = lo; t < hi; ++t) {
                std::uint64_t trial = first + t;
                std::uint64_t seed = config.master_seed + trial;
                std::optional<Database> own;
                const Database* db = nullptr;
                if (per_trial_db) {
                    GeneratorSpec s = spec;
                    s.seed = seed;
                    own.emplace(generate(s));
                    db = &*own;
                } else {
                    db = &*shared;
                }
                OracleHandle oracle(*db);
                auto start = std::chrono::steady_clock::now();
                Verdict verdict = epsilon_tester(oracle, config.epsilon, *config.property, seed,
                                                 config.mode);
                auto stop = std::chrono::steady_clock::now();
                ExperimentRow& row = report.rows[trial];
                row.trial = trial;
                row.seed = seed;
                row.n = db->domain_size();
                row.branch = verdict.branch;
                row.accept = verdict.accept;
                row.queries = verdict.queries;
                row.l1_min = verdict.l1_min;
                row.runtime_us =
                    config.timing
                        ? static_cast<std::uint64_t>(
                              std::chrono::duration_cast<std::chrono::microseconds>(stop - start)
                                  .count())
                        : 0;
            }
        };

        // Trials are independent; split across hardware threads when useful.
        unsigned workers = std::max(1u, std::thread::hardware_concurrency());
        workers = static_cast<unsigned>(
            std::min<std::uint64_t>(workers, std::max<std::uint64_t>(config.trials, 1)));
        if (workers <= 1 || config.trials <= 1) {
            run_range(0, config.trials);
        } else {
            std::vector<std::future<void>> futures;
            std::uint64_t chunk = (config.trials + workers - 1) / workers;
            for (unsigned w = 0; w < workers; ++w) {
                std::uint64_t lo = w * chunk;
                std::uint64_t hi = std::min<std::uint64_t>(config.trials, lo + chunk);
                if (lo >= hi) break;
                futures.push_back(std::async(std::launch::async, run_range, lo, hi));
            }
            for (auto& f : futures) f.get();
        }
        next_trial += config.trials;
    }
    return report;
}

std::string report_to_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "trial,seed,n,branch,verdict,queries,l1_min,runtime_us\n";
    for (const auto& row : report.rows) {
        out << row.trial << ',' << row.seed << ',' << row.n << ','
            << (row.branch == Verdict::Branch::full_check ? "full" : "sampled") << ','
            << (row.accept ? "accept" : "reject") << ',' << row.queries << ','
            << (row.l1_min ? rational_to_string(*row.l1_min) : "") << ',' << row.runtime_us
            << '\n';
    }
    return out.str();
}

}  // namespace bdrd
