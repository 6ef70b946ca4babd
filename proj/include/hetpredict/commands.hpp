#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "hetpredict/config.hpp"
#include "hetpredict/synthetic.hpp"

namespace hetpredict {

// Each command reads its inputs from the config, writes CSV files into
// config.out and reports progress on `diag`. Failures are thrown as Error.

// predictions_<i>.csv and models_<i>.json for training set i.
void cmd_predict(const RunConfig& config, std::ostream& diag);

// errors.csv, mpe.csv (per method: every target machine and "all") and cdf.csv.
void cmd_evaluate(const RunConfig& config, std::ostream& diag);

// deviation_stats.csv and cost.csv.
void cmd_simulate(const RunConfig& config, std::ostream& diag);

void cmd_gen_synthetic(const SyntheticOptions& options, const std::filesystem::path& dir, std::ostream& diag);

// Building blocks shared with the tests.
ProfileRegistry load_registry(const RunConfig& config);
std::vector<MachineId> resolve_targets(const RunConfig& config, const ProfileRegistry& registry);
std::vector<TraceSet> load_training(const RunConfig& config);
SuiteOptions suite_options(const RunConfig& config);

}  // namespace hetpredict
