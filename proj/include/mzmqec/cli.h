// Copyright 2026 The mzmqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef MZMQEC_CLI_H
#define MZMQEC_CLI_H

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mzmqec/analysis.h"
#include "mzmqec/physical.h"

namespace mzmqec {

enum ExitCode : int {
    kExitOk = 0,
    kExitRuntime = 1,
    kExitInvalidConfig = 2,
    kExitUnbracketed = 3,
    kExitFtViolation = 4,
};

/// Invalid configuration; `key` names the offending entry.
class ConfigError : public std::invalid_argument {
   public:
    ConfigError(std::string key, const std::string &message)
        : std::invalid_argument(message), key_(std::move(key)) {
    }
    const std::string &key() const {
        return key_;
    }

   private:
    std::string key_;
};

/// Flat key=value configuration. Lines starting with '#' are comments. When
/// the text contains lines of the form "#config key=value" (as embedded in
/// run outputs), only those lines are read.
using ConfigMap = std::map<std::string, std::string>;
ConfigMap parse_config_text(const std::string &text);
/// Reads `name`, falling back to name + ".conf" and configs/<name>.conf.
ConfigMap load_config_file(const std::string &name);

/// Every key accepted in config files and as --key flags.
const std::vector<std::string> &config_keys();

struct ExperimentConfig {
    ModelParams params;
    size_t d = 5;
    LayoutKind layout = LayoutKind::Standard;
    XAxis x_axis = XAxis::P0;
    std::vector<double> xs;
    std::string swept;
    std::vector<double> values;
    double p1_ratio = 1;
    double p2_ratio = 1;
    TrialBudget budget;
    bool importance = false;
    size_t v_trunc = 0;
    uint64_t seed = 1;
    RunOptions opts;
    double confidence = kOneSigma;
    Baseline baseline = Baseline::Identity;
    size_t baseline_steps = 1;
    std::string out;
    DeviceParams device;
    /// Every key with its resolved value, workers and out excluded.
    ConfigMap resolved;
};

/// Validates and converts; throws ConfigError.
ExperimentConfig resolve_config(const ConfigMap &values);

SweepPlan sweep_plan(const ExperimentConfig &cfg);

/// Resolved config as "#config key=value" lines.
std::string embedded_config(const ExperimentConfig &cfg);

/// Runs the command line and returns the exit code.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run_cli(int argc, const char *const *argv);

}  // namespace mzmqec

#endif
