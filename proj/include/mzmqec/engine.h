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

#ifndef MZMQEC_ENGINE_H
#define MZMQEC_ENGINE_H

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mzmqec/bacon_shor.h"
#include "mzmqec/noise.h"

namespace mzmqec {

struct ProtocolSpec {
    ModelKind model = ModelKind::Qp;
    size_t rounds = 1;
    size_t steps_per_round = 1;
    bool final_perfect_round = false;
};

ProtocolSpec protocol_for(ModelKind model);

/// Stop after max_trials, or earlier once fail_target failures are seen
/// (fail_target = 0 disables the early stop).
struct TrialBudget {
    uint64_t max_trials = 100000;
    uint64_t fail_target = 0;
};

struct RunOptions {
    /// 0 means one worker per hardware thread.
    size_t workers = 0;
    uint64_t batch_size = 1000;
    /// Relax islands still odd at the end of the protocol before the final
    /// decode. Off by default: leftover excitations are evaluated as they are.
    bool final_relax = false;
};

/// Samples drawn with exactly v faulty islands.
struct VStats {
    size_t v = 0;
    double prob = 0;
    uint64_t n_samples = 0;
    uint64_t n_fail = 0;
};

struct TrialStats {
    uint64_t n_trials = 0;
    uint64_t n_fail = 0;
    /// Probability mass represented by the samples; the estimate is
    /// weight * n_fail / n_trials. 1 for plain Monte Carlo.
    double weight = 1.0;
    double weighted_fail = 0;
    uint64_t seed = 0;
    /// Filled by the island-count importance sampler instead of n_fail.
    std::vector<VStats> per_v;
    /// Upper bound on the probability mass beyond the truncation.
    double tail_bound = 0;

    double estimate() const;
    /// Plain Monte Carlo trials that carry the same information.
    double effective_trials() const;
};

enum class LocationKind : uint8_t { Single, Correlated, Flip };

/// One independent fault location of the protocol, in execution order.
struct Location {
    LocationKind kind;
    uint16_t round;
    uint16_t step;
    uint32_t island_a;
    uint32_t island_b;
    /// Pair index within the step for correlated events, gauge for flips.
    uint32_t index;
    uint32_t stab_bit;
    double total;
    const EventMenu *menu;
};

/// Precomputed protocol for one (code, model) pair. Read-only after
/// construction and shared between worker threads.
class Simulator {
   public:
    Simulator(const CodeLayout &code, const ModelParams &params);
    Simulator(const Simulator &) = delete;
    Simulator &operator=(const Simulator &) = delete;

    const CodeLayout &code() const {
        return code_;
    }
    const EventProbs &probs() const {
        return probs_;
    }
    const ProtocolSpec &protocol() const {
        return protocol_;
    }
    const std::vector<Location> &locations() const {
        return locations_;
    }
    std::string describe(size_t loc) const;

    /// Probability that at least one location fires.
    double prob_any_fault() const {
        return prob_any_fault_;
    }
    /// Probability that the first fault is at location <= i.
    const std::vector<double> &first_fault_cdf() const {
        return first_fault_cdf_;
    }
    /// Non-identity event probability per island for the perfect protocol.
    std::vector<double> island_event_probs() const;

    uint64_t island_signature(size_t island, uint32_t mask) const {
        return island_sig_[island * 16 + mask];
    }

    struct Step {
        uint16_t round;
        uint16_t step;
        bool round_end;
        size_t ctx;
        size_t loc_begin;
        size_t flip_begin;
        size_t loc_end;
        uint64_t stab_mask;
    };
    struct Context {
        TimeStepContext ctx;
        std::vector<const EventMenu *> relax;
        std::vector<const EventMenu *> single;
    };
    const std::vector<Step> &steps() const {
        return steps_;
    }
    const std::vector<Context> &contexts() const {
        return contexts_;
    }

   private:
    const EventMenu *intern(EventMenu menu);

    const CodeLayout &code_;
    EventProbs probs_;
    ProtocolSpec protocol_;
    std::vector<std::unique_ptr<EventMenu>> menus_;
    std::vector<Context> contexts_;
    std::vector<Step> steps_;
    std::vector<Location> locations_;
    std::vector<uint64_t> island_sig_;
    std::vector<double> first_fault_cdf_;
    double prob_any_fault_ = 0;
};

/// Algorithm-level entry points.
TrialStats run_perfect_mc(
    const CodeLayout &code, const ModelParams &params, const TrialBudget &budget, uint64_t seed,
    const RunOptions &opts = {});

/// Probability that exactly v islands suffer a non-identity event.
double prob_exactly_v(const ModelParams &params, const CodeLayout &code, size_t v);

TrialStats run_perfect_importance(
    const CodeLayout &code, const ModelParams &params, uint64_t fail_target, size_t v_trunc, uint64_t seed,
    uint64_t max_samples_per_v = 200000, const RunOptions &opts = {});

TrialStats run_imperfect_mc(
    const CodeLayout &code, const ModelParams &params, const TrialBudget &budget, uint64_t seed,
    const RunOptions &opts = {});

/// First-fault importance sampling; max_trials counts real (conditioned) trials.
TrialStats run_imperfect_importance(
    const CodeLayout &code, const ModelParams &params, const TrialBudget &budget, uint64_t seed,
    const RunOptions &opts = {});

/// Dispatches on the model: perfect protocol for Qp, imperfect otherwise.
TrialStats run_model(
    const CodeLayout &code, const ModelParams &params, const TrialBudget &budget, uint64_t seed, bool importance,
    const RunOptions &opts = {});

/// One trial with the given faults forced (location, outcome index) and no
/// other random events. Relaxation of odd islands always happens, choosing
/// outcome relax_choices[i] (default 0) at the i-th relaxation.
bool run_scripted(
    const Simulator &sim, const std::vector<std::pair<size_t, size_t>> &faults, uint64_t initial_signature = 0,
    const std::vector<size_t> &relax_choices = {});

/// Runs one random trial while tracking the full frame. Throws
/// std::logic_error if cached parities or signatures drift from the frame.
bool run_traced_trial(const Simulator &sim, uint64_t seed, uint64_t trial_index);

struct FtReport {
    size_t fault_realizations = 0;
    size_t initial_errors = 0;
    size_t ec_b_weight = 0;
    std::vector<std::string> violations;
    bool passed() const {
        return violations.empty();
    }
};

/// Exhaustive single-fault (EC A') and low-weight input (EC B) check.
FtReport ft_check(const CodeLayout &code, ModelKind model, size_t max_reported = 20);

/// Deterministic parallel loop over trial indices. Trials run in batches and
/// the result only depends on the consumed prefix of batches.
struct BatchTotals {
    uint64_t n_trials = 0;
    uint64_t n_fail = 0;
};
BatchTotals run_batches(
    const TrialBudget &budget, const RunOptions &opts, const std::function<bool(uint64_t)> &trial);

size_t resolve_workers(size_t requested);

}  // namespace mzmqec

#endif
