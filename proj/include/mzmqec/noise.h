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

#ifndef MZMQEC_NOISE_H
#define MZMQEC_NOISE_H

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mzmqec/bacon_shor.h"
#include "mzmqec/majorana_frame.h"
#include "mzmqec/rng.h"

namespace mzmqec {

enum class ModelKind { Qp, QpBf, MC, PMC, MCLongLived };

std::string model_name(ModelKind kind);
ModelKind parse_model(const std::string &name);

/// Models whose measured pairs suffer correlated events.
inline bool has_correlated_events(ModelKind kind) {
    return kind == ModelKind::MC || kind == ModelKind::PMC || kind == ModelKind::MCLongLived;
}

struct ModelParams {
    ModelKind model = ModelKind::Qp;
    size_t m = 2;
    double p0 = 0;
    double p1 = 0;
    double p2 = 0;
    double r = 0;
    double q = 0;
    double p_mst1 = 0;
    double p_mst2 = 0;
    /// Extra pair-wise dephasing from hybridization noise, added for every k.
    double p_pair_extra = 0;
};

struct EventProbs {
    ModelKind model = ModelKind::Qp;
    size_t m = 2;
    std::array<double, 3> p{};
    std::array<double, 3> p_qp{};
    std::array<double, 3> p_pair{};
    std::array<double, 3> p_odd{};
    std::array<double, 3> p_mst{};
    double p_cor_odd = 0;
    double p_cor_even = 0;
    /// Relaxation tree for long-lived excitations (measured islands).
    double p_hop = 0;
    double p_relax_tree = 0;
    double p_stay_tree = 0;
    /// Final tree step, where hops are not allowed.
    double p_relax_final = 0;
};

/// Throws std::invalid_argument naming the offending quantity.
EventProbs derive_event_probs(const ModelParams &params);

/// Weighted outcomes of one noise location. Identity outcomes are dropped,
/// so `total` is the probability that the location changes the frame.
struct EventMenu {
    double total = 0;
    std::vector<double> cumulative;
    std::vector<uint32_t> mask_a;
    std::vector<uint32_t> mask_b;

    size_t size() const {
        return cumulative.size();
    }
    double weight(size_t k) const {
        return cumulative[k] - (k ? cumulative[k - 1] : 0.0);
    }
    /// Outcome index for u in [0, total).
    size_t pick(double u) const;
};

class MenuBuilder {
   public:
    void add(uint32_t mask_a, uint32_t mask_b, double weight);
    EventMenu build() const;

   private:
    std::vector<std::pair<uint64_t, double>> entries_;
};

/// Role of every island during one time step.
struct TimeStepContext {
    /// 0 for idle islands, 2 for islands in a two-island measurement.
    std::vector<uint8_t> k;
    /// Sites of each island that take part in its measurement.
    std::vector<uint32_t> measured_sites;
    /// Pairs exposed to correlated events.
    std::vector<MeasuredPair> pairs;
    /// Gauge generators measured at the end of the step.
    std::vector<size_t> gauges;
    uint64_t stab_mask = 0;
};

/// All islands idle, nothing measured.
TimeStepContext idle_context(const CodeLayout &code);
/// Every gauge generator measured at once, no correlated events.
TimeStepContext simultaneous_context(const CodeLayout &code);
/// One step of the four-step schedule (0-based).
TimeStepContext schedule_context(const CodeLayout &code, size_t step);

EventMenu relax_menu(const EventProbs &probs, uint8_t k, uint32_t measured_sites);
EventMenu single_island_menu(const EventProbs &probs, uint8_t k, uint32_t measured_sites);
/// Masks are relative to (pair.island_a, pair.island_b).
EventMenu correlated_menu(const EventProbs &probs, const MeasuredPair &pair);

/// Relaxes odd islands. Updates `parities` and returns the applied string.
MajoranaString step0_relax(IslandParities &parities, const TimeStepContext &ctx, const EventProbs &probs, Rng &rng);

/// Relaxation decision tree for long-lived excitations.
MajoranaString step0_long_lived(
    IslandParities &parities, const TimeStepContext &ctx, const EventProbs &probs, Rng &rng);

/// Single-island and correlated events of one time step.
MajoranaString step1_events(const TimeStepContext &ctx, const EventProbs &probs, Rng &rng);

/// Noisy outcomes of ctx.gauges, in that order.
BitVec step2_measure(
    const MajoranaString &frame, const TimeStepContext &ctx, const CodeLayout &code, const EventProbs &probs, Rng &rng);

/// Class of a tetron site mask modulo the full-island flip:
/// 0 identity, 1..4 single gamma_1..gamma_4, 5 {12|34}, 6 {13|24}, 7 {14|23}.
size_t island_class(uint32_t mask);

/// Exact class distribution of step 0 followed by step 1 on one tetron.
std::array<double, 8> single_island_distribution(const EventProbs &probs, bool odd, uint8_t k);

}  // namespace mzmqec

#endif
