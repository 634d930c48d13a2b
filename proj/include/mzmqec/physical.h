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

#ifndef MZMQEC_PHYSICAL_H
#define MZMQEC_PHYSICAL_H

#include <array>
#include <string>
#include <vector>

#include "mzmqec/noise.h"

namespace mzmqec {

/// k_B / hbar in 1 / (ns K). Energies are in kelvin, times in ns, rates in 1/ns.
constexpr double kKelvinToRatePerNs = 130.920;

/// Device description. All O(1) prefactors are fixed to 1.
struct DeviceParams {
    double Delta = 2.0;
    double T = 0.1;
    double E_C = 1.0;
    double tau0 = 50.0;
    /// Dot-island conductance per measurement rank k = 0, 1, 2.
    std::array<double, 3> gT{0.0, 1e-4, 1e-4};
    double delta_dot = 0.5;
    double delta_is = 1e-3;
    double g_isis = 1e-6;
    double tau = 1000.0;
    /// Unit signal-to-noise measurement time per rank (index 0 unused).
    std::array<double, 3> tau_mst{1.0, 100.0, 100.0};
    /// Integrated electric-field spectral function, in 1/ns^2.
    double S_EE_int = 0.0;
    double L_over_xi = 30.0;
    size_t m = 2;
};

struct RatePair {
    /// Ground to excited.
    double excite;
    /// Excited back to ground.
    double relax;
};

/// Above-gap quasiparticle excitation and relaxation.
RatePair thermal_rates(const DeviceParams &p);
/// Charge excitation through the dot at rank k; zero when gT[k] is zero.
RatePair poisoning_rates(const DeviceParams &p, size_t k);

struct TransferRates {
    double charge;
    double thermal;
};
TransferRates transfer_rates(const DeviceParams &p);

struct DerivedModel {
    ModelParams params;
    /// r per rank before taking the maximum.
    std::array<double, 3> r_k{};
    double hybridization_rate = 0;
    std::vector<std::string> warnings;
};

/// Throws std::invalid_argument for non-positive inputs or r >= 1.
DerivedModel model_params_from_rates(const DeviceParams &p, ModelKind model);

}  // namespace mzmqec

#endif
