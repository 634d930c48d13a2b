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

#include "mzmqec/physical.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mzmqec {

namespace {

void require_positive(double v, const char *name) {
    if (!(v > 0)) {
        throw std::invalid_argument(std::string(name) + " must be positive");
    }
}

void require_non_negative(double v, const char *name) {
    if (!(v >= 0)) {
        throw std::invalid_argument(std::string(name) + " must be non-negative");
    }
}

void validate(const DeviceParams &p) {
    require_non_negative(p.Delta, "Delta");
    require_positive(p.T, "T");
    require_non_negative(p.E_C, "E_C");
    require_positive(p.tau0, "tau0");
    for (double g : p.gT) {
        require_non_negative(g, "gT");
    }
    require_non_negative(p.delta_dot, "delta_dot");
    require_non_negative(p.delta_is, "delta_is");
    require_non_negative(p.g_isis, "g_isis");
    require_positive(p.tau, "tau");
    require_positive(p.tau_mst[1], "tau_mst1");
    require_positive(p.tau_mst[2], "tau_mst2");
    require_non_negative(p.S_EE_int, "S_EE_int");
    require_non_negative(p.L_over_xi, "L_over_xi");
    if (p.m != 2) {
        throw std::invalid_argument("m: only tetrons (m = 2) are supported");
    }
}

}  // namespace

RatePair thermal_rates(const DeviceParams &p) {
    return {std::exp(-p.Delta / p.T) / p.tau0, 1.0 / p.tau0};
}

RatePair poisoning_rates(const DeviceParams &p, size_t k) {
    if (k > 2) {
        throw std::invalid_argument("k must be 0, 1 or 2");
    }
    // The level spacing is delta_dot for dot-to-island tunneling and Delta for
    // the reverse; take the larger one.
    double delta = std::max(p.delta_dot, p.Delta) * kKelvinToRatePerNs;
    double relax = p.gT[k] * delta;
    return {relax * std::exp(-p.E_C / p.T), relax};
}

TransferRates transfer_rates(const DeviceParams &p) {
    double charge = p.g_isis * p.Delta * kKelvinToRatePerNs;
    double thermal = p.E_C > 0 ? p.g_isis * p.g_isis * p.Delta * p.delta_is / p.E_C * kKelvinToRatePerNs : 0.0;
    return {charge, thermal};
}

DerivedModel model_params_from_rates(const DeviceParams &p, ModelKind model) {
    validate(p);
    DerivedModel out;
    ModelParams &mp = out.params;
    mp.model = model;
    mp.m = p.m;

    RatePair th = thermal_rates(p);
    TransferRates tr = transfer_rates(p);
    std::array<double, 3> pk{};
    double q2 = 0;
    for (size_t k = 0; k < 3; k++) {
        RatePair ch = poisoning_rates(p, k);
        pk[k] = 2.0 * double(p.m) * (th.excite + ch.excite) * p.tau;
        double tau_r = 0;
        if (th.excite > 0) {
            tau_r = std::max(tau_r, 1.0 / th.relax);
        }
        if (ch.excite > 0) {
            tau_r = std::max(tau_r, 1.0 / ch.relax);
        }
        out.r_k[k] = tau_r / p.tau;
        if (k == 2) {
            if (th.excite > 0) {
                q2 = std::max(q2, std::expm1(tr.thermal / th.relax));
            }
            if (ch.excite > 0) {
                q2 = std::max(q2, std::expm1(tr.charge / ch.relax));
            }
        }
    }
    double r = *std::max_element(out.r_k.begin(), out.r_k.end());
    if (r >= 1) {
        throw std::invalid_argument(
            "r >= 1: excitations outlive the time step; use the long-lived model (MCLongLived) with explicit r");
    }
    mp.p0 = pk[0];
    mp.p1 = pk[1];
    mp.p2 = pk[2];
    mp.r = r;
    mp.q = std::clamp(q2, 0.0, 1.0);
    mp.p_mst1 = std::exp(-p.tau / p.tau_mst[1]);
    mp.p_mst2 = std::exp(-p.tau / p.tau_mst[2]);
    out.hybridization_rate = std::sqrt(p.S_EE_int) * std::exp(-p.L_over_xi);
    mp.p_pair_extra = double(p.m) * out.hybridization_rate * p.tau;

    if (q2 > 1) {
        out.warnings.push_back("q2 exceeded 1 and was clamped");
    }
    if (p.T >= std::min(p.Delta, p.E_C)) {
        out.warnings.push_back("T >= min(Delta, E_C): rates are outside their intended regime");
    }
    if (!(pk[0] < pk[1] && pk[1] <= pk[2] * 1.5)) {
        out.warnings.push_back("expected ordering p0 < p1 <~ p2 does not hold");
    }
    for (double v : pk) {
        if (v > 1) {
            out.warnings.push_back("p_k exceeds 1; the time step is too long for these rates");
            break;
        }
    }
    return out;
}

}  // namespace mzmqec
