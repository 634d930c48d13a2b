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

#ifndef MZMQEC_BACON_SHOR_H
#define MZMQEC_BACON_SHOR_H

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mzmqec/majorana_frame.h"

namespace mzmqec {

enum class LayoutKind { Standard, Geometric };

std::string layout_name(LayoutKind kind);
LayoutKind parse_layout(const std::string &name);

/// Tetron site masks (bit a = gamma_{a+1}) for the standard Pauli mapping.
constexpr uint32_t kPauliX = 0b0110;
constexpr uint32_t kPauliY = 0b0101;
constexpr uint32_t kPauliZ = 0b0011;
constexpr uint32_t kFullIsland = 0b1111;

/// One two-island gauge measurement. Island a is the left (XX) or top (ZZ)
/// member of the pair.
struct MeasuredPair {
    size_t gauge;
    size_t island_a;
    size_t island_b;
    uint32_t sites_a;
    uint32_t sites_b;
    /// The two MZM pairs joined by the measurement, as (site on a, site on b).
    std::array<std::pair<uint8_t, uint8_t>, 2> connected;
};

struct ScheduleStep {
    std::vector<MeasuredPair> pairs;
    std::vector<size_t> idle;
    /// Stabilizers whose gauge generators are all measured in this step.
    uint64_t stab_mask = 0;
};

/// Stabilizer outcomes, X type (column pairs) first, then Z type (row pairs).
struct Syndrome {
    uint64_t bits = 0;
    size_t len = 0;

    bool get(size_t k) const {
        return (bits >> k) & 1;
    }
    bool operator==(const Syndrome &other) const {
        return bits == other.bits && len == other.len;
    }
    bool operator!=(const Syndrome &other) const {
        return !(*this == other);
    }
};

struct CodeLayout {
    size_t d = 0;
    LayoutKind layout = LayoutKind::Standard;
    size_t sites_per_island = 4;
    size_t n_islands = 0;
    size_t n_gauges = 0;
    size_t n_stabs = 0;

    BitMatrix gauge_matrix;
    BitMatrix stab_gauge_matrix;
    BitMatrix logical_matrix;
    std::array<ScheduleStep, 4> schedule;

    /// Site masks used for corrections: X on the left column, Z on the top row.
    uint32_t x_rep = kPauliX;
    uint32_t z_rep = kPauliZ;

    /// Per MZM site: stabilizer bits in the low n_stabs bits, then one bit per
    /// logical row (X bar, Z bar). Lets the engine track a frame by XOR alone.
    std::vector<uint64_t> site_signature;
    /// Stabilizer bit that each gauge generator contributes to.
    std::vector<uint8_t> gauge_stab;
    /// Signature of the correction for every syndrome, when 2(d-1) <= 20.
    std::vector<uint64_t> correction_lut;

    size_t island(size_t row, size_t col) const {
        return row * d + col;
    }
    uint64_t stab_bits_mask() const {
        return n_stabs == 64 ? ~uint64_t{0} : (uint64_t{1} << n_stabs) - 1;
    }
    uint64_t logical_bits_mask() const {
        return uint64_t{3} << n_stabs;
    }
    /// Signature of an island-local site mask.
    uint64_t island_signature(size_t island, uint32_t mask) const;
    MajoranaString zero_string() const {
        return MajoranaString(n_islands, sites_per_island);
    }
    MajoranaString gauge_string(size_t g) const;
    MajoranaString logical_string(size_t which) const;
    MajoranaString stabilizer_string(size_t s) const;
};

/// Builds the distance-d code. Throws std::invalid_argument for even d, d < 3
/// or d > 31.
CodeLayout build_code(size_t d, LayoutKind layout);

/// Pauli operator on one island of the standard mapping ('X', 'Y' or 'Z').
MajoranaString pauli_string(const CodeLayout &code, size_t island, char pauli);

/// Noiseless stabilizer outcomes of a frame.
Syndrome syndrome_of(const MajoranaString &frame, const CodeLayout &code);

/// Minimum-weight line decoder. Returns the correction string.
MajoranaString decode_syndrome(const Syndrome &s, const CodeLayout &code);

/// Signature (see CodeLayout::site_signature) of decode_syndrome(s).
uint64_t correction_signature(uint64_t syndrome_bits, const CodeLayout &code);

/// Accepts the last syndrome repeated in two consecutive rounds, else round 4.
Syndrome select_syndrome(const std::array<Syndrome, 4> &rounds);
uint64_t select_syndrome_bits(const uint64_t rounds[4]);

/// True when the residual anticommutes with a bare logical representative.
bool is_logical_failure(const MajoranaString &residual, const CodeLayout &code);

/// Signature of an arbitrary string.
uint64_t signature_of(const MajoranaString &s, const CodeLayout &code);

}  // namespace mzmqec

#endif
