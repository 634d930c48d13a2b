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

#include "mzmqec/bacon_shor.h"

#include <bit>
#include <stdexcept>

namespace mzmqec {

namespace {

uint32_t mask_of(uint8_t a, uint8_t b) {
    return (uint32_t{1} << a) | (uint32_t{1} << b);
}

MeasuredPair make_pair(const CodeLayout &c, size_t gauge, size_t a, size_t b, bool horizontal) {
    MeasuredPair p{};
    p.gauge = gauge;
    p.island_a = a;
    p.island_b = b;
    std::pair<uint8_t, uint8_t> c0, c1;
    if (c.layout == LayoutKind::Standard) {
        // Same Pauli on both islands; each dot couples equal sites.
        uint32_t rep = horizontal ? kPauliX : kPauliZ;
        uint8_t s0 = std::countr_zero(rep);
        uint8_t s1 = 31 - std::countl_zero(rep);
        c0 = {s0, s0};
        c1 = {s1, s1};
    } else if (horizontal) {
        c0 = {1, 0};
        c1 = {2, 3};
    } else {
        c0 = {2, 0};
        c1 = {3, 1};
    }
    p.connected = {c0, c1};
    p.sites_a = mask_of(c0.first, c1.first);
    p.sites_b = mask_of(c0.second, c1.second);
    return p;
}

void fill_row(BitVec &row, size_t island, uint32_t mask, size_t sites) {
    for (size_t a = 0; a < sites; a++) {
        if ((mask >> a) & 1) {
            row.flip(island * sites + a);
        }
    }
}

}  // namespace

std::string layout_name(LayoutKind kind) {
    return kind == LayoutKind::Standard ? "standard" : "geometric";
}

LayoutKind parse_layout(const std::string &name) {
    if (name == "standard") {
        return LayoutKind::Standard;
    }
    if (name == "geometric") {
        return LayoutKind::Geometric;
    }
    throw std::invalid_argument("unknown layout '" + name + "'");
}

uint64_t CodeLayout::island_signature(size_t isl, uint32_t mask) const {
    uint64_t sig = 0;
    size_t base = isl * sites_per_island;
    while (mask) {
        sig ^= site_signature[base + std::countr_zero(mask)];
        mask &= mask - 1;
    }
    return sig;
}

MajoranaString CodeLayout::gauge_string(size_t g) const {
    MajoranaString s = zero_string();
    s.bits() = gauge_matrix.row(g);
    return s;
}

MajoranaString CodeLayout::logical_string(size_t which) const {
    MajoranaString s = zero_string();
    s.bits() = logical_matrix.row(which);
    return s;
}

MajoranaString CodeLayout::stabilizer_string(size_t st) const {
    MajoranaString s = zero_string();
    const BitVec &row = stab_gauge_matrix.row(st);
    for (size_t g = 0; g < n_gauges; g++) {
        if (row.get(g)) {
            s.bits() ^= gauge_matrix.row(g);
        }
    }
    return s;
}

CodeLayout build_code(size_t d, LayoutKind layout) {
    if (d < 3 || d % 2 == 0 || d > 31) {
        throw std::invalid_argument("code distance must be odd and in [3, 31]");
    }
    CodeLayout c;
    c.d = d;
    c.layout = layout;
    c.n_islands = d * d;
    c.n_gauges = 2 * d * (d - 1);
    c.n_stabs = 2 * (d - 1);
    size_t n_sites = c.n_islands * c.sites_per_island;
    if (layout == LayoutKind::Geometric) {
        c.x_rep = kPauliX;
        c.z_rep = 0b1100;
    }

    // Gauge rows: XX(r,c)(r,c+1) at c*d + r, then ZZ(r,c)(r+1,c) at d(d-1) + r*d + c.
    std::vector<MeasuredPair> all_pairs(c.n_gauges);
    c.gauge_matrix = BitMatrix(c.n_gauges, n_sites);
    for (size_t col = 0; col + 1 < d; col++) {
        for (size_t r = 0; r < d; r++) {
            size_t g = col * d + r;
            all_pairs[g] = make_pair(c, g, c.island(r, col), c.island(r, col + 1), true);
        }
    }
    for (size_t r = 0; r + 1 < d; r++) {
        for (size_t col = 0; col < d; col++) {
            size_t g = d * (d - 1) + r * d + col;
            all_pairs[g] = make_pair(c, g, c.island(r, col), c.island(r + 1, col), false);
        }
    }
    for (const auto &p : all_pairs) {
        fill_row(c.gauge_matrix.row(p.gauge), p.island_a, p.sites_a, c.sites_per_island);
        fill_row(c.gauge_matrix.row(p.gauge), p.island_b, p.sites_b, c.sites_per_island);
    }

    c.stab_gauge_matrix = BitMatrix(c.n_stabs, c.n_gauges);
    c.gauge_stab.assign(c.n_gauges, 0);
    for (size_t s = 0; s + 1 < d; s++) {
        for (size_t k = 0; k < d; k++) {
            size_t gx = s * d + k;
            size_t gz = d * (d - 1) + s * d + k;
            c.stab_gauge_matrix.row(s).flip(gx);
            c.stab_gauge_matrix.row(d - 1 + s).flip(gz);
            c.gauge_stab[gx] = s;
            c.gauge_stab[gz] = d - 1 + s;
        }
    }

    c.logical_matrix = BitMatrix(2, n_sites);
    for (size_t k = 0; k < d; k++) {
        fill_row(c.logical_matrix.row(0), c.island(k, 0), c.x_rep, c.sites_per_island);
        fill_row(c.logical_matrix.row(1), c.island(0, k), c.z_rep, c.sites_per_island);
    }

    // Steps 1, 2: X stabilizers on even then odd column pairs. Steps 3, 4: Z rows.
    for (size_t step = 0; step < 4; step++) {
        ScheduleStep &st = c.schedule[step];
        bool x_type = step < 2;
        size_t parity = step % 2;
        std::vector<uint8_t> busy(c.n_islands, 0);
        for (size_t s = parity; s + 1 < d; s += 2) {
            size_t stab = x_type ? s : d - 1 + s;
            st.stab_mask |= uint64_t{1} << stab;
            for (size_t k = 0; k < d; k++) {
                size_t g = x_type ? s * d + k : d * (d - 1) + s * d + k;
                st.pairs.push_back(all_pairs[g]);
                busy[all_pairs[g].island_a] = 1;
                busy[all_pairs[g].island_b] = 1;
            }
        }
        for (size_t j = 0; j < c.n_islands; j++) {
            if (!busy[j]) {
                st.idle.push_back(j);
            }
        }
    }

    c.site_signature.assign(n_sites, 0);
    for (size_t s = 0; s < c.n_stabs; s++) {
        MajoranaString stab = c.stabilizer_string(s);
        for (size_t i = 0; i < n_sites; i++) {
            if (stab.bits().get(i)) {
                c.site_signature[i] |= uint64_t{1} << s;
            }
        }
    }
    for (size_t l = 0; l < 2; l++) {
        for (size_t i = 0; i < n_sites; i++) {
            if (c.logical_matrix.row(l).get(i)) {
                c.site_signature[i] |= uint64_t{1} << (c.n_stabs + l);
            }
        }
    }

    if (c.n_stabs <= 20) {
        std::vector<uint64_t> lut(size_t{1} << c.n_stabs);
        for (uint64_t s = 0; s < lut.size(); s++) {
            lut[s] = correction_signature(s, c);
        }
        c.correction_lut = std::move(lut);
    }
    return c;
}

MajoranaString pauli_string(const CodeLayout &code, size_t island, char pauli) {
    uint32_t mask;
    switch (pauli) {
        case 'X':
            mask = kPauliX;
            break;
        case 'Y':
            mask = kPauliY;
            break;
        case 'Z':
            mask = kPauliZ;
            break;
        case 'I':
            mask = 0;
            break;
        default:
            throw std::invalid_argument("pauli must be one of IXYZ");
    }
    MajoranaString s = code.zero_string();
    s.xor_island_mask(island, mask);
    return s;
}

Syndrome syndrome_of(const MajoranaString &frame, const CodeLayout &code) {
    BitVec gauge = mat_vec_parity(code.gauge_matrix, frame.bits());
    BitVec stab = mat_vec_parity(code.stab_gauge_matrix, gauge);
    Syndrome s;
    s.len = code.n_stabs;
    for (size_t k = 0; k < code.n_stabs; k++) {
        s.bits |= uint64_t(stab.get(k)) << k;
    }
    return s;
}

namespace {

/// Lines (rows or columns) flagged by a chain of d-1 difference bits.
uint64_t decode_lines(uint64_t diffs, size_t d) {
    uint64_t lines = 0;
    bool e = false;
    for (size_t i = 0; i + 1 < d; i++) {
        e ^= (diffs >> i) & 1;
        lines |= uint64_t(e) << (i + 1);
    }
    if (size_t(std::popcount(lines)) > (d - 1) / 2) {
        lines ^= (uint64_t{1} << d) - 1;
    }
    return lines;
}

}  // namespace

MajoranaString decode_syndrome(const Syndrome &s, const CodeLayout &code) {
    size_t d = code.d;
    uint64_t line_mask = (uint64_t{1} << (d - 1)) - 1;
    uint64_t cols = decode_lines(s.bits & line_mask, d);
    uint64_t rows = decode_lines((s.bits >> (d - 1)) & line_mask, d);
    MajoranaString out = code.zero_string();
    for (size_t k = 0; k < d; k++) {
        if ((rows >> k) & 1) {
            out.xor_island_mask(code.island(k, 0), code.x_rep);
        }
        if ((cols >> k) & 1) {
            out.xor_island_mask(code.island(0, k), code.z_rep);
        }
    }
    return out;
}

uint64_t correction_signature(uint64_t syndrome_bits, const CodeLayout &code) {
    if (!code.correction_lut.empty()) {
        return code.correction_lut[syndrome_bits];
    }
    size_t d = code.d;
    uint64_t line_mask = (uint64_t{1} << (d - 1)) - 1;
    uint64_t cols = decode_lines(syndrome_bits & line_mask, d);
    uint64_t rows = decode_lines((syndrome_bits >> (d - 1)) & line_mask, d);
    uint64_t sig = 0;
    for (size_t k = 0; k < d; k++) {
        if ((rows >> k) & 1) {
            sig ^= code.island_signature(code.island(k, 0), code.x_rep);
        }
        if ((cols >> k) & 1) {
            sig ^= code.island_signature(code.island(0, k), code.z_rep);
        }
    }
    return sig;
}

uint64_t select_syndrome_bits(const uint64_t rounds[4]) {
    for (size_t t = 3; t >= 1; t--) {
        if (rounds[t] == rounds[t - 1]) {
            return rounds[t];
        }
    }
    return rounds[3];
}

Syndrome select_syndrome(const std::array<Syndrome, 4> &rounds) {
    uint64_t bits[4] = {rounds[0].bits, rounds[1].bits, rounds[2].bits, rounds[3].bits};
    return Syndrome{select_syndrome_bits(bits), rounds[3].len};
}

bool is_logical_failure(const MajoranaString &residual, const CodeLayout &code) {
    return residual.bits().and_parity(code.logical_matrix.row(0)) ||
           residual.bits().and_parity(code.logical_matrix.row(1));
}

uint64_t signature_of(const MajoranaString &s, const CodeLayout &code) {
    uint64_t sig = 0;
    for (size_t i = 0; i < s.num_sites(); i++) {
        if (s.bits().get(i)) {
            sig ^= code.site_signature[i];
        }
    }
    return sig;
}

}  // namespace mzmqec
