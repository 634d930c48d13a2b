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

#include "mzmqec/majorana_frame.h"

#include <bit>
#include <stdexcept>

namespace mzmqec {

BitVec::BitVec(size_t num_bits) : num_bits_(num_bits), words_((num_bits + 63) / 64, 0) {
}

BitVec BitVec::from_string(const std::string &bits) {
    BitVec result(bits.size());
    for (size_t k = 0; k < bits.size(); k++) {
        if (bits[k] == '1') {
            result.flip(k);
        } else if (bits[k] != '0') {
            throw std::invalid_argument("bit string may only contain '0' and '1'");
        }
    }
    return result;
}

void BitVec::set(size_t k, bool value) {
    uint64_t m = uint64_t{1} << (k & 63);
    if (value) {
        words_[k >> 6] |= m;
    } else {
        words_[k >> 6] &= ~m;
    }
}

void BitVec::clear() {
    for (auto &w : words_) {
        w = 0;
    }
}

size_t BitVec::popcount() const {
    size_t n = 0;
    for (auto w : words_) {
        n += std::popcount(w);
    }
    return n;
}

bool BitVec::not_zero() const {
    uint64_t acc = 0;
    for (auto w : words_) {
        acc |= w;
    }
    return acc != 0;
}

bool BitVec::and_parity(const BitVec &other) const {
    if (other.num_bits_ != num_bits_) {
        throw std::invalid_argument("and_parity: length mismatch");
    }
    uint64_t acc = 0;
    for (size_t k = 0; k < words_.size(); k++) {
        acc ^= words_[k] & other.words_[k];
    }
    return std::popcount(acc) & 1;
}

BitVec &BitVec::operator^=(const BitVec &other) {
    if (other.num_bits_ != num_bits_) {
        throw std::invalid_argument("xor: length mismatch");
    }
    for (size_t k = 0; k < words_.size(); k++) {
        words_[k] ^= other.words_[k];
    }
    return *this;
}

bool BitVec::operator==(const BitVec &other) const {
    return num_bits_ == other.num_bits_ && words_ == other.words_;
}

std::string BitVec::str() const {
    std::string s(num_bits_, '0');
    for (size_t k = 0; k < num_bits_; k++) {
        if (get(k)) {
            s[k] = '1';
        }
    }
    return s;
}

size_t flat_index(MzmIndex idx, size_t sites_per_island) {
    if (idx.site >= sites_per_island) {
        throw std::invalid_argument("site out of range");
    }
    return idx.island * sites_per_island + idx.site;
}

MzmIndex split_index(size_t flat, size_t sites_per_island) {
    return {flat / sites_per_island, flat % sites_per_island};
}

MajoranaString::MajoranaString(size_t num_islands, size_t sites_per_island)
    : num_islands_(num_islands), sites_per_island_(sites_per_island), bits_(num_islands * sites_per_island) {
    if (sites_per_island == 0 || sites_per_island % 2 != 0 || sites_per_island > 32) {
        throw std::invalid_argument("sites_per_island must be even and in [2, 32]");
    }
}

uint32_t MajoranaString::island_mask(size_t island) const {
    uint32_t m = 0;
    size_t base = island * sites_per_island_;
    for (size_t a = 0; a < sites_per_island_; a++) {
        m |= uint32_t(bits_.get(base + a)) << a;
    }
    return m;
}

void MajoranaString::xor_island_mask(size_t island, uint32_t mask) {
    size_t base = island * sites_per_island_;
    while (mask) {
        size_t a = std::countr_zero(mask);
        bits_.flip(base + a);
        mask &= mask - 1;
    }
}

bool MajoranaString::island_parity(size_t island) const {
    return std::popcount(island_mask(island)) & 1;
}

bool MajoranaString::operator==(const MajoranaString &other) const {
    return sites_per_island_ == other.sites_per_island_ && bits_ == other.bits_;
}

MajoranaString xor_accumulate(const MajoranaString &frame, const MajoranaString &event) {
    if (frame.num_islands() != event.num_islands() || frame.sites_per_island() != event.sites_per_island()) {
        throw std::invalid_argument("xor_accumulate: shape mismatch");
    }
    MajoranaString out = frame;
    out.bits() ^= event.bits();
    return out;
}

bool overlap_parity(const MajoranaString &a, const MajoranaString &b) {
    if (a.num_sites() != b.num_sites()) {
        throw std::invalid_argument("overlap_parity: length mismatch");
    }
    if (b.weight() & 1) {
        throw std::invalid_argument("overlap_parity: second operand must have even weight");
    }
    return a.bits().and_parity(b.bits());
}

BitMatrix::BitMatrix(size_t num_rows, size_t num_cols) : num_cols_(num_cols), rows_(num_rows, BitVec(num_cols)) {
}

BitMatrix BitMatrix::identity(size_t n) {
    BitMatrix m(n, n);
    for (size_t k = 0; k < n; k++) {
        m.row(k).flip(k);
    }
    return m;
}

void BitMatrix::push_row(BitVec row) {
    if (rows_.empty() && num_cols_ == 0) {
        num_cols_ = row.size();
    }
    if (row.size() != num_cols_) {
        throw std::invalid_argument("push_row: column count mismatch");
    }
    rows_.push_back(std::move(row));
}

BitVec mat_vec_parity(const BitMatrix &m, const BitVec &v) {
    if (v.size() != m.num_cols()) {
        throw std::invalid_argument("mat_vec_parity: dimension mismatch");
    }
    BitVec out(m.num_rows());
    for (size_t r = 0; r < m.num_rows(); r++) {
        if (m.row(r).and_parity(v)) {
            out.flip(r);
        }
    }
    return out;
}

IslandParities::IslandParities(size_t num_islands) : parity_(num_islands, 0) {
}

IslandParities IslandParities::from_string(const MajoranaString &s) {
    IslandParities p(s.num_islands());
    for (size_t j = 0; j < s.num_islands(); j++) {
        p.parity_[j] = s.island_parity(j);
    }
    return p;
}

void IslandParities::apply(const MajoranaString &event) {
    if (event.num_islands() != parity_.size()) {
        throw std::invalid_argument("IslandParities::apply: island count mismatch");
    }
    for (size_t j = 0; j < parity_.size(); j++) {
        parity_[j] ^= event.island_parity(j);
    }
}

size_t IslandParities::num_odd() const {
    size_t n = 0;
    for (auto p : parity_) {
        n += p;
    }
    return n;
}

void IslandParities::clear() {
    for (auto &p : parity_) {
        p = 0;
    }
}

bool IslandParities::consistent_with(const MajoranaString &frame) const {
    return *this == from_string(frame);
}

}  // namespace mzmqec
