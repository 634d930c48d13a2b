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

#ifndef MZMQEC_MAJORANA_FRAME_H
#define MZMQEC_MAJORANA_FRAME_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mzmqec {

/// Dense bit vector over GF(2), packed little-endian into 64 bit words.
class BitVec {
   public:
    BitVec() = default;
    explicit BitVec(size_t num_bits);
    static BitVec from_string(const std::string &bits);

    size_t size() const {
        return num_bits_;
    }
    bool get(size_t k) const {
        return (words_[k >> 6] >> (k & 63)) & 1;
    }
    void set(size_t k, bool value);
    void flip(size_t k) {
        words_[k >> 6] ^= uint64_t{1} << (k & 63);
    }
    void clear();

    size_t popcount() const;
    bool not_zero() const;
    /// Parity of |self AND other|. Sizes must match.
    bool and_parity(const BitVec &other) const;

    BitVec &operator^=(const BitVec &other);
    bool operator==(const BitVec &other) const;
    bool operator!=(const BitVec &other) const {
        return !(*this == other);
    }

    const std::vector<uint64_t> &words() const {
        return words_;
    }
    std::vector<uint64_t> &words() {
        return words_;
    }
    std::string str() const;

   private:
    size_t num_bits_ = 0;
    std::vector<uint64_t> words_;
};

/// Address of the Majorana operator gamma_{island, site + 1}.
struct MzmIndex {
    size_t island;
    size_t site;
};

/// Flat index island * sites_per_island + site.
size_t flat_index(MzmIndex idx, size_t sites_per_island);
MzmIndex split_index(size_t flat, size_t sites_per_island);

/// Net set of Majorana operators applied to the system, one bit per MZM.
/// Phases are not tracked.
class MajoranaString {
   public:
    MajoranaString() = default;
    MajoranaString(size_t num_islands, size_t sites_per_island);

    size_t num_islands() const {
        return num_islands_;
    }
    size_t sites_per_island() const {
        return sites_per_island_;
    }
    size_t num_sites() const {
        return bits_.size();
    }

    bool get(MzmIndex idx) const {
        return bits_.get(idx.island * sites_per_island_ + idx.site);
    }
    void flip(MzmIndex idx) {
        bits_.flip(idx.island * sites_per_island_ + idx.site);
    }
    /// Bits of one island as a small mask (bit a = site a).
    uint32_t island_mask(size_t island) const;
    /// XORs a site mask into one island.
    void xor_island_mask(size_t island, uint32_t mask);

    bool island_parity(size_t island) const;
    size_t weight() const {
        return bits_.popcount();
    }
    bool is_zero() const {
        return !bits_.not_zero();
    }

    const BitVec &bits() const {
        return bits_;
    }
    BitVec &bits() {
        return bits_;
    }

    bool operator==(const MajoranaString &other) const;
    bool operator!=(const MajoranaString &other) const {
        return !(*this == other);
    }

   private:
    size_t num_islands_ = 0;
    size_t sites_per_island_ = 0;
    BitVec bits_;
};

/// Returns frame XOR event. Throws std::invalid_argument on shape mismatch.
MajoranaString xor_accumulate(const MajoranaString &frame, const MajoranaString &event);

/// |support(a) AND support(b)| mod 2. The second argument must have even
/// weight, since otherwise this is not the commutation parity.
bool overlap_parity(const MajoranaString &a, const MajoranaString &b);

/// Row-major GF(2) matrix.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(size_t num_rows, size_t num_cols);
    static BitMatrix identity(size_t n);

    size_t num_rows() const {
        return rows_.size();
    }
    size_t num_cols() const {
        return num_cols_;
    }
    const BitVec &row(size_t r) const {
        return rows_[r];
    }
    BitVec &row(size_t r) {
        return rows_[r];
    }
    void push_row(BitVec row);

   private:
    size_t num_cols_ = 0;
    std::vector<BitVec> rows_;
};

/// Row i of the result is the parity of row i of m against v.
BitVec mat_vec_parity(const BitMatrix &m, const BitVec &v);

/// Per-island parity bits, updated incrementally as events are applied.
class IslandParities {
   public:
    IslandParities() = default;
    explicit IslandParities(size_t num_islands);
    static IslandParities from_string(const MajoranaString &s);

    bool odd(size_t island) const {
        return parity_[island] != 0;
    }
    void toggle(size_t island) {
        parity_[island] ^= 1;
    }
    void apply(const MajoranaString &event);
    size_t num_islands() const {
        return parity_.size();
    }
    size_t num_odd() const;
    void clear();
    /// True when the cached bits match a recount of the frame.
    bool consistent_with(const MajoranaString &frame) const;

    bool operator==(const IslandParities &other) const {
        return parity_ == other.parity_;
    }

   private:
    std::vector<uint8_t> parity_;
};

}  // namespace mzmqec

#endif
