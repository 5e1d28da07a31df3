#pragma once

#include "cspgemm/types.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace cspgemm {

/// Open-addressed sparse accumulator keyed by column index, with linear
/// probing and a multiply-shift hash. Capacity is kept at the smallest power
/// of two >= 2x the expected number of distinct keys, so probe chains stay
/// short and no rehash happens mid-row. One accumulator is reused across the
/// rows a worker processes; clear() touches only the occupied slots.
class HashAccumulator {
public:
    static constexpr index_t kEmpty = -1;

    /// Prepares the table for a row with at most `upper_bound` distinct keys.
    /// Also clears any previous contents.
    void reserve(std::size_t upper_bound) {
        std::size_t want = 16;
        while (want < 2 * upper_bound) want <<= 1;
        if (want > keys_.size()) {
            keys_.assign(want, kEmpty);
            vals_.assign(want, 0.0);
            shift_ = 64;
            for (std::size_t c = want; c > 1; c >>= 1) --shift_;
            mask_ = want - 1;
            used_.clear();
        } else {
            clear();
        }
    }

    void clear() {
        for (std::size_t pos : used_) keys_[pos] = kEmpty;
        used_.clear();
    }

    std::size_t size() const { return used_.size(); }
    std::size_t capacity() const { return keys_.size(); }

    /// Inserts a key without a value (symbolic phase). Returns true when the
    /// key was not present before.
    bool insert_key(index_t key) {
        std::size_t pos = slot_of(key);
        if (keys_[pos] == key) return false;
        keys_[pos] = key;
        used_.push_back(pos);
        return true;
    }

    /// Adds v to the entry for key, inserting it at 0.0 first if absent.
    void accumulate(index_t key, value_t v) {
        std::size_t pos = slot_of(key);
        if (keys_[pos] != key) {
            keys_[pos] = key;
            vals_[pos] = 0.0;
            used_.push_back(pos);
        }
        vals_[pos] += v;
    }

    /// Pointer to the stored value for key, or nullptr when absent.
    const value_t* find(index_t key) const {
        if (keys_.empty()) return nullptr;
        std::size_t pos = hash(key);
        while (keys_[pos] != kEmpty) {
            if (keys_[pos] == key) return &vals_[pos];
            pos = (pos + 1) & mask_;
        }
        return nullptr;
    }

    /// Appends the accumulated (key, value) pairs sorted by key.
    void extract_sorted(std::vector<index_t>& cols, std::vector<value_t>& vals) const {
        const std::size_t base = cols.size();
        for (std::size_t pos : used_) cols.push_back(keys_[pos]);
        std::sort(cols.begin() + base, cols.end());
        for (std::size_t k = base; k < cols.size(); ++k) vals.push_back(*find(cols[k]));
    }

    /// Keys only, sorted.
    void extract_keys_sorted(std::vector<index_t>& cols) const {
        const std::size_t base = cols.size();
        for (std::size_t pos : used_) cols.push_back(keys_[pos]);
        std::sort(cols.begin() + base, cols.end());
    }

private:
    std::size_t hash(index_t key) const {
        return static_cast<std::size_t>(
            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(key)) *
             UINT64_C(0x9E3779B97F4A7C15)) >>
            shift_);
    }

    // First slot in the probe chain that either holds `key` or is empty.
    std::size_t slot_of(index_t key) const {
        std::size_t pos = hash(key);
        while (keys_[pos] != kEmpty && keys_[pos] != key) pos = (pos + 1) & mask_;
        return pos;
    }

    std::vector<index_t> keys_;
    std::vector<value_t> vals_;
    std::vector<std::size_t> used_;
    std::size_t mask_ = 0;
    int shift_ = 64;
};

} // namespace cspgemm
