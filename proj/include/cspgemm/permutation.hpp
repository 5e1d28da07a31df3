#pragma once

#include "cspgemm/types.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace cspgemm {

/// A bijection on [0, size). perm[new_position] = old_index and
/// inv[old_index] = new_position; the two arrays are mutually inverse.
struct Permutation {
    index_t size = 0;
    std::vector<index_t> perm;
    std::vector<index_t> inv;

    static Permutation identity(index_t n) {
        Permutation p;
        p.size = n;
        p.perm.resize(n);
        p.inv.resize(n);
        std::iota(p.perm.begin(), p.perm.end(), index_t{0});
        std::iota(p.inv.begin(), p.inv.end(), index_t{0});
        return p;
    }

    /// Builds the permutation (and its inverse) from the new-position ->
    /// old-index array, validating that it is a bijection.
    static Permutation from_perm(std::vector<index_t> perm_array) {
        Permutation p;
        p.size = static_cast<index_t>(perm_array.size());
        p.perm = std::move(perm_array);
        p.inv.assign(p.size, index_t{-1});
        for (index_t np = 0; np < p.size; ++np) {
            const index_t old = p.perm[np];
            detail::require(old >= 0 && old < p.size,
                            "permutation: index " + std::to_string(old) + " out of range");
            detail::require(p.inv[old] == -1,
                            "permutation: duplicate index " + std::to_string(old));
            p.inv[old] = np;
        }
        return p;
    }

    Permutation inverse() const {
        Permutation q;
        q.size = size;
        q.perm = inv;
        q.inv = perm;
        return q;
    }
};

} // namespace cspgemm
