#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cspgemm {

// 32-bit indices and offsets cover matrices up to 2^31-1 nonzeros, which is
// the default accounting width everywhere in this library. Values are doubles.
using index_t = std::int32_t;
using value_t = double;

/// Thrown when an operation's preconditions are violated (shape mismatches,
/// invalid partitions, bad permutations).
class contract_error : public std::invalid_argument {
public:
    explicit contract_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown on malformed input files (Matrix Market, permutation files,
/// binary cluster dumps).
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw contract_error(msg);
}

// Maps a 64-bit draw to [0, n) by the multiply-shift reduction; at matrix
// scale the bias is far below anything a frequency test can see.
inline std::uint64_t bounded(std::uint64_t x, std::uint64_t n) {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(x) * n) >> 64);
}

} // namespace detail

} // namespace cspgemm
