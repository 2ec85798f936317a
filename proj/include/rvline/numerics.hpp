#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rvline {

// Arbitrary-precision non-negative integer. Labels can be tower-sized
// (up to 2^65536), so a fixed-width type is not an option.
using Natural = boost::multiprecision::cpp_int;

// Number of binary digits of n, with bit_length(0) = 1 (the string "0").
std::size_t bit_length(const Natural& n);

/// Finite sequence of bits where index 0 is the LEAST significant position.
/// Text form (to_text/from_text) is written most-significant-first, the way
/// binary numbers are usually printed.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::vector<std::uint8_t> lsb_first_bits);

    static BitString from_text(std::string_view msb_first);
    std::string to_text() const;

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    // Bit at LSB-index i.
    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }

    // Appends a bit at the most significant end.
    void push_msb(std::uint8_t bit) { bits_.push_back(bit); }

    // Shifts every bit one position up and inserts `bit` at index 0. This is
    // string concatenation "S . bit" in most-significant-first notation.
    void append_lsb(std::uint8_t bit) { bits_.insert(bits_.begin(), bit); }

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

// tower(0) = 1, tower(k) = 2^tower(k-1). Throws ResourceError for k > 5:
// tower(6) has 2^65536 bits and cannot be materialized.
Natural tower(unsigned k);

// Iterated logarithm: 0 for n <= 1, otherwise the least k with tower(k) >= n.
// Exactly equal to the recursive definition 1 + log*(log2 n) on integers.
unsigned log_star(const Natural& n);

// Base-2 representation; binary_rep(0) is the single-bit string "0".
BitString binary_rep(const Natural& n);

// Positional value of s; inverse of binary_rep up to leading zeros.
Natural int_val(const BitString& s);

// Suffix-free encoding: each 0 becomes 01, each 1 becomes 10, then 00 is
// prepended (at the most significant end). Output length is 2|s| + 2, and no
// encoded string is a suffix of another.
BitString encode_sf(const BitString& s);

// Cole-Vishkin colour choice. Finds the least LSB-index i where the
// suffix-free encodings of the two binary representations differ, and returns
// int_val(binary_rep(i) . own_bit). The result lies in {0, ..., 8*l + 3}
// where l is the bit length of the smaller input. Throws PreconditionError
// when mine == other.
Natural cv_choice(const Natural& mine, const Natural& other);

}  // namespace rvline
