#include "rvline/numerics.hpp"

#include <algorithm>
#include <stdexcept>

#include "rvline/errors.hpp"

namespace rvline {

std::size_t bit_length(const Natural& n) {
    if (n < 0) {
        throw PreconditionError("bit_length: negative input");
    }
    if (n == 0) {
        return 1;
    }
    return static_cast<std::size_t>(boost::multiprecision::msb(n)) + 1;
}

BitString::BitString(std::vector<std::uint8_t> lsb_first_bits) : bits_(std::move(lsb_first_bits)) {
    for (std::uint8_t b : bits_) {
        if (b > 1) {
            throw PreconditionError("BitString: bits must be 0 or 1");
        }
    }
}

BitString BitString::from_text(std::string_view msb_first) {
    BitString out;
    out.bits_.reserve(msb_first.size());
    for (auto it = msb_first.rbegin(); it != msb_first.rend(); ++it) {
        if (*it == '0') {
            out.bits_.push_back(0);
        } else if (*it == '1') {
            out.bits_.push_back(1);
        } else {
            throw PreconditionError("BitString: text must consist of '0' and '1'");
        }
    }
    return out;
}

std::string BitString::to_text() const {
    std::string out;
    out.reserve(bits_.size());
    for (auto it = bits_.rbegin(); it != bits_.rend(); ++it) {
        out.push_back(*it ? '1' : '0');
    }
    return out;
}

Natural tower(unsigned k) {
    if (k > 5) {
        throw ResourceError("tower: k > 5 cannot be materialized");
    }
    Natural t = 1;
    for (unsigned i = 0; i < k; ++i) {
        Natural next = Natural(1) << static_cast<unsigned long>(t.convert_to<unsigned long>());
        t = std::move(next);
    }
    return t;
}

unsigned log_star(const Natural& n) {
    if (n < 0) {
        throw PreconditionError("log_star: negative input");
    }
    if (n <= 1) {
        return 0;
    }
    for (unsigned k = 1; k <= 5; ++k) {
        if (tower(k) >= n) {
            return k;
        }
    }
    // n > 2^65536; tower(6) exceeds anything representable in memory.
    return 6;
}

BitString binary_rep(const Natural& n) {
    if (n < 0) {
        throw PreconditionError("binary_rep: negative input");
    }
    std::size_t len = bit_length(n);
    std::vector<std::uint8_t> bits(len);
    for (std::size_t i = 0; i < len; ++i) {
        bits[i] = boost::multiprecision::bit_test(n, static_cast<unsigned>(i)) ? 1 : 0;
    }
    return BitString(std::move(bits));
}

Natural int_val(const BitString& s) {
    if (s.empty()) {
        throw PreconditionError("int_val: empty bit string");
    }
    Natural v = 0;
    for (std::size_t i = s.size(); i-- > 0;) {
        v <<= 1;
        if (s[i]) {
            v += 1;
        }
    }
    return v;
}

BitString encode_sf(const BitString& s) {
    if (s.empty()) {
        throw PreconditionError("encode_sf: empty bit string");
    }
    std::vector<std::uint8_t> out(2 * s.size() + 2);
    for (std::size_t i = 0; i < s.size(); ++i) {
        out[2 * i + 1] = s[i];
        out[2 * i] = static_cast<std::uint8_t>(1 - s[i]);
    }
    // out[2|s|] and out[2|s|+1] stay 0: the prepended 00.
    return BitString(std::move(out));
}

Natural cv_choice(const Natural& mine, const Natural& other) {
    if (mine == other) {
        throw PreconditionError("cv_choice: inputs must differ");
    }
    if (mine < 0 || other < 0) {
        throw PreconditionError("cv_choice: negative input");
    }
    const BitString my_string = encode_sf(binary_rep(mine));
    const BitString other_string = encode_sf(binary_rep(other));
    // Prop. SuffixFree: the least differing index lies within the shorter
    // encoded string, so scanning the common prefix always finds it.
    const std::size_t limit = std::min(my_string.size(), other_string.size());
    for (std::size_t i = 0; i < limit; ++i) {
        if (my_string[i] != other_string[i]) {
            BitString new_string = binary_rep(Natural(i));
            new_string.append_lsb(my_string[i]);
            return int_val(new_string);
        }
    }
    throw std::logic_error("cv_choice: no differing index found (suffix-free property violated)");
}

}  // namespace rvline
