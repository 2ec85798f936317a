#include "rvline/bounds.hpp"

#include <algorithm>
#include <bit>

#include "rvline/agents.hpp"
#include "rvline/errors.hpp"

namespace rvline {

namespace {

unsigned ceil_log2(const Natural& v) {
    if (v <= 1) {
        return 0;
    }
    return static_cast<unsigned>(bit_length(v - 1));
}

}  // namespace

Natural canon_bound(std::uint64_t d) {
    if (d < 1) {
        throw PreconditionError("canon_bound: d must be >= 1");
    }
    return Natural(704) * d;
}

Natural known_d_bound(std::uint64_t d, const Natural& ell, unsigned kappa) {
    if (d < 1) {
        throw PreconditionError("known_d_bound: d must be >= 1");
    }
    return Natural(8) * d * kappa * log_star(ell) + Natural(12) * d;
}

unsigned nod_envelope_epoch(std::uint64_t d, const Natural& ell) {
    const unsigned log_star_ell = log_star(ell);
    const unsigned mu_term = ceil_log2(Natural(12) * d * d) + 1;
    const unsigned extra = std::max({2u, ceil_log2(log_star_ell) + 2, mu_term});
    return d_crit(d) + extra;
}

Natural nod_envelope(std::uint64_t d, const Natural& ell, unsigned kappa) {
    return first_epochs(nod_envelope_epoch(d, ell), log_star(ell), kappa);
}

unsigned nod_meeting_epoch(std::uint64_t d, const Natural& ell) {
    const unsigned log_star_ell = log_star(ell);
    return d_crit(d) + std::max(2u, ceil_log2(log_star_ell) + 2);
}

Natural nod_round_cap(std::uint64_t d, const Natural& ell, unsigned kappa) {
    return first_epochs(nod_meeting_epoch(d, ell), log_star(ell), kappa);
}

}  // namespace rvline
