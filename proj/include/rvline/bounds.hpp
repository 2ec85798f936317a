#pragma once

#include <cstdint>

#include "rvline/numerics.hpp"

namespace rvline {

// Round bounds the harness checks rendezvous runs against. `ell` is the
// larger of the two starting labels.

// Canonical line: 704 * D.
Natural canon_bound(std::uint64_t d);

// Known distance: 8*D*kappa*log*(ell) + 12*D.
Natural known_d_bound(std::uint64_t d, const Natural& ell, unsigned kappa);

// Unknown distance: conservative epoch index covering every case of the
// analysis: d_crit + max(2, ceil(log2 log* ell) + 2, ceil(log2 (12 D^2)) + 1).
unsigned nod_envelope_epoch(std::uint64_t d, const Natural& ell);

// first_epochs(nod_envelope_epoch, log* ell, kappa): an acceptance envelope,
// not a tightness claim.
Natural nod_envelope(std::uint64_t d, const Natural& ell, unsigned kappa);

// Worst meeting epoch over the analysis cases with the mu <= 12 D^2 term
// replaced by its mu <= log* ell instantiation; always <= nod_envelope_epoch.
// Used as a round budget so a regression times out quickly instead of
// spinning to the envelope.
unsigned nod_meeting_epoch(std::uint64_t d, const Natural& ell);
Natural nod_round_cap(std::uint64_t d, const Natural& ell, unsigned kappa);

}  // namespace rvline
