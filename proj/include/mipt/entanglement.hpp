#pragma once

#include <cstdint>

#include "mipt/state.hpp"

namespace mipt {

// Sites [0, L/2) as a bitmask.
std::uint64_t half_chain_mask(int L);

// Von Neumann entropy (natural log) of the subsystem given by subset_mask.
// The amplitudes are gathered into a 2^|A| x 2^(L-|A|) matrix whose singular
// values are the Schmidt coefficients; values below 1e-12 count as zero.
// The subset may be non-contiguous. Rejects the empty and the full subset.
double entanglement_entropy(const StateVector& state, std::uint64_t subset_mask);

// (L/2) ln 2 - 1/2, the ergodic half-chain value for even L.
double page_entropy(int L);

// I3 = S_A + S_B + S_C + S_ABC - S_AB - S_AC - S_BC with A, B, C the first
// three quarter-chains. Requires L divisible by 4.
double tripartite_mutual_information(const StateVector& state);

}  // namespace mipt
