#include "mipt/entanglement.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mipt {

namespace {

constexpr double kSchmidtCutoff = 1e-12;

// Gathers the bits of b selected by mask into a compact low-bit word,
// preserving site order.
inline std::uint64_t compress_bits(std::uint64_t b, std::uint64_t mask) {
    std::uint64_t out = 0;
    int k = 0;
    while (mask) {
        const std::uint64_t low = mask & (~mask + 1);
        if (b & low) out |= std::uint64_t{1} << k;
        ++k;
        mask ^= low;
    }
    return out;
}

}  // namespace

std::uint64_t half_chain_mask(int L) {
    return (std::uint64_t{1} << (L / 2)) - 1;
}

double entanglement_entropy(const StateVector& state, std::uint64_t subset_mask) {
    const int L = state.num_sites;
    const std::uint64_t full = (std::uint64_t{1} << L) - 1;
    if (subset_mask == 0 || (subset_mask & ~full) != 0 || subset_mask == full)
        throw std::invalid_argument("entanglement_entropy: subset must be a nonempty proper subset of the sites");

    const int na = std::popcount(subset_mask);
    const std::uint64_t comp_mask = full & ~subset_mask;
    const std::uint64_t rows = std::uint64_t{1} << na;
    const std::uint64_t cols = std::uint64_t{1} << (L - na);

    Eigen::MatrixXcd m(rows, cols);
    for (std::uint64_t b = 0; b <= full; ++b)
        m(compress_bits(b, subset_mask), compress_bits(b, comp_mask)) = state.amplitudes[b];

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    double entropy = 0.0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
        const double s = svd.singularValues()(k);
        if (s < kSchmidtCutoff) continue;
        const double p = s * s;
        entropy -= p * std::log(p);
    }
    return entropy > 0.0 ? entropy : 0.0;
}

double page_entropy(int L) {
    if (L < 2 || L % 2 != 0) throw std::invalid_argument("page_entropy: L must be even and >= 2");
    return 0.5 * L * std::log(2.0) - 0.5;
}

double tripartite_mutual_information(const StateVector& state) {
    const int L = state.num_sites;
    if (L % 4 != 0) throw std::invalid_argument("tripartite_mutual_information: L must be divisible by 4");
    const int q = L / 4;
    const std::uint64_t a = (std::uint64_t{1} << q) - 1;
    const std::uint64_t b = a << q;
    const std::uint64_t c = a << (2 * q);

    const double s_a = entanglement_entropy(state, a);
    const double s_b = entanglement_entropy(state, b);
    const double s_c = entanglement_entropy(state, c);
    const double s_ab = entanglement_entropy(state, a | b);
    const double s_ac = entanglement_entropy(state, a | c);  // non-contiguous
    const double s_bc = entanglement_entropy(state, b | c);
    const double s_abc = entanglement_entropy(state, a | b | c);

    return s_a + s_b + s_c + s_abc - s_ab - s_ac - s_bc;
}

}  // namespace mipt
