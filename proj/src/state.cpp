#include "mipt/state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mipt {

namespace {

std::uint64_t dim_for(int L) {
    if (L < 1 || L > 30) throw std::invalid_argument("num_sites out of range: " + std::to_string(L));
    return std::uint64_t{1} << L;
}

}  // namespace

StateVector::StateVector(int L, std::vector<cplx> amps) : num_sites(L), amplitudes(std::move(amps)) {
    if (amplitudes.size() != dim_for(L))
        throw std::invalid_argument("amplitude count does not match 2^L");
}

StateVector StateVector::zeroed(int L) {
    StateVector s;
    s.num_sites = L;
    s.amplitudes.assign(dim_for(L), cplx{0.0, 0.0});
    return s;
}

double StateVector::norm() const {
    double sum = 0.0;
    for (const cplx& a : amplitudes) sum += std::norm(a);
    return std::sqrt(sum);
}

void StateVector::normalize() {
    const double n = norm();
    if (!std::isfinite(n) || n <= 0.0)
        throw std::runtime_error("cannot normalize state with norm " + std::to_string(n));
    const double inv = 1.0 / n;
    for (cplx& a : amplitudes) a *= inv;
}

Gate4 Gate4::identity() {
    Gate4 g;
    for (int i = 0; i < 4; ++i) g.at(i, i) = 1.0;
    return g;
}

bool Gate4::is_unitary(double tol) const {
    // U U^dagger == 1
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            cplx acc{0.0, 0.0};
            for (int k = 0; k < 4; ++k) acc += at(r, k) * std::conj(at(c, k));
            const cplx want = (r == c) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            if (std::abs(acc - want) > tol) return false;
        }
    }
    return true;
}

StateVector make_neel(int L) {
    if (L < 2 || L % 2 != 0)
        throw std::invalid_argument("make_neel requires even L >= 2, got " + std::to_string(L));
    StateVector s = StateVector::zeroed(L);
    // odd sites spin-down: bit j set for odd j
    std::uint64_t idx = 0;
    for (int j = 1; j < L; j += 2) idx |= std::uint64_t{1} << j;
    s.amplitudes[idx] = 1.0;
    return s;
}

void apply_two_site_gate_inplace(StateVector& state, const Gate4& gate, int site_left, int site_right) {
    const int L = state.num_sites;
    if (site_left == site_right || site_left < 0 || site_right < 0 || site_left >= L || site_right >= L)
        throw std::invalid_argument("apply_two_site_gate: invalid site pair (" + std::to_string(site_left) +
                                    ", " + std::to_string(site_right) + ") for L = " + std::to_string(L));

    // Blocked iteration: the inner loop runs over 2^lo consecutive basis
    // indices whose lo/hi bits are clear, so the four amplitude streams are
    // contiguous and the 4x4 kernel vectorizes across them.
    const std::uint64_t off1 = std::uint64_t{1} << site_right;  // pair state 1: right site down
    const std::uint64_t off2 = std::uint64_t{1} << site_left;   // pair state 2: left site down
    const std::uint64_t off3 = off1 | off2;
    const std::uint64_t step_lo = std::min(off1, off2);
    const std::uint64_t step_hi = std::max(off1, off2);
    const std::uint64_t dim = state.dim();

    const cplx g0 = gate.m[0], g1 = gate.m[1], g2 = gate.m[2], g3 = gate.m[3];
    const cplx g4 = gate.m[4], g5 = gate.m[5], g6 = gate.m[6], g7 = gate.m[7];
    const cplx g8 = gate.m[8], g9 = gate.m[9], g10 = gate.m[10], g11 = gate.m[11];
    const cplx g12 = gate.m[12], g13 = gate.m[13], g14 = gate.m[14], g15 = gate.m[15];

    cplx* __restrict amp = state.amplitudes.data();
    for (std::uint64_t bh = 0; bh < dim; bh += 2 * step_hi) {
        for (std::uint64_t bl = bh; bl < bh + step_hi; bl += 2 * step_lo) {
            for (std::uint64_t k = bl; k < bl + step_lo; ++k) {
                const cplx a0 = amp[k], a1 = amp[k + off1], a2 = amp[k + off2], a3 = amp[k + off3];
                amp[k] = g0 * a0 + g1 * a1 + g2 * a2 + g3 * a3;
                amp[k + off1] = g4 * a0 + g5 * a1 + g6 * a2 + g7 * a3;
                amp[k + off2] = g8 * a0 + g9 * a1 + g10 * a2 + g11 * a3;
                amp[k + off3] = g12 * a0 + g13 * a1 + g14 * a2 + g15 * a3;
            }
        }
    }
}

StateVector apply_two_site_gate(StateVector state, const Gate4& gate, int site_left, int site_right) {
    apply_two_site_gate_inplace(state, gate, site_left, site_right);
    return state;
}

double sigma_z_expectation(const StateVector& state, int site) {
    if (site < 0 || site >= state.num_sites)
        throw std::invalid_argument("sigma_z_expectation: site " + std::to_string(site) + " out of range");
    const std::uint64_t mask = std::uint64_t{1} << site;
    double up = 0.0, down = 0.0;
    for (std::uint64_t b = 0; b < state.dim(); ++b) {
        const double w = std::norm(state.amplitudes[b]);
        if (b & mask)
            down += w;
        else
            up += w;
    }
    return up - down;
}

double up_probability(const StateVector& state, int site) {
    return 0.5 * (1.0 + sigma_z_expectation(state, site));
}

}  // namespace mipt
