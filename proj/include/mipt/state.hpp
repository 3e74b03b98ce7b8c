#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace mipt {

using cplx = std::complex<double>;

// Dense pure state of L spin-1/2 sites.
//
// Basis convention (fixed project-wide): basis index b carries site j in bit j,
// with bit value 0 = spin up (sigma_z eigenvalue +1) and 1 = spin down (-1).
struct StateVector {
    int num_sites = 0;
    std::vector<cplx> amplitudes;

    StateVector() = default;
    StateVector(int L, std::vector<cplx> amps);

    static StateVector zeroed(int L);

    std::uint64_t dim() const { return amplitudes.size(); }
    double norm() const;
    void normalize();  // throws if the norm is zero or not finite
};

// Two-site unitary, row-major 4x4 in the (left, right) tensor basis:
// pair index p = 2*bit(left site) + bit(right site).
struct Gate4 {
    std::array<cplx, 16> m{};

    cplx& at(int r, int c) { return m[4 * r + c]; }
    const cplx& at(int r, int c) const { return m[4 * r + c]; }

    static Gate4 identity();
    bool is_unitary(double tol = 1e-10) const;
};

// |up down up down ...>, requires even L >= 2.
StateVector make_neel(int L);

// Applies the gate to sites (site_left, site_right), identity elsewhere.
void apply_two_site_gate_inplace(StateVector& state, const Gate4& gate, int site_left, int site_right);
StateVector apply_two_site_gate(StateVector state, const Gate4& gate, int site_left, int site_right);

double sigma_z_expectation(const StateVector& state, int site);

// <Pi_+> = (1 + <sigma_z>)/2, computed directly from the up-amplitude weight.
double up_probability(const StateVector& state, int site);

}  // namespace mipt
