#include "mipt/evolution.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <stdexcept>
#include <string>

namespace mipt {

namespace {

using Matrix4c = Eigen::Matrix4cd;
using Matrix2c = Eigen::Matrix2cd;

const cplx kI{0.0, 1.0};

Matrix2c pauli(int alpha) {
    Matrix2c m;
    switch (alpha) {
        case 0: m << 0, 1, 1, 0; break;
        case 1: m << 0, -kI, kI, 0; break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}

// sigma.sigma in the pair basis p = 2*b_left + b_right.
Matrix4c heisenberg_term() {
    Matrix4c h = Matrix4c::Zero();
    for (int alpha = 0; alpha < 3; ++alpha) {
        const Matrix2c s = pauli(alpha);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) h(2 * a + c, 2 * b + d) += s(a, b) * s(c, d);
    }
    return h;
}

Matrix4c field_term(const std::array<double, 3>& h_left, const std::array<double, 3>& h_right) {
    Matrix4c out = Matrix4c::Zero();
    for (int alpha = 0; alpha < 3; ++alpha) {
        const Matrix2c s = pauli(alpha);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                // h_left . sigma x 1
                out(2 * a + 0, 2 * b + 0) += h_left[alpha] * s(a, b);
                out(2 * a + 1, 2 * b + 1) += h_left[alpha] * s(a, b);
                // 1 x h_right . sigma
                out(2 * 0 + a, 2 * 0 + b) += h_right[alpha] * s(a, b);
                out(2 * 1 + a, 2 * 1 + b) += h_right[alpha] * s(a, b);
            }
    }
    return out;
}

std::array<double, 3> half_field(const StaticDisorder& disorder, const NoiseStep& noise, int site) {
    return {0.5 * (disorder.h[site][0] + noise.dh[site][0]),
            0.5 * (disorder.h[site][1] + noise.dh[site][1]),
            0.5 * (disorder.h[site][2] + noise.dh[site][2])};
}

}  // namespace

void EvolutionParams::validate() const {
    if (L < 2 || L % 2 != 0) throw std::invalid_argument("EvolutionParams: L must be even and >= 2");
    if (xi_r < 0.0 || xi_s < 0.0) throw std::invalid_argument("EvolutionParams: xi_r and xi_s must be >= 0");
    if (!(dt > 0.0) || dt > 0.05)
        throw std::invalid_argument("EvolutionParams: dt must lie in (0, 0.05], got " + std::to_string(dt));
}

StaticDisorder sample_static_disorder(double xi_s, int L, RngStream& rng) {
    if (xi_s < 0.0) throw std::invalid_argument("sample_static_disorder: xi_s must be >= 0");
    StaticDisorder d;
    d.h.resize(L);
    for (int j = 0; j < L; ++j)
        for (int alpha = 0; alpha < 3; ++alpha) d.h[j][alpha] = rng.uniform(-xi_s, xi_s);
    return d;
}

NoiseStep sample_noise_step(double xi_r, double dt, int L, RngStream& rng) {
    if (xi_r < 0.0) throw std::invalid_argument("sample_noise_step: xi_r must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("sample_noise_step: dt must be > 0");
    const double bound = xi_r / std::sqrt(dt);
    NoiseStep n;
    n.dh.resize(L);
    for (int j = 0; j < L; ++j)
        for (int alpha = 0; alpha < 3; ++alpha) n.dh[j][alpha] = rng.uniform(-bound, bound);
    return n;
}

Gate4 build_bond_gate(const std::array<double, 3>& h_left, const std::array<double, 3>& h_right, double tau) {
    static const Matrix4c kHeisenberg = heisenberg_term();
    Matrix4c h2 = kHeisenberg + field_term(h_left, h_right);

    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(h2);
    if (solver.info() != Eigen::Success) throw std::runtime_error("build_bond_gate: eigensolver failed");

    Eigen::Vector4cd phases;
    for (int i = 0; i < 4; ++i) phases(i) = std::exp(-kI * tau * solver.eigenvalues()(i));
    const Matrix4c u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();

    Gate4 g;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) g.at(r, c) = u(r, c);
    return g;
}

void trotter_step_inplace(StateVector& state, const StaticDisorder& disorder, const NoiseStep& noise, double dt) {
    const int L = state.num_sites;
    if (L % 2 != 0) throw std::invalid_argument("trotter_step: L must be even for the bond partition");
    if (disorder.h.size() != static_cast<std::size_t>(L) || noise.dh.size() != static_cast<std::size_t>(L))
        throw std::invalid_argument("trotter_step: field arrays must have one entry per site");
    if (!(dt >= 0.0) || dt > 0.05) throw std::invalid_argument("trotter_step: dt must lie in [0, 0.05]");

    // Even half-step gates are reused for the closing sub-layer.
    std::vector<Gate4> even_gates(L / 2);
    for (int j = 0; j < L; j += 2)
        even_gates[j / 2] = build_bond_gate(half_field(disorder, noise, j), half_field(disorder, noise, j + 1), 0.5 * dt);

    for (int j = 0; j < L; j += 2) apply_two_site_gate_inplace(state, even_gates[j / 2], j, j + 1);
    for (int j = 1; j < L; j += 2) {
        const int right = (j + 1) % L;
        const Gate4 g = build_bond_gate(half_field(disorder, noise, j), half_field(disorder, noise, right), dt);
        apply_two_site_gate_inplace(state, g, j, right);
    }
    for (int j = 0; j < L; j += 2) apply_two_site_gate_inplace(state, even_gates[j / 2], j, j + 1);
}

StateVector trotter_step(StateVector state, const StaticDisorder& disorder, const NoiseStep& noise, double dt) {
    trotter_step_inplace(state, disorder, noise, dt);
    return state;
}

}  // namespace mipt
