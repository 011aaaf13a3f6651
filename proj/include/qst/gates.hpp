// gates.hpp
// Named constructors for the unitaries used by the protocols: the discrete
// Fourier transform, the three modular-arithmetic XOR variants, generalized
// X/Z, qubit gates embedded in a qudit, the N-wire symmetrizer program, and
// the generalized Bell basis with its measurement.

#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "qst/state.hpp"

namespace qst {

// ω(k) = e^{2πik/D}, the D-th roots of unity.
inline cplx root_of_unity(std::size_t d, std::size_t k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k % d) / static_cast<double>(d);
    return {std::cos(angle), std::sin(angle)};
}

// F|j⟩ = (1/√D) Σ_l e^{2πi l j / D} |l⟩.
inline GateMatrix fourier(std::size_t d) {
    if (d == 0) throw std::invalid_argument("fourier: dimension must be positive");
    GateMatrix g(d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t l = 0; l < d; ++l) {
        for (std::size_t j = 0; j < d; ++j) {
            g.at(l, j) = scale * root_of_unity(d, (l * j) % d);
        }
    }
    return g;
}

namespace detail {

// Two-wire permutation gate |i⟩|j⟩ → |i⟩|f(i,j)⟩ with the control listed first.
template <typename F>
GateMatrix controlled_target_map(std::size_t d, F&& f) {
    if (d < 2) throw std::invalid_argument("xor gate: dimension must be >= 2");
    GateMatrix g(d * d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            g.at(i * d + f(i, j), i * d + j) = 1.0;
        }
    }
    return g;
}

}  // namespace detail

// |i⟩|j⟩ → |i⟩|(i−j) mod D⟩ (left modular difference). Self-inverse.
inline GateMatrix xor_lmd(std::size_t d) {
    return detail::controlled_target_map(d, [d](std::size_t i, std::size_t j) { return (i + d - j) % d; });
}

// |i⟩|j⟩ → |i⟩|(i+j) mod D⟩ (modular addition). Order D.
inline GateMatrix xor_ma(std::size_t d) {
    return detail::controlled_target_map(d, [d](std::size_t i, std::size_t j) { return (i + j) % d; });
}

// |i⟩|j⟩ → |i⟩|(j−i) mod D⟩ (right modular difference). Order D.
inline GateMatrix xor_rmd(std::size_t d) {
    return detail::controlled_target_map(d, [d](std::size_t i, std::size_t j) { return (j + d - i) % d; });
}

// Cyclic shift X|n⟩ = |(n+1) mod D⟩.
inline GateMatrix pauli_x(std::size_t d) {
    if (d < 2) throw std::invalid_argument("pauli_x: dimension must be >= 2");
    GateMatrix g(d);
    for (std::size_t n = 0; n < d; ++n) g.at((n + 1) % d, n) = 1.0;
    return g;
}

// Phase gate Z|n⟩ = e^{2πin/D}|n⟩.
inline GateMatrix pauli_z(std::size_t d) {
    if (d < 2) throw std::invalid_argument("pauli_z: dimension must be >= 2");
    GateMatrix g(d);
    for (std::size_t n = 0; n < d; ++n) g.at(n, n) = root_of_unity(d, n);
    return g;
}

// Embed a 2×2 unitary into a D×D space: acts as `g` on span{|level_a⟩,
// |level_b⟩} (level_a plays the qubit's |0⟩) and as identity elsewhere.
inline GateMatrix embedded_qubit_gate(std::size_t d, std::size_t level_a, std::size_t level_b,
                                      const GateMatrix& g) {
    if (g.dim != 2) throw std::invalid_argument("embedded_qubit_gate: gate must be 2x2");
    if (level_a == level_b) throw std::invalid_argument("embedded_qubit_gate: levels must differ");
    if (level_a >= d || level_b >= d) throw std::invalid_argument("embedded_qubit_gate: level out of range");
    GateMatrix out = identity_gate(d);
    out.at(level_a, level_a) = g.at(0, 0);
    out.at(level_a, level_b) = g.at(0, 1);
    out.at(level_b, level_a) = g.at(1, 0);
    out.at(level_b, level_b) = g.at(1, 1);
    return out;
}

// Embed a 4×4 unitary on the 2⊗2 subspace spanned by levels {a,b} of two
// D-dimensional wires; identity on every other basis state.
inline GateMatrix embedded_qubit_pair_gate(std::size_t d, std::size_t level_a, std::size_t level_b,
                                           const GateMatrix& g) {
    if (g.dim != 4) throw std::invalid_argument("embedded_qubit_pair_gate: gate must be 4x4");
    if (level_a == level_b) throw std::invalid_argument("embedded_qubit_pair_gate: levels must differ");
    if (level_a >= d || level_b >= d) throw std::invalid_argument("embedded_qubit_pair_gate: level out of range");
    const std::size_t lv[2] = {level_a, level_b};
    GateMatrix out = identity_gate(d * d);
    for (std::size_t r = 0; r < 4; ++r) {
        const std::size_t row = lv[r >> 1] * d + lv[r & 1];
        for (std::size_t c = 0; c < 4; ++c) {
            const std::size_t col = lv[c >> 1] * d + lv[c & 1];
            out.at(row, col) = g.at(r, c);
        }
    }
    return out;
}

// One gate application inside an ordered circuit.
struct GateStep {
    std::vector<std::size_t> wires;
    GateMatrix gate;
};
using GateProgram = std::vector<GateStep>;

inline StateVector apply_program(StateVector s, const GateProgram& program) {
    for (const GateStep& step : program) s = apply_unitary(s, step.wires, step.gate);
    return s;
}

// Symmetrizer circuit on N wires of dimension D: Fourier on wire 0, then a
// left-modular-difference XOR from wire 0 onto each other wire (the XOR
// stages mutually commute).
inline GateProgram u_symmetrizer(std::size_t d, std::size_t n_wires) {
    if (n_wires < 2) throw std::invalid_argument("u_symmetrizer: need at least two wires");
    GateProgram program;
    program.push_back({{0}, fourier(d)});
    const GateMatrix x = xor_lmd(d);
    for (std::size_t k = 1; k < n_wires; ++k) {
        program.push_back({{0, k}, x});
    }
    return program;
}

// Label (m, μ) of a generalized Bell state, both reduced mod D.
struct BellLabel {
    std::size_t m = 0;
    std::size_t mu = 0;
};

// |Φ_{m,μ}⟩ = XOR_lmd · (F ⊗ I) |m⟩|μ⟩ — the D² maximally entangled basis.
inline StateVector bell_state(std::size_t d, BellLabel label) {
    if (label.m >= d || label.mu >= d) throw std::invalid_argument("bell_state: label out of range");
    StateVector s = make_register({d, d}, label.m * d + label.mu);
    s = apply_unitary(s, {0}, fourier(d));
    s = apply_unitary(s, {0, 1}, xor_lmd(d));
    return s;
}

struct BellMeasurement {
    BellLabel label;
    double probability = 0.0;
    StateVector post_state;  // measured pair collapsed to |Φ_{m,μ}⟩, other wires renormalized
};

// Projective measurement of a wire pair in the generalized Bell basis:
// rotate by the inverse of the Bell preparation circuit, measure both wires
// computationally, then rotate back so the pair is left in the Bell state
// that was observed.
inline BellMeasurement bell_measurement(const StateVector& s, std::size_t wire_a, std::size_t wire_b,
                                        std::optional<BellLabel> forced = std::nullopt,
                                        std::uint64_t seed = 0) {
    if (wire_a >= s.dims.size() || wire_b >= s.dims.size() || wire_a == wire_b) {
        throw std::invalid_argument("bell_measurement: bad wire pair");
    }
    const std::size_t d = s.dims[wire_a];
    if (s.dims[wire_b] != d) throw std::invalid_argument("bell_measurement: wire dimensions differ");

    const GateMatrix xor_gate = xor_lmd(d);
    const GateMatrix f_dag = adjoint(fourier(d));
    StateVector rotated = apply_unitary(s, {wire_a, wire_b}, xor_gate);  // self-inverse
    rotated = apply_unitary(rotated, {wire_a}, f_dag);

    std::optional<std::size_t> forced_joint;
    if (forced) {
        if (forced->m >= d || forced->mu >= d) throw std::invalid_argument("bell_measurement: label out of range");
        forced_joint = forced->m * d + forced->mu;
    }
    MeasurementResult m = measure_wires(rotated, {wire_a, wire_b}, forced_joint, seed);

    StateVector back = apply_unitary(m.post_state, {wire_a}, fourier(d));
    back = apply_unitary(back, {wire_a, wire_b}, xor_gate);

    BellMeasurement result;
    result.label = {m.outcome / d, m.outcome % d};
    result.probability = m.probability;
    result.post_state = std::move(back);
    return result;
}

}  // namespace qst
