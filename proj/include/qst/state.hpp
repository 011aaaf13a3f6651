// state.hpp
// Exact pure-state register algebra for qudit systems: construction, tensor
// products, unitary application on selected wires, projective measurement,
// and fidelity. Wire 0 is the most significant digit of a basis index
// (big-endian), so |1⟩|2⟩ over dims [3,3] sits at index 5.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace qst {

using cplx = std::complex<double>;

inline constexpr double k_norm_tol = 1e-10;      // state normalization tolerance
inline constexpr double k_unitary_tol = 1e-12;   // gate unitarity tolerance
inline constexpr double k_inv_sqrt3 = 0.5773502691896258;

// Square complex matrix acting on one or more wires, row-major storage.
struct GateMatrix {
    std::size_t dim = 0;
    std::vector<cplx> entries;  // dim*dim, entry (r,c) at r*dim + c

    GateMatrix() = default;
    explicit GateMatrix(std::size_t d) : dim(d), entries(d * d) {}

    cplx& at(std::size_t r, std::size_t c) { return entries[r * dim + c]; }
    const cplx& at(std::size_t r, std::size_t c) const { return entries[r * dim + c]; }
};

// Largest entrywise deviation of U†U from the identity.
inline double unitarity_defect(const GateMatrix& g) {
    double worst = 0.0;
    for (std::size_t r = 0; r < g.dim; ++r) {
        for (std::size_t c = 0; c < g.dim; ++c) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < g.dim; ++k) {
                acc += std::conj(g.at(k, r)) * g.at(k, c);
            }
            if (r == c) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

inline GateMatrix multiply(const GateMatrix& a, const GateMatrix& b) {
    if (a.dim != b.dim) throw std::invalid_argument("multiply: dimension mismatch");
    GateMatrix out(a.dim);
    for (std::size_t r = 0; r < a.dim; ++r) {
        for (std::size_t k = 0; k < a.dim; ++k) {
            const cplx ark = a.at(r, k);
            if (ark == cplx{}) continue;
            for (std::size_t c = 0; c < a.dim; ++c) {
                out.at(r, c) += ark * b.at(k, c);
            }
        }
    }
    return out;
}

inline GateMatrix adjoint(const GateMatrix& g) {
    GateMatrix out(g.dim);
    for (std::size_t r = 0; r < g.dim; ++r) {
        for (std::size_t c = 0; c < g.dim; ++c) {
            out.at(c, r) = std::conj(g.at(r, c));
        }
    }
    return out;
}

inline GateMatrix identity_gate(std::size_t dim) {
    GateMatrix out(dim);
    for (std::size_t i = 0; i < dim; ++i) out.at(i, i) = 1.0;
    return out;
}

inline GateMatrix gate_power(const GateMatrix& g, std::size_t n) {
    GateMatrix out = identity_gate(g.dim);
    for (std::size_t i = 0; i < n; ++i) out = multiply(out, g);
    return out;
}

// Pure state of a register of qudit wires. amps has one complex amplitude per
// computational basis state; wire 0 is the leftmost ket / most significant digit.
struct StateVector {
    std::vector<std::size_t> dims;
    std::vector<cplx> amps;
};

inline std::size_t total_dim(const std::vector<std::size_t>& dims) {
    std::size_t n = 1;
    for (std::size_t d : dims) n *= d;
    return n;
}

inline double norm(const StateVector& s) {
    double sq = 0.0;
    for (const cplx& a : s.amps) sq += std::norm(a);
    return std::sqrt(sq);
}

inline void check_state(const StateVector& s) {
    for (std::size_t d : s.dims) {
        if (d < 2) throw std::invalid_argument("StateVector: wire dimension must be >= 2");
    }
    if (s.amps.size() != total_dim(s.dims)) {
        throw std::invalid_argument("StateVector: amplitude count does not match dims");
    }
    if (std::abs(norm(s) - 1.0) > k_norm_tol) {
        throw std::invalid_argument("StateVector: not normalized");
    }
}

// Computational basis state |basis_index⟩ (big-endian digit expansion).
inline StateVector make_register(std::vector<std::size_t> dims, std::size_t basis_index) {
    for (std::size_t d : dims) {
        if (d < 2) throw std::invalid_argument("make_register: wire dimension must be >= 2");
    }
    const std::size_t n = total_dim(dims);
    if (basis_index >= n) throw std::invalid_argument("make_register: basis index out of range");
    StateVector s{std::move(dims), std::vector<cplx>(n)};
    s.amps[basis_index] = 1.0;
    return s;
}

// Single three-level wire with the given amplitudes (must be normalized).
inline StateVector make_qutrit(cplx c0, cplx c1, cplx c2) {
    const double sq = std::norm(c0) + std::norm(c1) + std::norm(c2);
    if (std::abs(sq - 1.0) > k_norm_tol) {
        throw std::invalid_argument("make_qutrit: amplitudes not normalized");
    }
    return StateVector{{3}, {c0, c1, c2}};
}

// Kronecker product; a's wires precede b's wires.
inline StateVector tensor(const StateVector& a, const StateVector& b) {
    StateVector out;
    out.dims = a.dims;
    out.dims.insert(out.dims.end(), b.dims.begin(), b.dims.end());
    out.amps.resize(a.amps.size() * b.amps.size());
    std::size_t idx = 0;
    for (const cplx& x : a.amps) {
        for (const cplx& y : b.amps) {
            out.amps[idx++] = x * y;
        }
    }
    return out;
}

namespace detail {

// Stride of each wire: amount the flat index moves when that wire's digit
// increments by one.
inline std::vector<std::size_t> wire_strides(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) {
        strides[i - 1] = strides[i] * dims[i];
    }
    return strides;
}

inline void check_wires(const StateVector& s, const std::vector<std::size_t>& wires) {
    for (std::size_t w : wires) {
        if (w >= s.dims.size()) throw std::invalid_argument("wire index out of range");
    }
    for (std::size_t i = 0; i < wires.size(); ++i) {
        for (std::size_t j = i + 1; j < wires.size(); ++j) {
            if (wires[i] == wires[j]) throw std::invalid_argument("wire list has duplicates");
        }
    }
}

// Flat-index offsets of every digit combination of the selected wires, ordered
// so the first listed wire is the most significant digit of the combination
// index. Combined with rest_offsets this tiles the whole register.
inline std::vector<std::size_t> selected_offsets(const std::vector<std::size_t>& dims,
                                                 const std::vector<std::size_t>& strides,
                                                 const std::vector<std::size_t>& wires) {
    std::size_t count = 1;
    for (std::size_t w : wires) count *= dims[w];
    std::vector<std::size_t> offsets(count, 0);
    std::size_t repeat = count;
    for (std::size_t w : wires) {
        repeat /= dims[w];
        std::size_t idx = 0;
        while (idx < count) {
            for (std::size_t digit = 0; digit < dims[w]; ++digit) {
                for (std::size_t r = 0; r < repeat; ++r) {
                    offsets[idx++] += digit * strides[w];
                }
            }
        }
    }
    return offsets;
}

// Flat-index offsets of every digit combination of the non-selected wires.
inline std::vector<std::size_t> rest_offsets(const std::vector<std::size_t>& dims,
                                             const std::vector<std::size_t>& strides,
                                             const std::vector<std::size_t>& wires) {
    std::vector<bool> selected(dims.size(), false);
    for (std::size_t w : wires) selected[w] = true;
    std::vector<std::size_t> offsets{0};
    for (std::size_t w = 0; w < dims.size(); ++w) {
        if (selected[w]) continue;
        std::vector<std::size_t> grown;
        grown.reserve(offsets.size() * dims[w]);
        for (std::size_t base : offsets) {
            for (std::size_t digit = 0; digit < dims[w]; ++digit) {
                grown.push_back(base + digit * strides[w]);
            }
        }
        offsets.swap(grown);
    }
    return offsets;
}

}  // namespace detail

// Apply a unitary to the listed wires; the first listed wire is the most
// significant index into the gate. All other wires are untouched.
inline StateVector apply_unitary(const StateVector& s, const std::vector<std::size_t>& wires,
                                 const GateMatrix& g) {
    detail::check_wires(s, wires);
    std::size_t gate_span = 1;
    for (std::size_t w : wires) gate_span *= s.dims[w];
    if (gate_span != g.dim) throw std::invalid_argument("apply_unitary: gate dimension mismatch");
    if (unitarity_defect(g) > k_unitary_tol) {
        throw std::invalid_argument("apply_unitary: matrix is not unitary");
    }

    const auto strides = detail::wire_strides(s.dims);
    const auto sel = detail::selected_offsets(s.dims, strides, wires);
    const auto rest = detail::rest_offsets(s.dims, strides, wires);

    StateVector out{s.dims, std::vector<cplx>(s.amps.size())};
    std::vector<cplx> in_block(g.dim);
    for (std::size_t base : rest) {
        for (std::size_t i = 0; i < g.dim; ++i) in_block[i] = s.amps[base + sel[i]];
        for (std::size_t r = 0; r < g.dim; ++r) {
            cplx acc = 0.0;
            const cplx* row = &g.entries[r * g.dim];
            for (std::size_t c = 0; c < g.dim; ++c) acc += row[c] * in_block[c];
            out.amps[base + sel[r]] = acc;
        }
    }
    return out;
}

// Result of a projective measurement of one or more wires.
struct MeasurementResult {
    std::size_t outcome = 0;   // mixed-radix over the measured wires, first wire most significant
    double probability = 0.0;  // squared norm of the projected branch
    StateVector post_state;    // renormalized collapse; measured wires left in |outcome⟩
};

// Measure the listed wires in the computational basis. Without forced_outcome
// the branch is sampled by inverse CDF over ascending outcome index using a
// generator seeded with `seed`, so runs are replayable.
inline MeasurementResult measure_wires(const StateVector& s, const std::vector<std::size_t>& wires,
                                       std::optional<std::size_t> forced_outcome = std::nullopt,
                                       std::uint64_t seed = 0) {
    detail::check_wires(s, wires);
    const auto strides = detail::wire_strides(s.dims);
    const auto sel = detail::selected_offsets(s.dims, strides, wires);
    const auto rest = detail::rest_offsets(s.dims, strides, wires);

    std::vector<double> probs(sel.size(), 0.0);
    for (std::size_t o = 0; o < sel.size(); ++o) {
        for (std::size_t base : rest) probs[o] += std::norm(s.amps[base + sel[o]]);
    }

    std::size_t outcome;
    if (forced_outcome) {
        outcome = *forced_outcome;
        if (outcome >= sel.size()) throw std::invalid_argument("measure_wires: outcome out of range");
        if (probs[outcome] <= 1e-15) {
            throw std::invalid_argument("measure_wires: forced outcome has zero probability");
        }
    } else {
        // 53-bit uniform in [0,1); bit-stable across platforms for a fixed seed.
        std::mt19937_64 rng(seed);
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        double cdf = 0.0;
        outcome = sel.size() - 1;
        for (std::size_t o = 0; o < sel.size(); ++o) {
            cdf += probs[o];
            if (u < cdf) {
                outcome = o;
                break;
            }
        }
    }

    MeasurementResult result;
    result.outcome = outcome;
    result.probability = probs[outcome];
    result.post_state.dims = s.dims;
    result.post_state.amps.assign(s.amps.size(), cplx{});
    const double scale = 1.0 / std::sqrt(probs[outcome]);
    for (std::size_t base : rest) {
        result.post_state.amps[base + sel[outcome]] = s.amps[base + sel[outcome]] * scale;
    }
    return result;
}

inline cplx inner_product(const StateVector& a, const StateVector& b) {
    if (a.dims != b.dims) throw std::invalid_argument("inner_product: dims mismatch");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.amps.size(); ++i) acc += std::conj(a.amps[i]) * b.amps[i];
    return acc;
}

// |⟨a|b⟩|²; insensitive to global phase.
inline double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

// Wire permutation: the content of wire w moves to wire sigma[w]. sigma must
// be a permutation of 0..n-1 and the moved wires must keep their dimensions
// consistent. On basis kets: |x_0 x_1 ...⟩ → |y⟩ with y[sigma[w]] = x[w].
inline StateVector permute_wires(const StateVector& s, const std::vector<std::size_t>& sigma) {
    const std::size_t n = s.dims.size();
    if (sigma.size() != n) throw std::invalid_argument("permute_wires: wrong permutation length");
    std::vector<bool> hit(n, false);
    for (std::size_t t : sigma) {
        if (t >= n || hit[t]) throw std::invalid_argument("permute_wires: not a permutation");
        hit[t] = true;
    }
    StateVector out;
    out.dims.resize(n);
    for (std::size_t w = 0; w < n; ++w) out.dims[sigma[w]] = s.dims[w];
    out.amps.resize(s.amps.size());

    const auto in_strides = detail::wire_strides(s.dims);
    const auto out_strides = detail::wire_strides(out.dims);
    for (std::size_t idx = 0; idx < s.amps.size(); ++idx) {
        std::size_t rem = idx, target = 0;
        for (std::size_t w = 0; w < n; ++w) {
            const std::size_t digit = rem / in_strides[w];
            rem %= in_strides[w];
            target += digit * out_strides[sigma[w]];
        }
        out.amps[target] = s.amps[idx];
    }
    return out;
}

// Contract ⟨bra| against the listed wires of `state`, returning the
// (unnormalized) vector on the remaining wires in their original order.
// The squared norm of the result is the probability of the bra branch.
inline StateVector partial_inner_product(const StateVector& bra, const std::vector<std::size_t>& wires,
                                         const StateVector& state) {
    detail::check_wires(state, wires);
    if (bra.dims.size() != wires.size()) {
        throw std::invalid_argument("partial_inner_product: bra wire count mismatch");
    }
    for (std::size_t i = 0; i < wires.size(); ++i) {
        if (bra.dims[i] != state.dims[wires[i]]) {
            throw std::invalid_argument("partial_inner_product: bra dimension mismatch");
        }
    }
    const auto strides = detail::wire_strides(state.dims);
    const auto sel = detail::selected_offsets(state.dims, strides, wires);
    const auto rest = detail::rest_offsets(state.dims, strides, wires);

    StateVector out;
    for (std::size_t w = 0; w < state.dims.size(); ++w) {
        if (std::find(wires.begin(), wires.end(), w) == wires.end()) out.dims.push_back(state.dims[w]);
    }
    out.amps.assign(rest.size(), cplx{});
    for (std::size_t r = 0; r < rest.size(); ++r) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < sel.size(); ++i) {
            acc += std::conj(bra.amps[i]) * state.amps[rest[r] + sel[i]];
        }
        out.amps[r] = acc;
    }
    return out;
}

// Rescale to unit norm; throws if the vector is numerically zero.
inline StateVector normalized(const StateVector& s) {
    const double n = norm(s);
    if (n < 1e-15) throw std::invalid_argument("normalized: zero vector");
    StateVector out = s;
    for (cplx& a : out.amps) a /= n;
    return out;
}

}  // namespace qst
