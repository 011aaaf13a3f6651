// transfer.hpp
// Semiclassical amplitude dynamics of the photon-mediated transfer between
// two cascaded cavities: Stark-shift compensation, pulse shaping under the
// symmetric-pulse condition, channel ODE integration, and the end-to-end
// qutrit transfer map with its fidelity.
//
// One polarization channel is described by real amplitudes (alpha1, alpha2,
// d_a) obeying
//     alpha1' =  lambda1 * d_a / sqrt(2)
//     alpha2' = -lambda2 * d_a / sqrt(2)
//     d_a'    = -lambda1 * alpha1 / sqrt(2) + lambda2 * alpha2 / sqrt(2)
// together with the dark-state constraint
//     (lambda1*alpha1 + lambda2*alpha2) / sqrt(2) + kappa * d_a = 0
// which determines lambda2 from a freely chosen lambda1 on [0, T] and forces
// the time-mirror relation lambda2(t) = lambda1(-t) on the full window.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qst/state.hpp"

namespace qst {

inline constexpr double k_sqrt2 = 1.4142135623730951;

// Parameters of one polarization channel.
struct ChannelParams {
    double kappa = 1.0;    // cavity decay rate (1/time)
    double lambda0 = 0.0;  // effective coupling lambda1(0) (1/time)
    double t_max = 10.0;   // half-window T; dynamics run on [-T, T]
    double dt = 0.005;     // integration step
};

inline void check_params(const ChannelParams& p) {
    if (!(p.kappa > 0.0)) throw std::invalid_argument("ChannelParams: kappa must be positive");
    if (!(p.lambda0 > 0.0)) throw std::invalid_argument("ChannelParams: lambda0 must be positive");
    if (!(p.t_max > 0.0)) throw std::invalid_argument("ChannelParams: t_max must be positive");
    if (!(p.dt > 0.0) || p.dt > p.t_max / 100.0) {
        throw std::invalid_argument("ChannelParams: dt must satisfy 0 < dt <= t_max/100");
    }
    const double steps = p.t_max / p.dt;
    if (std::abs(steps - std::llround(steps)) > 1e-9 * steps) {
        throw std::invalid_argument("ChannelParams: dt must divide t_max into whole steps");
    }
}

// Number of dt steps in [0, t_max].
inline std::size_t half_window_steps(const ChannelParams& p) {
    return static_cast<std::size_t>(std::llround(p.t_max / p.dt));
}

// t = 0 amplitudes fixed by the normalization constraint
// 2*alpha^2(0)*(lambda0^2 + kappa^2)/kappa^2 = 1 with alpha2(0) = alpha1(0).
// d_a(0) takes the negative root so the dark-state constraint holds at t = 0.
inline std::pair<double, double> initial_amplitudes(const ChannelParams& p) {
    if (!(p.kappa > 0.0)) throw std::invalid_argument("initial_amplitudes: kappa must be positive");
    if (!(p.lambda0 > 0.0)) throw std::invalid_argument("initial_amplitudes: lambda0 must be positive");
    const double alpha0 = p.kappa / std::sqrt(2.0 * (p.lambda0 * p.lambda0 + p.kappa * p.kappa));
    const double d_a0 = -k_sqrt2 * p.lambda0 * alpha0 / p.kappa;
    return {alpha0, d_a0};
}

// Sampled couplings on a uniform grid over [-T, T]. The grid is twice as fine
// as the integration step so that Runge-Kutta stage times fall on grid points.
// start_state holds (alpha1, alpha2, d_a) at t = -T for the mirror-symmetric
// trajectory this schedule was shaped from; integrate_channel uses it so the
// finite window reproduces the both-ends-ideal transfer.
struct PulseSchedule {
    std::vector<double> times;
    std::vector<double> lambda1;
    std::vector<double> lambda2;
    std::optional<std::array<double, 3>> start_state;
};

// Grid uniformity, finite couplings, and the symmetric-pulse relation
// lambda2(t) = lambda1(-t) within 1e-12. (Couplings may dip negative: the
// mirror half of a shaped pulse rings through zero while the photon
// amplitude decays, so only finiteness is required.)
inline void check_schedule(const PulseSchedule& s) {
    const std::size_t n = s.times.size();
    if (n < 3 || s.lambda1.size() != n || s.lambda2.size() != n) {
        throw std::invalid_argument("PulseSchedule: inconsistent array sizes");
    }
    const double step = s.times[1] - s.times[0];
    if (!(step > 0.0)) throw std::invalid_argument("PulseSchedule: grid must be increasing");
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(s.times[i + 1] - s.times[i] - step) > 1e-9) {
            throw std::invalid_argument("PulseSchedule: grid must be uniform");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.lambda1[i]) || !std::isfinite(s.lambda2[i])) {
            throw std::invalid_argument("PulseSchedule: couplings must be finite");
        }
        if (std::abs(s.lambda2[i] - s.lambda1[n - 1 - i]) > 1e-12) {
            throw std::invalid_argument("PulseSchedule: lambda2(t) must equal lambda1(-t)");
        }
    }
}

// Shape the receiving pulse: integrate the channel forward on [0, T] from
// initial_amplitudes with lambda2 eliminated through the dark-state
// constraint, emit lambda2 = (-sqrt(2)*kappa*d_a - lambda1*alpha1) / alpha2
// on [0, T], and mirror the pair onto [-T, 0].
//
// Substituting the constraint into the d_a equation closes (alpha1, d_a):
//     alpha1' = lambda1 * d_a / sqrt(2)
//     d_a'    = -sqrt(2) * lambda1 * alpha1 - kappa * d_a
// and alpha2 = sqrt(1 - alpha1^2 - d_a^2), since the constrained flow
// conserves the norm exactly.
template <typename Lambda1>
PulseSchedule shape_pulses(const ChannelParams& p, Lambda1&& lambda1) {
    check_params(p);
    if (std::abs(lambda1(0.0) - p.lambda0) > 1e-12 * std::max(1.0, p.lambda0)) {
        throw std::invalid_argument("shape_pulses: lambda1(0) must equal lambda0");
    }

    const double h = p.dt / 2.0;                   // schedule grid step
    const std::size_t n_half = 2 * half_window_steps(p);  // grid steps in [0, T]

    struct Pair {
        double a1, da;
    };
    const auto deriv = [&](double t, Pair x) -> Pair {
        const double l1 = lambda1(t);
        if (!std::isfinite(l1)) throw std::invalid_argument("shape_pulses: lambda1 must be finite");
        return {l1 * x.da / k_sqrt2, -k_sqrt2 * l1 * x.a1 - p.kappa * x.da};
    };

    const auto [alpha0, d_a0] = initial_amplitudes(p);
    std::vector<Pair> traj(n_half + 1);
    traj[0] = {alpha0, d_a0};
    for (std::size_t i = 0; i < n_half; ++i) {
        const double t = static_cast<double>(i) * h;
        const Pair x = traj[i];
        const Pair k1 = deriv(t, x);
        const Pair k2 = deriv(t + h / 2, {x.a1 + h / 2 * k1.a1, x.da + h / 2 * k1.da});
        const Pair k3 = deriv(t + h / 2, {x.a1 + h / 2 * k2.a1, x.da + h / 2 * k2.da});
        const Pair k4 = deriv(t + h, {x.a1 + h * k3.a1, x.da + h * k3.da});
        traj[i + 1] = {x.a1 + h / 6 * (k1.a1 + 2 * k2.a1 + 2 * k3.a1 + k4.a1),
                       x.da + h / 6 * (k1.da + 2 * k2.da + 2 * k3.da + k4.da)};
    }

    std::vector<double> l1_pos(n_half + 1), l2_pos(n_half + 1), a2_pos(n_half + 1);
    for (std::size_t i = 0; i <= n_half; ++i) {
        const double t = static_cast<double>(i) * h;
        const double l1 = lambda1(t);
        const double a1 = traj[i].a1;
        const double da = traj[i].da;
        const double numerator = -k_sqrt2 * p.kappa * da - l1 * a1;
        const double a2 = std::sqrt(std::max(1.0 - a1 * a1 - da * da, 0.0));
        a2_pos[i] = a2;
        l1_pos[i] = l1;
        if (a2 < 1e-9) {
            // 0/0 is the physical start of the mirrored pulse; a finite
            // numerator over a vanishing amplitude has no finite shape.
            if (std::abs(numerator) < 1e-9) {
                l2_pos[i] = 0.0;
            } else {
                throw std::runtime_error("shape_pulses: pulse shape singular (alpha2 vanished)");
            }
        } else {
            l2_pos[i] = numerator / a2;
        }
        if (!std::isfinite(l2_pos[i])) throw std::runtime_error("shape_pulses: non-finite coupling");
    }

    PulseSchedule out;
    const std::size_t n_full = 2 * n_half;
    out.times.resize(n_full + 1);
    out.lambda1.resize(n_full + 1);
    out.lambda2.resize(n_full + 1);
    for (std::size_t i = 0; i <= n_full; ++i) {
        out.times[i] = -p.t_max + static_cast<double>(i) * h;
    }
    for (std::size_t i = 0; i <= n_half; ++i) {
        out.lambda1[n_half + i] = l1_pos[i];
        out.lambda2[n_half + i] = l2_pos[i];
    }
    // Mirror the pair onto [-T, 0): lambda1(-t) = lambda2(t), lambda2(-t) = lambda1(t).
    for (std::size_t i = 0; i < n_half; ++i) {
        out.lambda1[i] = out.lambda2[n_full - i];
        out.lambda2[i] = out.lambda1[n_full - i];
    }
    // Mirror image of the shaped endpoint: the symmetric trajectory starts at
    // (alpha2*(T), alpha1*(T), d_a*(T)).
    out.start_state = {{a2_pos[n_half], traj[n_half].a1, traj[n_half].da}};
    check_schedule(out);
    return out;
}

// Default driving pulse: constant lambda1 = lambda0 on [0, T].
inline PulseSchedule shape_pulses(const ChannelParams& p) {
    return shape_pulses(p, [&p](double) { return p.lambda0; });
}

// Time series of one channel's amplitudes on the dt grid over [-T, T].
struct ChannelTrajectory {
    std::vector<double> times;
    std::vector<double> alpha1;
    std::vector<double> alpha2;
    std::vector<double> d_a;
};

// Classical fixed-step 4th-order integration of the channel equations over
// [-T, T]. Stage couplings are read from the schedule grid, which must be a
// refinement of the half-step grid. Starts from the schedule's recorded
// mirror-symmetric state (falling back to (1, 0, 0) for hand-built
// schedules without one).
inline ChannelTrajectory integrate_channel(const PulseSchedule& schedule, const ChannelParams& p) {
    check_params(p);
    check_schedule(schedule);
    const double grid_step = schedule.times[1] - schedule.times[0];
    if (std::abs(schedule.times.front() + p.t_max) > 1e-9 ||
        std::abs(schedule.times.back() - p.t_max) > 1e-9) {
        throw std::invalid_argument("integrate_channel: schedule window does not match params");
    }
    const auto stride_f = (p.dt / 2.0) / grid_step;
    const std::size_t stride = static_cast<std::size_t>(std::llround(stride_f));
    if (stride < 1 || std::abs(stride_f - static_cast<double>(stride)) > 1e-9) {
        throw std::invalid_argument("integrate_channel: schedule grid must refine dt/2");
    }

    const std::size_t n_steps = 2 * half_window_steps(p);
    if (2 * stride * n_steps + 1 != schedule.times.size()) {
        throw std::invalid_argument("integrate_channel: schedule length does not match params");
    }

    std::array<double, 3> x = schedule.start_state.value_or(std::array<double, 3>{1.0, 0.0, 0.0});
    const auto deriv = [&schedule](std::size_t idx, const std::array<double, 3>& v) {
        const double l1 = schedule.lambda1[idx];
        const double l2 = schedule.lambda2[idx];
        return std::array<double, 3>{l1 * v[2] / k_sqrt2, -l2 * v[2] / k_sqrt2,
                                     (-l1 * v[0] + l2 * v[1]) / k_sqrt2};
    };

    ChannelTrajectory traj;
    traj.times.resize(n_steps + 1);
    traj.alpha1.resize(n_steps + 1);
    traj.alpha2.resize(n_steps + 1);
    traj.d_a.resize(n_steps + 1);
    const auto record = [&](std::size_t k, const std::array<double, 3>& v) {
        traj.times[k] = -p.t_max + static_cast<double>(k) * p.dt;
        traj.alpha1[k] = v[0];
        traj.alpha2[k] = v[1];
        traj.d_a[k] = v[2];
        const double norm_sq = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if (std::abs(norm_sq - 1.0) > 1e-6) {
            throw std::runtime_error("integrate_channel: norm drift exceeds 1e-6; reduce dt");
        }
    };

    record(0, x);
    const double dt = p.dt;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const std::size_t base = 2 * stride * k;
        const auto k1 = deriv(base, x);
        std::array<double, 3> y;
        for (int i = 0; i < 3; ++i) y[i] = x[i] + dt / 2 * k1[i];
        const auto k2 = deriv(base + stride, y);
        for (int i = 0; i < 3; ++i) y[i] = x[i] + dt / 2 * k2[i];
        const auto k3 = deriv(base + stride, y);
        for (int i = 0; i < 3; ++i) y[i] = x[i] + dt * k3[i];
        const auto k4 = deriv(base + 2 * stride, y);
        for (int i = 0; i < 3; ++i) x[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        record(k + 1, x);
    }
    return traj;
}

// Scale the |1⟩ and |2⟩ amplitudes of one dim-3 wire by the channel transfer
// amplitudes and renormalize. Returns the renormalized state and the
// pre-renormalization norm (the retained amplitude of the ideal branch).
inline std::pair<StateVector, double> apply_transfer_map(const StateVector& s, std::size_t wire,
                                                         double alpha_l, double alpha_r) {
    if (wire >= s.dims.size() || s.dims[wire] != 3) {
        throw std::invalid_argument("apply_transfer_map: wire must be a qutrit");
    }
    const auto strides = detail::wire_strides(s.dims);
    StateVector out = s;
    for (std::size_t idx = 0; idx < out.amps.size(); ++idx) {
        const std::size_t digit = (idx / strides[wire]) % 3;
        if (digit == 1) out.amps[idx] *= alpha_l;
        if (digit == 2) out.amps[idx] *= alpha_r;
    }
    const double kept = norm(out);
    return {normalized(out), kept};
}

// Result of sending one qutrit through the pair of polarization channels.
struct TransferResult {
    StateVector output;      // renormalized received qutrit
    double fidelity = 0.0;   // against the input, before renormalization
};

// Ideal-map transfer of (c0, c1, c2): the |0⟩ amplitude rides through
// unchanged, |1⟩ and |2⟩ pick up the final photon-absorption amplitudes of
// the left and right channels. With compensated phases the fidelity is
// |c0*c0' + c1*c1'*alpha_l2(T) + c2*c2'*alpha_r2(T)|^2 (primes = conjugates).
inline TransferResult transfer_qutrit(cplx c0, cplx c1, cplx c2, const ChannelTrajectory& left,
                                      const ChannelTrajectory& right) {
    if (left.alpha2.empty() || right.alpha2.empty()) {
        throw std::invalid_argument("transfer_qutrit: empty trajectory");
    }
    const StateVector input = make_qutrit(c0, c1, c2);  // validates normalization
    const double alpha_l = left.alpha2.back();
    const double alpha_r = right.alpha2.back();
    auto [output, kept] = apply_transfer_map(input, 0, alpha_l, alpha_r);
    const double overlap = std::norm(c0) + std::norm(c1) * alpha_l + std::norm(c2) * alpha_r;
    return {std::move(output), overlap * overlap};
}

// Full-system snapshot amplitudes: the constant |0⟩ component plus, per
// channel, the source-cavity, target-cavity and photon-mode pieces.
struct GlobalTransferState {
    double a = 1.0;  // time-independent amplitude of the |0⟩ component
    ChannelTrajectory left;
    ChannelTrajectory right;
};

struct GlobalAmplitudes {
    cplx c0_a;                    // c0 * a
    cplx l_b1, l_b2, l_d1, l_d2;  // c1 * {alpha_l1, alpha_l2, -d_a/sqrt2, +d_a/sqrt2}
    cplx r_b1, r_b2, r_d1, r_d2;  // c2 * (same, right channel)

    double squared_norm() const {
        return std::norm(c0_a) + std::norm(l_b1) + std::norm(l_b2) + std::norm(l_d1) +
               std::norm(l_d2) + std::norm(r_b1) + std::norm(r_b2) + std::norm(r_d1) +
               std::norm(r_d2);
    }
};

// The nine global amplitudes at grid time t. The photon-mode pair is split
// antisymmetrically, d1 = -d_a/sqrt(2) and d2 = +d_a/sqrt(2), which keeps
// d1 + d2 = 0 (no photon reflected from the receiving cavity).
inline GlobalAmplitudes assemble_global_state(cplx c0, cplx c1, cplx c2,
                                              const GlobalTransferState& g, double t) {
    if (g.left.times.size() != g.right.times.size()) {
        throw std::invalid_argument("assemble_global_state: channel grids differ");
    }
    std::size_t k = g.left.times.size();
    for (std::size_t i = 0; i < g.left.times.size(); ++i) {
        if (std::abs(g.left.times[i] - t) <= 1e-9) {
            k = i;
            break;
        }
    }
    if (k == g.left.times.size()) throw std::invalid_argument("assemble_global_state: t not on the grid");
    if (std::abs(g.right.times[k] - t) > 1e-9) {
        throw std::invalid_argument("assemble_global_state: channel grids differ");
    }

    GlobalAmplitudes out;
    out.c0_a = c0 * g.a;
    out.l_b1 = c1 * g.left.alpha1[k];
    out.l_b2 = c1 * g.left.alpha2[k];
    out.l_d1 = c1 * (-g.left.d_a[k] / k_sqrt2);
    out.l_d2 = c1 * (g.left.d_a[k] / k_sqrt2);
    out.r_b1 = c2 * g.right.alpha1[k];
    out.r_b2 = c2 * g.right.alpha2[k];
    out.r_d1 = c2 * (-g.right.d_a[k] / k_sqrt2);
    out.r_d2 = c2 * (g.right.d_a[k] / k_sqrt2);
    return out;
}

// Inputs for the Stark-compensation bookkeeping: coupling g, detuning delta,
// and |Omega(t)| sampled on a uniform grid with step grid_step.
struct StarkInputs {
    double g = 0.0;
    double delta = 1.0;
    double grid_step = 1.0;
    std::vector<double> omega;
};

// Compensation data: the cavity detuning delta_shift = g^2/delta and the
// accumulated laser phase phi(t) = integral of |Omega|^2/delta.
struct StarkCompensation {
    double delta_shift = 0.0;
    std::vector<double> phi;
};

// Trapezoidal accumulation of the compensating laser phase, phi(t0) = 0.
inline StarkCompensation stark_conditions(const StarkInputs& in) {
    if (in.delta == 0.0) throw std::invalid_argument("stark_conditions: delta must be nonzero");
    if (!(in.grid_step > 0.0)) throw std::invalid_argument("stark_conditions: grid step must be positive");
    if (in.omega.empty()) throw std::invalid_argument("stark_conditions: empty omega profile");
    StarkCompensation out;
    out.delta_shift = in.g * in.g / in.delta;
    out.phi.resize(in.omega.size());
    out.phi[0] = 0.0;
    for (std::size_t i = 0; i + 1 < in.omega.size(); ++i) {
        const double f0 = in.omega[i] * in.omega[i] / in.delta;
        const double f1 = in.omega[i + 1] * in.omega[i + 1] / in.delta;
        out.phi[i + 1] = out.phi[i] + 0.5 * (f0 + f1) * in.grid_step;
    }
    return out;
}

}  // namespace qst
