// Unit tests for the channel dynamics: parameter validation, the t = 0
// amplitudes, pulse shaping, ODE integration, the qutrit transfer map, the
// global-state assembly, and the Stark-compensation bookkeeping.

#include <algorithm>
#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "qst/transfer.hpp"
#include "test_util.hpp"

using namespace qst;

namespace {

ChannelParams default_params() { return ChannelParams{1.0, 1.0 / k_sqrt2, 10.0, 0.005}; }

// Hand-built mirror-symmetric schedule with both couplings constant.
PulseSchedule constant_schedule(double value, const ChannelParams& p) {
    PulseSchedule s;
    const std::size_t n_full = 4 * half_window_steps(p);
    const double h = p.dt / 2.0;
    for (std::size_t i = 0; i <= n_full; ++i) {
        s.times.push_back(-p.t_max + static_cast<double>(i) * h);
        s.lambda1.push_back(value);
        s.lambda2.push_back(value);
    }
    return s;
}

// Largest dark-state-constraint violation over the dt grid.
double constraint_residual(const PulseSchedule& schedule, const ChannelTrajectory& traj,
                           const ChannelParams& p) {
    const double grid_step = schedule.times[1] - schedule.times[0];
    const std::size_t stride = static_cast<std::size_t>(std::llround((p.dt / 2.0) / grid_step));
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const std::size_t idx = 2 * stride * k;
        const double r = (schedule.lambda1[idx] * traj.alpha1[k] +
                          schedule.lambda2[idx] * traj.alpha2[k]) /
                             k_sqrt2 +
                         p.kappa * traj.d_a[k];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

}  // namespace

TEST_CASE("channel parameter validation", "[transfer]") {
    CHECK_NOTHROW(check_params(default_params()));
    CHECK_THROWS_AS(check_params(ChannelParams{0.0, 0.7, 10.0, 0.005}), std::invalid_argument);
    CHECK_THROWS_AS(check_params(ChannelParams{1.0, 0.0, 10.0, 0.005}), std::invalid_argument);
    CHECK_THROWS_AS(check_params(ChannelParams{1.0, 0.7, 0.0, 0.005}), std::invalid_argument);
    CHECK_THROWS_AS(check_params(ChannelParams{1.0, 0.7, 10.0, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(check_params(ChannelParams{1.0, 0.7, 1.0, 0.003}), std::invalid_argument);
    CHECK(half_window_steps(default_params()) == 2000);
}

TEST_CASE("initial amplitudes satisfy the dark-state constraint", "[transfer]") {
    const auto [a0, d0] = initial_amplitudes(ChannelParams{1.0, 1.0 / k_sqrt2, 10.0, 0.005});
    CHECK(std::abs(a0 - 1.0 / std::sqrt(3.0)) < 1e-12);
    CHECK(std::abs(d0 + 1.0 / std::sqrt(3.0)) < 1e-12);

    // Weak-coupling limit: the two cavity amplitudes carry everything.
    const auto [a_weak, d_weak] = initial_amplitudes(ChannelParams{1.0, 1e-8, 10.0, 0.005});
    CHECK(std::abs(a_weak - 1.0 / k_sqrt2) < 1e-7);
    CHECK(std::abs(d_weak) < 1e-7);

    for (double kappa : {0.5, 1.0, 2.5}) {
        for (double lambda0 : {0.3, 0.9, 1.7}) {
            const auto [a, d] = initial_amplitudes(ChannelParams{kappa, lambda0, 10.0, 0.005});
            CHECK(std::abs(k_sqrt2 * lambda0 * a + kappa * d) < 1e-15);
            CHECK(std::abs(2.0 * a * a * (lambda0 * lambda0 + kappa * kappa) / (kappa * kappa) -
                           1.0) < 1e-12);
        }
    }
    CHECK_THROWS_AS(initial_amplitudes(ChannelParams{1.0, 0.0, 10.0, 0.005}),
                    std::invalid_argument);
}

TEST_CASE("shape_pulses produces the mirror-symmetric schedule", "[transfer]") {
    const ChannelParams p = default_params();
    const PulseSchedule s = shape_pulses(p);
    const std::size_t n_half = 2 * half_window_steps(p);

    REQUIRE(s.times.size() == 2 * n_half + 1);
    CHECK(s.lambda1[n_half] == p.lambda0);                       // lambda1(0) by construction
    CHECK(std::abs(s.lambda2[n_half] - p.lambda0) < 1e-12);      // lambda2(0) from the constraint
    CHECK(std::abs(s.times.front() + p.t_max) < 1e-12);
    CHECK(std::abs(s.times.back() - p.t_max) < 1e-12);

    // The shaped coupling rings slightly negative on the mirror half.
    const double lambda_min = *std::min_element(s.lambda2.begin(), s.lambda2.end());
    CHECK(std::abs(lambda_min - -0.020228379885528943) < 1e-9);

    // Mirror-symmetric boundary state, on the unit sphere.
    REQUIRE(s.start_state.has_value());
    const auto& x = *s.start_state;
    CHECK(std::abs(x[0] - 0.9999959409117324) < 1e-9);
    CHECK(std::abs(x[1] - 0.0011034900148111399) < 1e-9);
    CHECK(std::abs(x[2] - 0.0026268745394955996) < 1e-9);
    CHECK(std::abs(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0) < 1e-12);

    // A non-constant driving pulse shapes cleanly too.
    const PulseSchedule bumped =
        shape_pulses(p, [&p](double t) { return p.lambda0 * std::exp(-0.01 * t * t); });
    CHECK(bumped.start_state.has_value());

    // lambda1(0) must match the declared lambda0.
    CHECK_THROWS_AS(shape_pulses(p, [](double) { return 0.3; }), std::invalid_argument);

    // A coupling far too strong for the step size blows up the shaping
    // integration and is reported, not silently emitted.
    CHECK_THROWS_AS(shape_pulses(ChannelParams{1.0, 100.0, 10.0, 0.1}), std::runtime_error);
}

TEST_CASE("integrate_channel reproduces the shaped symmetric trajectory", "[transfer]") {
    const ChannelParams p = default_params();
    const PulseSchedule s = shape_pulses(p);
    const ChannelTrajectory traj = integrate_channel(s, p);
    const std::size_t n = traj.times.size() - 1;
    REQUIRE(n == 4000);

    CHECK(std::abs(traj.alpha2.back() - 0.9999959409117275) < 1e-9);
    CHECK(std::abs(traj.alpha1.back() - 0.001103490015754424) < 1e-9);
    CHECK(std::abs(traj.d_a.back() - 0.0026268745405994497) < 1e-9);
    CHECK(traj.alpha2.back() >= 0.999);  // kappa * t_max = 10

    double norm_drift = 0.0, mirror = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double sq = traj.alpha1[k] * traj.alpha1[k] + traj.alpha2[k] * traj.alpha2[k] +
                          traj.d_a[k] * traj.d_a[k];
        norm_drift = std::max(norm_drift, std::abs(sq - 1.0));
        mirror = std::max(mirror, std::abs(traj.alpha1[k] - traj.alpha2[n - k]));
        mirror = std::max(mirror, std::abs(traj.d_a[k] - traj.d_a[n - k]));
    }
    CHECK(norm_drift < 1e-8);
    CHECK(mirror < 1e-9);
    CHECK(constraint_residual(s, traj, p) < 1e-9);
}

TEST_CASE("integrate_channel handles hand-built schedules", "[transfer]") {
    // Zero coupling: nothing moves from the default start.
    const ChannelParams p{1.0, 0.5, 1.0, 0.01};
    const ChannelTrajectory still = integrate_channel(constant_schedule(0.0, p), p);
    REQUIRE(still.times.size() == 201);
    for (std::size_t k = 0; k < still.times.size(); ++k) {
        CHECK(still.alpha1[k] == 1.0);
        CHECK(still.alpha2[k] == 0.0);
        CHECK(still.d_a[k] == 0.0);
    }

    // A wildly strong constant coupling makes the fixed-step integration
    // blow past the norm guard.
    const ChannelParams wild{1.0, 0.5, 10.0, 0.1};
    CHECK_THROWS_AS(integrate_channel(constant_schedule(100.0, wild), wild), std::runtime_error);

    // Window and grid mismatches are rejected.
    const ChannelParams other{1.0, 0.5, 2.0, 0.01};
    CHECK_THROWS_AS(integrate_channel(constant_schedule(0.0, p), other), std::invalid_argument);
    const ChannelParams coarse{1.0, 0.5, 10.0, 0.1};
    const ChannelParams finer{1.0, 0.5, 10.0, 0.05};
    CHECK_THROWS_AS(integrate_channel(constant_schedule(0.0, coarse), finer),
                    std::invalid_argument);

    // Malformed schedules are rejected outright.
    PulseSchedule bad = constant_schedule(0.0, p);
    bad.lambda2[3] = 0.5;  // breaks lambda2(t) = lambda1(-t)
    CHECK_THROWS_AS(integrate_channel(bad, p), std::invalid_argument);
    PulseSchedule ragged = constant_schedule(0.0, p);
    ragged.times[5] += 1e-3;
    CHECK_THROWS_AS(integrate_channel(ragged, p), std::invalid_argument);
}

TEST_CASE("integration error shrinks at fourth order", "[transfer]") {
    const ChannelParams fine{1.0, 1.0 / k_sqrt2, 10.0, 0.00125};
    const PulseSchedule s = shape_pulses(fine);

    const auto end_state = [&s](double dt) {
        const ChannelParams p{1.0, 1.0 / k_sqrt2, 10.0, dt};
        const ChannelTrajectory t = integrate_channel(s, p);
        return std::array<double, 3>{t.alpha1.back(), t.alpha2.back(), t.d_a.back()};
    };
    const auto x1 = end_state(0.005);
    const auto x2 = end_state(0.0025);
    const auto x3 = end_state(0.00125);
    const auto dist = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        double sq = 0.0;
        for (int i = 0; i < 3; ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(sq);
    };
    const double ratio = dist(x1, x2) / dist(x2, x3);
    CHECK(ratio > 8.0);
    CHECK(ratio < 32.0);
}

TEST_CASE("transfer_qutrit fidelity", "[transfer]") {
    // A secret entirely in |0⟩ never enters the channel.
    ChannelTrajectory flat{{0.0}, {0.0}, {0.999}, {0.0}};
    const TransferResult untouched = transfer_qutrit(1.0, 0.0, 0.0, flat, flat);
    CHECK(untouched.fidelity == 1.0);
    CHECK(std::abs(untouched.output.amps[0] - cplx{1.0}) < 1e-15);

    // Balanced secret through matched lossy channels.
    const TransferResult balanced =
        transfer_qutrit(k_inv_sqrt3, k_inv_sqrt3, k_inv_sqrt3, flat, flat);
    const double expected = (1.0 / 3.0 + 0.999 / 3.0 + 0.999 / 3.0);
    CHECK(std::abs(balanced.fidelity - expected * expected) < 1e-12);
    CHECK(balanced.fidelity > 0.998);

    // Fidelity grows with the final absorption amplitude.
    double prev = 0.0;
    for (double alpha : {0.9, 0.95, 0.999}) {
        ChannelTrajectory t{{0.0}, {0.0}, {alpha}, {0.0}};
        const double f = transfer_qutrit(k_inv_sqrt3, k_inv_sqrt3, k_inv_sqrt3, t, t).fidelity;
        CHECK(f > prev);
        prev = f;
    }

    // End-to-end with the shaped channel.
    const ChannelParams p{1.0, 1.0 / k_sqrt2, 10.0, 0.005};
    const PulseSchedule s = shape_pulses(p);
    const ChannelTrajectory left = integrate_channel(s, p);
    const ChannelTrajectory right = integrate_channel(s, p);
    // The two polarization channels are independent and identical.
    CHECK(left.alpha1 == right.alpha1);
    CHECK(left.alpha2 == right.alpha2);
    CHECK(left.d_a == right.d_a);
    const TransferResult sent = transfer_qutrit(k_inv_sqrt3, k_inv_sqrt3, k_inv_sqrt3, left, right);
    const double a = left.alpha2.back();
    const double ideal = (1.0 + 2.0 * a) / 3.0;
    CHECK(std::abs(sent.fidelity - ideal * ideal) < 1e-12);
    CHECK(sent.fidelity > 0.99999);

    CHECK_THROWS_AS(transfer_qutrit(1.0, 1.0, 0.0, flat, flat), std::invalid_argument);
    CHECK_THROWS_AS(transfer_qutrit(1.0, 0.0, 0.0, ChannelTrajectory{}, flat),
                    std::invalid_argument);
}

TEST_CASE("assemble_global_state splits the photon mode antisymmetrically", "[transfer]") {
    const ChannelParams p{1.0, 1.0 / k_sqrt2, 10.0, 0.005};
    const PulseSchedule s = shape_pulses(p);
    GlobalTransferState g{1.0, integrate_channel(s, p), integrate_channel(s, p)};

    for (double t : {-10.0, 0.0, 3.125, 10.0}) {
        const GlobalAmplitudes amps =
            assemble_global_state(k_inv_sqrt3, k_inv_sqrt3, k_inv_sqrt3, g, t);
        CHECK(amps.l_d1 + amps.l_d2 == cplx{0.0});
        CHECK(amps.r_d1 + amps.r_d2 == cplx{0.0});
        CHECK(std::abs(amps.squared_norm() - 1.0) < 1e-8);
    }
    CHECK_THROWS_AS(assemble_global_state(1.0, 0.0, 0.0, g, 0.0033), std::invalid_argument);
}

TEST_CASE("stark_conditions accumulate the compensating phase", "[transfer]") {
    StarkInputs shift;
    shift.g = 2.0;
    shift.delta = 4.0;
    shift.grid_step = 1.0;
    shift.omega = {0.0, 0.0};
    CHECK(stark_conditions(shift).delta_shift == 1.0);

    StarkInputs in;
    in.g = 1.0;
    in.delta = 1.0;
    in.grid_step = std::numbers::pi / 100.0;
    for (int i = 0; i <= 100; ++i) in.omega.push_back(std::sin(i * in.grid_step));

    const StarkCompensation comp = stark_conditions(in);
    CHECK(comp.phi.front() == 0.0);
    REQUIRE(comp.phi.size() == 101);
    // Integral of sin^2 over [0, pi] is pi/2; the trapezoid rule is exact here.
    CHECK(std::abs(comp.phi.back() - std::numbers::pi / 2.0) < 1e-12);
    for (std::size_t i = 0; i + 1 < comp.phi.size(); ++i) CHECK(comp.phi[i + 1] >= comp.phi[i]);

    StarkInputs bad = in;
    bad.delta = 0.0;
    CHECK_THROWS_AS(stark_conditions(bad), std::invalid_argument);
    bad = in;
    bad.omega.clear();
    CHECK_THROWS_AS(stark_conditions(bad), std::invalid_argument);
    bad = in;
    bad.grid_step = 0.0;
    CHECK_THROWS_AS(stark_conditions(bad), std::invalid_argument);
}
