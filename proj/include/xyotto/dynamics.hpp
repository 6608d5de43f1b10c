// dynamics.hpp - Field schedules, amplitude equations and a brute-force propagator
//
// Two independent routes to the stroke unitary:
//   * integrate_amplitudes: adaptive Dormand-Prince on the coupled (c1, c4) block in the
//     instantaneous eigenbasis, with the dynamical phase theta1 co-integrated;
//   * schrodinger_oracle: time-ordered product of exact 4x4 exponentials in the product
//     basis (two-point Gauss-Magnus), step count doubled until converged.

#pragma once

#include "xyotto/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <string>

namespace xyotto {

enum class ScheduleKind {
    SqrtLinear,  // h^2 linear in t; also accepted as "linear-h2"
    LinearH,     // h linear in t
};

std::string to_string(ScheduleKind kind);
ScheduleKind parse_schedule_kind(const std::string& name);

struct FieldSchedule {
    ScheduleKind kind{ScheduleKind::SqrtLinear};
    double h1{2};
    double h2{1};
    double tau{1};
    bool reversed{false};  // h~(t) = h(tau - t)

    static FieldSchedule forward(const ModelParams& p, ScheduleKind kind = ScheduleKind::SqrtLinear) {
        return {kind, p.h1, p.h2, p.tau, false};
    }
    FieldSchedule reverse() const {
        FieldSchedule s = *this;
        s.reversed = !reversed;
        return s;
    }
    double start_field() const { return reversed ? h2 : h1; }
    double end_field() const { return reversed ? h1 : h2; }
};

struct FieldValue {
    double h;
    double dh_dt;
};

// Throws std::invalid_argument for t outside [0, tau].
FieldValue schedule_eval(const FieldSchedule& s, double t);

// ------------------------------ Amplitude route -----------------------------

enum class Level { One = 1, Four = 4 };

struct AmplitudeState {
    std::complex<double> c1{1.0, 0.0};
    std::complex<double> c4{0.0, 0.0};
    double theta1{0.0};  // -int_0^t eps1 dt'
    double t{0.0};
};

struct IntegratorOptions {
    double rel_tol{1e-10};
    double abs_tol{1e-12};
    std::size_t max_steps{20'000'000};
    double unitarity_tol{1e-9};
};

struct AmplitudeSolution {
    AmplitudeState state;
    std::size_t accepted_steps{0};
    std::size_t rejected_steps{0};
    double max_norm_defect{0.0};  // max over accepted steps of ||c1|^2 + |c4|^2 - 1|
};

// Durations below this use the closed-form quench value.
inline constexpr double kQuenchTau = 1e-6;

AmplitudeSolution integrate_amplitudes(const ModelParams& p, const FieldSchedule& s, Level initial,
                                       const IntegratorOptions& opts = {});

// P = |<eps1(end)| U |eps1(start)>|^2 along the schedule.
double adiabaticity(const ModelParams& p, const FieldSchedule& s, const IntegratorOptions& opts = {});

// ------------------------------- Oracle route -------------------------------

enum class Direction { Forward, Reversed };

struct OracleOptions {
    double convergence_tol{1e-11};  // max_ij |T_2N(i,j) - T_N(i,j)|
    double unitarity_tol{1e-9};     // ||U^dag U - 1||_F
    std::size_t min_steps{8};
    std::size_t max_steps{std::size_t{1} << 22};
};

struct PropagatorResult {
    double p{1.0};
    Eigen::Matrix4cd u{Eigen::Matrix4cd::Identity()};
    // transitions(i, j) = |<eps_i(end)| U |eps_j(start)>|^2
    Eigen::Matrix4d transitions{Eigen::Matrix4d::Identity()};
    double tau{0.0};
    std::size_t steps{0};
    double unitarity_defect{0.0};
};

PropagatorResult schrodinger_oracle(const ModelParams& p, const FieldSchedule& s,
                                    Direction direction = Direction::Forward,
                                    const OracleOptions& opts = {});

struct MicroreversibilityReport {
    double probability_deviation{0.0};  // max_ij |T_fwd(i,j) - T_rev(j,i)|
    double symmetry_deviation{0.0};     // ||V - K U^dag K^dag||_F, K = complex conjugation
    Eigen::Matrix4d forward;
    Eigen::Matrix4d reversed;

    double max_deviation() const { return std::max(probability_deviation, symmetry_deviation); }
};

MicroreversibilityReport microreversibility_check(const ModelParams& p, const FieldSchedule& s,
                                                  const OracleOptions& opts = {});

}  // namespace xyotto
