// dynamics.cpp - Amplitude integration and brute-force stroke propagation

#include "xyotto/dynamics.hpp"

#include "xyotto/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace xyotto {

namespace odeint = boost::numeric::odeint;

std::string to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::SqrtLinear: return "sqrt-linear";
        case ScheduleKind::LinearH: return "linear-h";
    }
    return "unknown";
}

ScheduleKind parse_schedule_kind(const std::string& name) {
    if (name == "sqrt-linear" || name == "linear-h2") return ScheduleKind::SqrtLinear;
    if (name == "linear-h") return ScheduleKind::LinearH;
    throw std::invalid_argument("unknown schedule '" + name +
                                "' (expected sqrt-linear, linear-h or linear-h2)");
}

namespace {

FieldValue forward_eval(const FieldSchedule& s, double t) {
    // Endpoints are returned exactly.
    if (t == 0.0) {
        const double h = s.h1;
        const double dh = s.kind == ScheduleKind::SqrtLinear ? (s.h2 * s.h2 - s.h1 * s.h1) / (2.0 * s.tau * h)
                                                             : (s.h2 - s.h1) / s.tau;
        return {h, dh};
    }
    const double u = t / s.tau;
    switch (s.kind) {
        case ScheduleKind::SqrtLinear: {
            const double h = t == s.tau ? s.h2 : std::sqrt(s.h2 * s.h2 * u + s.h1 * s.h1 * (1.0 - u));
            return {h, (s.h2 * s.h2 - s.h1 * s.h1) / (2.0 * s.tau * h)};
        }
        case ScheduleKind::LinearH: {
            const double h = t == s.tau ? s.h2 : s.h1 + (s.h2 - s.h1) * u;
            return {h, (s.h2 - s.h1) / s.tau};
        }
    }
    throw std::logic_error("schedule_eval: unhandled schedule kind");
}

std::string describe(const ModelParams& p, const FieldSchedule& s) {
    std::ostringstream os;
    os.precision(12);
    os << "Jx=" << p.jx << " Jy=" << p.jy << " h1=" << s.h1 << " h2=" << s.h2 << " tau=" << s.tau
       << " schedule=" << to_string(s.kind) << (s.reversed ? " (reversed)" : "");
    return os.str();
}

using AmplitudeVector = std::array<double, 5>;  // Re c1, Im c1, Re c4, Im c4, theta1

}  // namespace

FieldValue schedule_eval(const FieldSchedule& s, double t) {
    if (!(t >= 0.0) || t > s.tau) {
        throw std::invalid_argument("schedule_eval: t must lie in [0, tau]");
    }
    if (!s.reversed) return forward_eval(s, t);
    const FieldValue v = forward_eval(s, s.tau - t);
    return {v.h, -v.dh_dt};
}

// ---------------------------------------------------------------------------
// Amplitude equations in the instantaneous eigenbasis:
//   dc1/dt =  k(t) e^{-2i theta1} c4
//   dc4/dt = -k(t) e^{+2i theta1} c1,     k = hdot |Jx - Jy| / eps1^2
//   dtheta1/dt = -eps1 = eps4
// c2, c3 are constants and are not evolved.
// ---------------------------------------------------------------------------

AmplitudeSolution integrate_amplitudes(const ModelParams& p, const FieldSchedule& s, Level initial,
                                       const IntegratorOptions& opts) {
    AmplitudeSolution sol;
    AmplitudeVector x{};
    if (initial == Level::One) {
        x[0] = 1.0;
    } else {
        x[2] = 1.0;
    }
    const double gap = std::abs(p.anisotropy());

    auto rhs = [&](const AmplitudeVector& y, AmplitudeVector& dy, double t) {
        const FieldValue f = schedule_eval(s, std::clamp(t, 0.0, s.tau));
        const double e4 = working_gap(p, f.h);
        const double k = f.dh_dt * gap / (e4 * e4);
        const std::complex<double> phase = std::polar(1.0, -2.0 * y[4]);  // e^{-2i theta1}
        const std::complex<double> c1{y[0], y[1]};
        const std::complex<double> c4{y[2], y[3]};
        const std::complex<double> d1 = k * phase * c4;
        const std::complex<double> d4 = -k * std::conj(phase) * c1;
        dy[0] = d1.real();
        dy[1] = d1.imag();
        dy[2] = d4.real();
        dy[3] = d4.imag();
        dy[4] = e4;
    };

    auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol,
                                           odeint::runge_kutta_dopri5<AmplitudeVector>());
    double t = 0.0;
    // Initial step resolves both the sweep time and the fastest phase rotation.
    const double omega = 2.0 * std::max(working_gap(p, s.h1), working_gap(p, s.h2));
    double dt = std::min(s.tau / 64.0, 0.05 / std::max(omega, 1e-300));
    if (dt <= 0.0) dt = s.tau;

    while (t < s.tau) {
        if (sol.accepted_steps + sol.rejected_steps >= opts.max_steps) {
            std::ostringstream os;
            os << "integrate_amplitudes: step budget " << opts.max_steps << " exhausted at t=" << t
               << " of " << describe(p, s);
            throw NumericalFailure(os.str());
        }
        const bool last = t + dt >= s.tau;
        double trial = last ? s.tau - t : dt;
        const double t_before = t;
        if (stepper.try_step(rhs, x, t, trial) == odeint::success) {
            ++sol.accepted_steps;
            if (last && t >= t_before + (s.tau - t_before) * (1.0 - 1e-15)) t = s.tau;
            const double norm = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
            sol.max_norm_defect = std::max(sol.max_norm_defect, std::abs(norm - 1.0));
            if (sol.max_norm_defect > opts.unitarity_tol) {
                std::ostringstream os;
                os << "integrate_amplitudes: norm defect " << sol.max_norm_defect << " at t=" << t
                   << " exceeds " << opts.unitarity_tol << " for " << describe(p, s);
                throw NumericalFailure(os.str());
            }
            dt = last ? dt : trial;
        } else {
            ++sol.rejected_steps;
            dt = trial;
            if (!(dt > 0.0) || t + dt == t) {
                throw NumericalFailure("integrate_amplitudes: step size underflow at t=" +
                                       std::to_string(t) + " for " + describe(p, s));
            }
        }
    }
    sol.state.c1 = {x[0], x[1]};
    sol.state.c4 = {x[2], x[3]};
    sol.state.theta1 = x[4];
    sol.state.t = t;
    return sol;
}

double adiabaticity(const ModelParams& p, const FieldSchedule& s, const IntegratorOptions& opts) {
    if (p.anisotropy() == 0.0) return 1.0;
    if (s.tau < kQuenchTau) {
        ModelParams q = p;
        q.h1 = s.h1;
        q.h2 = s.h2;
        return quench_adiabaticity(q);
    }
    const auto sol = integrate_amplitudes(p, s, Level::One, opts);
    return std::clamp(std::norm(sol.state.c1), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Oracle: U = prod_k exp(-i K_k), with the fourth-order two-point Magnus exponent
//   K = dt/2 (Ha + Hb) - i sqrt(3)/12 dt^2 [Hb, Ha]
// at Gauss nodes t + dt (1/2 -+ sqrt(3)/6). K is Hermitian, so each factor is unitary
// up to roundoff. Uniform steps make the reversed product the exact transpose.
// ---------------------------------------------------------------------------

namespace {

Eigen::Matrix4cd propagate_uniform(const ModelParams& p, const FieldSchedule& s, std::size_t n) {
    const double dt = s.tau / static_cast<double>(n);
    const double off = std::sqrt(3.0) / 6.0;
    const std::complex<double> comm_coef{0.0, -std::sqrt(3.0) / 12.0 * dt * dt};
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver;
    for (std::size_t k = 0; k < n; ++k) {
        const double t0 = dt * static_cast<double>(k);
        const double ta = std::min(t0 + dt * (0.5 - off), s.tau);
        const double tb = std::min(t0 + dt * (0.5 + off), s.tau);
        const Eigen::Matrix4d ha = hamiltonian(p, schedule_eval(s, ta).h);
        const Eigen::Matrix4d hb = hamiltonian(p, schedule_eval(s, tb).h);
        const Eigen::Matrix4d comm = hb * ha - ha * hb;
        const Eigen::Matrix4cd kmat = (0.5 * dt * (ha + hb)).cast<std::complex<double>>() +
                                      comm_coef * comm.cast<std::complex<double>>();
        solver.compute(kmat);
        const Eigen::Vector4cd phases =
            (solver.eigenvalues().cast<std::complex<double>>() * std::complex<double>{0.0, -1.0})
                .array()
                .exp();
        u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint() * u;
    }
    return u;
}

}  // namespace

PropagatorResult schrodinger_oracle(const ModelParams& p, const FieldSchedule& forward,
                                    Direction direction, const OracleOptions& opts) {
    const FieldSchedule s = direction == Direction::Forward ? forward : forward.reverse();
    PropagatorResult r;
    r.tau = s.tau;

    const double norm_h = std::max({working_gap(p, s.h1), working_gap(p, s.h2), p.jx + p.jy});
    std::size_t n = std::max<std::size_t>(
        opts.min_steps, static_cast<std::size_t>(std::ceil(2.0 * s.tau * norm_h)));
    const Eigen::Matrix4cd start = eigenvectors(p, s.start_field()).cast<std::complex<double>>();
    const Eigen::Matrix4cd end = eigenvectors(p, s.end_field()).cast<std::complex<double>>();
    auto transitions = [&](const Eigen::Matrix4cd& u) -> Eigen::Matrix4d {
        return (end.adjoint() * u * start).cwiseAbs2();
    };
    Eigen::Matrix4cd coarse = propagate_uniform(p, s, n);
    for (;;) {
        if (2 * n > opts.max_steps) {
            std::ostringstream os;
            os << "schrodinger_oracle: no convergence within " << opts.max_steps << " steps for "
               << describe(p, s);
            throw NumericalFailure(os.str());
        }
        n *= 2;
        const Eigen::Matrix4cd fine = propagate_uniform(p, s, n);
        const double diff = (transitions(fine) - transitions(coarse)).cwiseAbs().maxCoeff();
        coarse = fine;
        if (diff < opts.convergence_tol) break;
    }
    r.u = coarse;
    r.steps = n;
    r.unitarity_defect = (r.u.adjoint() * r.u - Eigen::Matrix4cd::Identity()).norm();
    if (r.unitarity_defect > opts.unitarity_tol) {
        std::ostringstream os;
        os << "schrodinger_oracle: unitarity defect " << r.unitarity_defect << " exceeds "
           << opts.unitarity_tol << " for " << describe(p, s);
        throw NumericalFailure(os.str());
    }

    r.transitions = transitions(r.u);
    r.p = r.transitions(0, 0);
    return r;
}

MicroreversibilityReport microreversibility_check(const ModelParams& p, const FieldSchedule& s,
                                                  const OracleOptions& opts) {
    const PropagatorResult fwd = schrodinger_oracle(p, s, Direction::Forward, opts);
    const PropagatorResult rev = schrodinger_oracle(p, s, Direction::Reversed, opts);
    MicroreversibilityReport rep;
    rep.forward = fwd.transitions;
    rep.reversed = rev.transitions;
    rep.probability_deviation = (fwd.transitions - rev.transitions.transpose()).cwiseAbs().maxCoeff();
    // K U^dag K^dag with K entrywise conjugation is U^T.
    rep.symmetry_deviation = (rev.u - fwd.u.transpose()).norm();
    return rep;
}

}  // namespace xyotto
