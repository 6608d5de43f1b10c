// cycle.cpp - Otto cycle energetics and regime classification

#include "xyotto/cycle.hpp"

#include "xyotto/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace xyotto {

Eigen::Matrix4d transition_matrix(double p) {
    Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
    t(0, 0) = p;
    t(3, 3) = p;
    t(0, 3) = 1.0 - p;
    t(3, 0) = 1.0 - p;
    return t;
}

namespace {

void check_adiabaticity(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("adiabaticity must satisfy 0 <= P <= 1 (got " +
                                    detail::to_text(p) + ")");
    }
}

struct EndpointThermals {
    Spectrum<double> s1, s2;
    ThermalPopulations<double> p1, p2;
};

EndpointThermals endpoint_thermals(const ModelParams& params) {
    EndpointThermals t;
    t.s1 = spectrum(params, params.h1);
    t.s2 = spectrum(params, params.h2);
    t.p1 = thermal_populations(t.s1, params.beta1());
    t.p2 = thermal_populations(t.s2, params.beta2());
    return t;
}

int sign_of(double v, double scale) {
    if (std::abs(v) <= kSignTolerance * scale) return 0;
    return v > 0 ? 1 : -1;
}

}  // namespace

CornerEnergies corner_energies(const ModelParams& params, double p) {
    check_adiabaticity(p);
    const auto th = endpoint_thermals(params);
    const Eigen::Vector4d lv1 = th.s1.levels();
    const Eigen::Vector4d lv2 = th.s2.levels();
    const Eigen::Vector4d pop1 = th.p1.vector();
    const Eigen::Vector4d pop2 = th.p2.vector();
    const Eigen::Matrix4d t = transition_matrix(p);  // t(i, j): j -> i
    CornerEnergies c;
    c.e1 = lv1.dot(pop1);
    c.e2 = lv2.dot(t * pop1);
    c.e3 = lv2.dot(pop2);
    c.e4 = lv1.dot(t.transpose() * pop2);
    return c;
}

StrokeEnergetics stroke_energetics(const ModelParams& params, double p) {
    check_adiabaticity(p);
    const auto th = endpoint_thermals(params);
    const double e1 = th.s1.eps4;
    const double e2 = th.s2.eps4;
    const double e3 = th.s1.eps3;
    const double f1 = work_function(params.beta1(), e1, e3);
    const double f2 = work_function(params.beta2(), e2, e3);

    // f1 - f2 without cancellation when both are close to 1.
    double df = 0.0;
    double df_scale = 0.0;
    if (f1 > 0.5 && f2 > 0.5) {
        const double d1 = work_function_complement(params.beta1(), e1, e3);
        const double d2 = work_function_complement(params.beta2(), e2, e3);
        df = d2 - d1;
        df_scale = d1 + d2;
    } else {
        df = f1 - f2;
        df_scale = f1 + f2;
    }
    const double loss = 2.0 * (1.0 - p);

    StrokeEnergetics s;
    s.p = p;
    s.w12_ad = f1 * (e1 - e2);
    s.w12_na = loss * f1 * e2;
    s.w21_ad = f2 * (e2 - e1);
    s.w21_na = loss * f2 * e1;

    const double idle = (th.p1.p3 - th.p1.p2) - (th.p2.p3 - th.p2.p2);  // dp3 - dp2
    const double idle_scale = e3 * (th.p1.p2 + th.p1.p3 + th.p2.p2 + th.p2.p3);

    s.q1_ad = idle * e3 - df * e1;
    s.q1_na = -s.w21_na;
    s.q2_ad = -idle * e3 + df * e2;
    s.q2_na = -s.w12_na;

    s.w_cyc = df * (e1 - e2) + (s.w12_na + s.w21_na);
    s.q1 = s.q1_ad + s.q1_na;
    s.q2 = s.q2_ad + s.q2_na;
    s.w_scale = df_scale * (e1 - e2) + s.w12_na + s.w21_na;
    s.q1_scale = idle_scale + df_scale * e1 + s.w21_na;
    s.q2_scale = idle_scale + df_scale * e2 + s.w12_na;
    s.corners = corner_energies(params, p);
    return s;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Engine: return "engine";
        case Regime::Refrigerator: return "refrigerator";
        case Regime::Accelerator: return "accelerator";
        case Regime::Heater: return "heater";
        case Regime::Degenerate: return "degenerate";
    }
    return "degenerate";
}

std::string to_string(Rotation r) {
    return r == Rotation::Regular ? "regular" : "counter-rotating";
}

std::string regime_label(Regime r, Rotation rot) {
    if (r == Regime::Engine) return to_string(r) + ":" + to_string(rot);
    return to_string(r);
}

std::optional<double> efficiency(Regime regime, Rotation rotation, double w_cyc, double q1,
                                 double q2) {
    if (regime != Regime::Engine) return std::nullopt;
    const double q_hot = rotation == Rotation::Regular ? q1 : q2;
    return -w_cyc / q_hot;
}

CycleOutcome classify(const ModelParams& params, const StrokeEnergetics& e) {
    CycleOutcome out;
    out.energetics = e;
    out.w_cyc = e.w_cyc;
    out.rotation = params.t1 > params.t2 ? Rotation::Regular : Rotation::CounterRotating;
    if (params.t1 == params.t2) return out;  // Degenerate

    const int w = sign_of(e.w_cyc, e.w_scale);
    const int q1 = sign_of(e.q1, e.q1_scale);
    const int q2 = sign_of(e.q2, e.q2_scale);
    if (w == 0 || q1 == 0 || q2 == 0) return out;

    // Signs of (Q_hot, Q_cold) in the regular orientation.
    const bool regular = out.rotation == Rotation::Regular;
    const int qh = regular ? q1 : q2;
    const int qc = regular ? q2 : q1;

    if (q1 < 0 && q2 < 0 && w > 0) {
        out.regime = Regime::Heater;
    } else if (qh > 0 && qc < 0 && w < 0) {
        out.regime = Regime::Engine;
    } else if (qh < 0 && qc > 0 && w > 0) {
        out.regime = Regime::Refrigerator;
    } else if (qh > 0 && qc < 0 && w > 0) {
        out.regime = Regime::Accelerator;
    }
    out.efficiency = efficiency(out.regime, out.rotation, e.w_cyc, e.q1, e.q2);
    return out;
}

namespace {

Eigen::Matrix4cd gibbs_state(const Eigen::Matrix4d& h, double beta) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h);
    const Eigen::Vector4d lv = es.eigenvalues();
    Eigen::Vector4d w = (-beta * (lv.array() - lv.minCoeff())).exp();
    w /= w.sum();
    const Eigen::Matrix4d rho = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
    return rho.cast<std::complex<double>>();
}

double energy(const Eigen::Matrix4cd& rho, const Eigen::Matrix4d& h) {
    return (rho * h.cast<std::complex<double>>()).trace().real();
}

}  // namespace

CornerEnergies oracle_corner_energies(const ModelParams& params, const Eigen::Matrix4cd& u,
                                      const Eigen::Matrix4cd& v) {
    const Eigen::Matrix4d h1 = hamiltonian(params, params.h1);
    const Eigen::Matrix4d h2 = hamiltonian(params, params.h2);
    const Eigen::Matrix4cd rho1 = gibbs_state(h1, params.beta1());
    const Eigen::Matrix4cd rho2 = u * rho1 * u.adjoint();
    const Eigen::Matrix4cd rho3 = gibbs_state(h2, params.beta2());
    const Eigen::Matrix4cd rho4 = v * rho3 * v.adjoint();
    return {energy(rho1, h1), energy(rho2, h2), energy(rho3, h2), energy(rho4, h1)};
}

CycleOutcome run_cycle(const ModelParams& params, double p) {
    validate(params);
    check_adiabaticity(p);
    return classify(params, stroke_energetics(params, p));
}

CycleOutcome run_cycle(const ModelParams& params, const FieldSchedule& schedule,
                       const CycleRunOptions& opts) {
    validate(params);
    if (schedule.reversed || schedule.h1 != params.h1 || schedule.h2 != params.h2) {
        throw std::invalid_argument("run_cycle: schedule must be the forward stroke h1 -> h2 of params");
    }
    const double p = adiabaticity(params, schedule, opts.integrator);
    CycleOutcome out = run_cycle(params, p);

    const auto fwd = schrodinger_oracle(params, schedule, Direction::Forward, opts.oracle);
    const auto rev = schrodinger_oracle(params, schedule, Direction::Reversed, opts.oracle);
    const CornerEnergies o = oracle_corner_energies(params, fwd.u, rev.u);
    const CornerEnergies& c = out.energetics.corners;
    const double scale = std::max({1.0, working_gap(params, params.h1), params.jx + params.jy});
    const double dev = std::max({std::abs(c.e1 - o.e1), std::abs(c.e2 - o.e2),
                                 std::abs(c.e3 - o.e3), std::abs(c.e4 - o.e4)}) /
                       scale;
    out.oracle_deviation = dev;
    if (dev > opts.cross_check_tol) {
        std::ostringstream os;
        os.precision(12);
        os << "run_cycle: closed-form energetics deviate from the density-matrix oracle by " << dev
           << " (Jx=" << params.jx << " Jy=" << params.jy << " h1=" << params.h1
           << " h2=" << params.h2 << " T1=" << params.t1 << " T2=" << params.t2
           << " tau=" << schedule.tau << ")";
        throw NumericalFailure(os.str());
    }
    return out;
}

}  // namespace xyotto
