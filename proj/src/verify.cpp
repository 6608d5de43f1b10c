// verify.cpp - Randomised invariant suites over all modules

#include "xyotto/verify.hpp"

#include "xyotto/analysis.hpp"
#include "xyotto/cycle.hpp"
#include "xyotto/dynamics.hpp"
#include "xyotto/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace xyotto {

double draw_log_uniform(Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

ModelParams draw_params(Rng& rng) {
    std::uniform_real_distribution<double> coupling(0.0, 10.0);
    std::uniform_real_distribution<double> field(0.1, 5.0);
    ModelParams p;
    p.jx = coupling(rng);
    p.jy = coupling(rng);
    p.h2 = field(rng);
    p.h1 = p.h2 + field(rng);
    p.t1 = draw_log_uniform(rng, 0.05, 20.0);
    p.t2 = draw_log_uniform(rng, 0.05, 20.0);
    p.tau = draw_log_uniform(rng, 1e-3, 50.0);
    return p;
}

namespace {

std::string describe(const ModelParams& p) {
    std::ostringstream os;
    os.precision(10);
    os << "Jx=" << p.jx << " Jy=" << p.jy << " h1=" << p.h1 << " h2=" << p.h2 << " T1=" << p.t1
       << " T2=" << p.t2 << " tau=" << p.tau;
    return os.str();
}

// Worst value of a nonnegative defect metric against a tolerance, plus boolean failures.
class Tally {
public:
    Tally(std::string module, std::string name, double tol = 0.0)
        : module_(std::move(module)), name_(std::move(name)), tol_(tol) {}

    void metric(double value, const std::string& where) {
        if (count_++ == 0 || !(value <= worst_)) worst_ = value;
        if (!(value <= tol_)) fail(where);
    }

    void require(bool ok, const std::string& where) {
        ++count_;
        if (!ok) fail(where);
    }

    CheckResult result() const {
        std::ostringstream os;
        os.precision(3);
        os << count_ << " cases";
        if (tol_ > 0.0) os << ", worst " << worst_ << " (tol " << tol_ << ")";
        if (failures_ > 0) os << ", " << failures_ << " failed; first: " << first_failure_;
        return {module_, name_, failures_ == 0 && count_ > 0, os.str()};
    }

private:
    void fail(const std::string& where) {
        if (failures_++ == 0) first_failure_ = where;
    }

    std::string module_;
    std::string name_;
    double tol_;
    double worst_{0.0};
    int count_{0};
    int failures_{0};
    std::string first_failure_;
};

// Independent Hamiltonian from Pauli Kronecker products.
Eigen::Matrix4cd pauli_hamiltonian(const ModelParams& p, double h) {
    using C = std::complex<double>;
    Eigen::Matrix2cd sx, sy, sz, id;
    sx << 0, 1, 1, 0;
    sy << 0, C(0, -1), C(0, 1), 0;
    sz << 1, 0, 0, -1;
    id.setIdentity();
    auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
        Eigen::Matrix4cd k;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        return k;
    };
    return p.jx * kron(sx, sx) + p.jy * kron(sy, sy) + h * (kron(sz, id) + kron(id, sz));
}

using LD = long double;

// Sign-safe x- and y-derivatives: near g = 1 the complement is differenced instead.
LD g_shifted(LD x, LD y, bool upper) { return upper ? -g_complement(x, y) : g(x, y); }

LD dg_dx(LD x, LD y) {
    const bool upper = g(x, y) > 0.5L;
    const LD h = 1e-5L * std::max(x, LD(1e-2));
    return (g_shifted(x + h, y, upper) - g_shifted(std::max(x - h, LD(0)), y, upper));
}

LD dg_dy(LD x, LD y) {
    const bool upper = g(x, y) > 0.5L;
    const LD h = 1e-5L * y;
    return g_shifted(x, y + h, upper) - g_shifted(x, y - h, upper);
}

}  // namespace

std::vector<CheckResult> g_property_checks(std::uint64_t seed, int draws) {
    Rng rng(seed);
    std::uniform_real_distribution<double> ux(0.0, 50.0);
    std::uniform_real_distribution<double> uy(0.0, 5.0);
    std::uniform_real_distribution<double> ur(1.0, 3.0);

    Tally range("core-model", "g: 0 <= g < 1");
    Tally zero("core-model", "g: g = 0 iff x = 0");
    Tally limits("core-model", "g: large-x limits 1, 1/2, 0 approached monotonically for y <= 1");
    Tally monox("core-model", "g: dg/dx > 0 for y <= 1");
    Tally single("core-model", "g: single stationary point in x for y > 1");
    Tally monoy("core-model", "g: dg/dy < 0");
    Tally scaling("core-model", "g: g(rx, y) > g(x, ry) for r > 1");

    for (int k = 0; k < draws; ++k) {
        const double x = 50.0 - ux(rng);  // (0, 50]
        const double y = 5.0 - uy(rng);   // (0, 5]
        const double r = 4.0 - ur(rng);   // (1, 3]
        std::ostringstream os;
        os.precision(17);
        os << "x=" << x << " y=" << y << " r=" << r;
        const std::string at = os.str();

        const double gv = g(x, y);
        range.require(gv >= 0.0 && gv <= 1.0 && g_complement(x, y) > 0.0, at);
        zero.require(gv > 0.0 && g(0.0, y) == 0.0, at);

        const LD lx = x;
        const LD ly = y;
        // Limits: y < 1 -> 1, y > 1 -> 0, y = 1 -> 1/2.
        {
            const LD sx = 40.0L / std::abs(1.0L - ly) + lx;
            if (y == 1.0) {
                limits.require(std::abs(g(lx, ly) - 0.5L) < 0.5L, at);
            } else if (y < 1.0) {
                const LD c1 = g_complement(lx, ly);
                const LD c2 = g_complement(2 * lx, ly);
                limits.require(c2 < c1 && g_complement(sx, ly) < 1e-12L, at);
            } else {
                limits.require(g(sx, ly) < 1e-12L, at);
            }
            const LD d1 = std::abs(g(lx, 1.0L) - 0.5L);
            const LD d2 = std::abs(g(2 * lx, 1.0L) - 0.5L);
            // Beyond x ~ 20 both deviations sit below long double resolution.
            const bool closer = d1 > 1e-16L ? d2 < d1 : d2 <= d1;
            limits.require(closer && std::abs(g(LD(60), LD(1)) - 0.5L) < 1e-12L, at + " (y=1)");
        }
        if (y <= 1.0) {
            monox.require(dg_dx(lx, ly) > 0, at);
        } else {
            const LD xmax = 60.0L / (ly - 1.0L) + 60.0L;
            const int n = 400;
            int changes = 0;
            int last = 0;
            LD prev = g(LD(1e-3), ly);
            for (int i = 1; i <= n; ++i) {
                const LD xi = std::exp(std::log(LD(1e-3)) +
                                       (std::log(xmax) - std::log(LD(1e-3))) * i / n);
                const LD gi = g(xi, ly);
                const int s = gi > prev ? 1 : (gi < prev ? -1 : 0);
                if (s != 0) {
                    if (last != 0 && s != last) ++changes;
                    last = s;
                }
                prev = gi;
            }
            single.require(changes == 1 && last == -1, at);
        }
        monoy.require(dg_dy(lx, ly) < 0, at);
        {
            const LD lr = r;
            const LD a = g(lr * lx, ly);
            const LD b = g(lx, lr * ly);
            const bool ok = (a > 0.5L && b > 0.5L)
                                ? g_complement(lr * lx, ly) < g_complement(lx, lr * ly)
                                : a > b;
            scaling.require(ok, at);
        }
    }
    return {range.result(), zero.result(), limits.result(), monox.result(),
            single.result(), monoy.result(), scaling.result()};
}

namespace {

void static_checks(Rng& rng, int samples, std::vector<CheckResult>& out) {
    Tally spec("core-model", "spectrum matches numeric eigendecomposition", 1e-10);
    Tally vecs("core-model", "eigenvectors are orthonormal eigenvectors", 1e-10);
    Tally pops("core-model", "thermal populations normalised and Gibbs-ordered");
    Tally wf("core-model", "work function = p1 - p4 = g(beta eps4, eps3/eps4)", 1e-12);
    Tally quench("core-model", "quench adiabaticity > P_min");
    Tally cp("core-model", "c(P) increasing with c(P_min) = 0, c(1) = 1");
    Tally first_law("cycle", "first law W_cyc + Q1 + Q2 = 0", 1e-10);
    Tally signs("cycle", "stroke sign invariants and Q_na = -W_na");
    Tally corners("cycle", "Q1 = E1 - E4 and Q2 = E3 - E2", 1e-10);
    Tally engine("cycle", "W_cyc < 0 iff f1 < c(P) f2");
    Tally bound("cycle", "W21 < 0 above the square-root bound and at the quench value");
    Tally cr("analysis", "Jx Jy > h1^2 iff eps3 > eps4(h1)");

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < samples; ++k) {
        const ModelParams p = draw_params(rng);
        const std::string at = describe(p);
        const double h = unit(rng) * p.h1 * 1.5;

        // Spectrum.
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(pauli_hamiltonian(p, h));
        Eigen::Vector4d lv = spectrum(p, h).levels();
        std::sort(lv.data(), lv.data() + 4);
        spec.metric((es.eigenvalues() - lv).cwiseAbs().maxCoeff(), at);

        const Eigen::Matrix4d v = eigenvectors(p, h);
        const Eigen::Matrix4d hm = hamiltonian(p, h);
        const Eigen::Vector4d levels = spectrum(p, h).levels();
        const double resid = (hm * v - v * levels.asDiagonal()).cwiseAbs().maxCoeff();
        const double ortho = (v.transpose() * v - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();
        const auto b = eigenbasis(p, h);
        vecs.metric(std::max({resid, ortho,
                              std::abs(b.alpha_plus * b.alpha_plus + b.alpha_minus * b.alpha_minus - 1.0)}),
                    at);

        // Populations.
        const auto s1 = spectrum(p, p.h1);
        const auto th = thermal_populations(s1, p.beta1());
        const Eigen::Vector4d pv = th.vector();
        const Eigen::Vector4d lv1 = s1.levels();
        bool ordered = true;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (lv1(i) < lv1(j) && pv(i) < pv(j)) ordered = false;
        pops.require(std::abs(pv.sum() - 1.0) < 1e-12 && (pv.array() >= 0).all() && ordered, at);

        const double f = work_function(p.beta1(), s1.eps4, s1.eps3);
        wf.metric(std::max(std::abs(f - (th.p1 - th.p4)),
                           std::abs(f - g(p.beta1() * s1.eps4, s1.eps3 / s1.eps4))),
                  at);

        quench.require(quench_adiabaticity(p) > p_min(p), at);

        {
            bool ok = std::abs(c_of_p(p, 1.0) - 1.0) < 1e-12 && std::abs(c_of_p(p, p_min(p))) < 1e-12;
            double prev = c_of_p(p, 0.5);
            for (int i = 1; i <= 50; ++i) {
                const double c = c_of_p(p, 0.5 + 0.01 * i);
                ok = ok && c > prev;
                prev = c;
            }
            cp.require(ok, at);
        }

        // Energetics at a random P.
        const double pp = unit(rng);
        const StrokeEnergetics e = stroke_energetics(p, pp);
        const double scale = std::max({1.0, s1.eps4, s1.eps3});
        first_law.metric(std::abs(e.first_law_residual()) / scale, at);
        signs.require(e.w12_ad >= 0 && e.w21_ad <= 0 && e.w12_na >= 0 && e.w21_na >= 0 &&
                          e.q1_na == -e.w21_na && e.q2_na == -e.w12_na,
                      at);
        const auto& c = e.corners;
        corners.metric(std::max(std::abs(e.q1 - (c.e1 - c.e4)), std::abs(e.q2 - (c.e3 - c.e2))) / scale,
                       at);

        {
            const double ph = 0.5 + 0.5 * unit(rng);
            const StrokeEnergetics eh = stroke_energetics(p, ph);
            const auto s2 = spectrum(p, p.h2);
            const double f1 = work_function(p.beta1(), s1.eps4, s1.eps3);
            const double f2 = work_function(p.beta2(), s2.eps4, s2.eps3);
            const double margin = f1 - c_of_p(p, ph) * f2;
            if (std::abs(eh.w_cyc) > 1e-10 * eh.w_scale && std::abs(margin) > 1e-12) {
                engine.require((eh.w_cyc < 0) == (margin < 0), at);
            }
        }

        {
            const double lo = expansion_work_bound(p);
            const double pb = lo + (1.0 - lo) * (1.0 - unit(rng));
            bound.require(stroke_energetics(p, pb).w21() < 0 &&
                              stroke_energetics(p, quench_adiabaticity(p)).w21() < 0,
                          at);
        }

        cr.require(counter_rotating_condition(p) == (s1.eps3 > s1.eps4), at);
    }
    for (const Tally* t : {&spec, &vecs, &pops, &wf, &quench, &cp, &first_law, &signs, &corners,
                           &engine, &bound, &cr}) {
        out.push_back(t->result());
    }
}

void efficiency_monotonicity(Rng& rng, int samples, std::vector<CheckResult>& out) {
    Tally mono("cycle", "efficiency strictly increasing in P at engine points");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int found = 0;
    for (int attempt = 0; attempt < 200 * samples && found < samples; ++attempt) {
        const ModelParams p = draw_params(rng);
        const double pp = 1.0 - 0.05 * unit(rng);
        const double dp = 1e-4;
        if (pp - dp < 0.5 || pp + dp > 1.0) continue;
        const CycleOutcome a = run_cycle(p, pp - dp);
        const CycleOutcome b = run_cycle(p, pp);
        const CycleOutcome c = run_cycle(p, pp + dp);
        if (!a.efficiency || !b.efficiency || !c.efficiency) continue;
        ++found;
        mono.require(*a.efficiency < *b.efficiency && *b.efficiency < *c.efficiency,
                     describe(p) + " P=" + std::to_string(pp));
    }
    out.push_back(mono.result());
}

void dynamic_checks(Rng& rng, int samples, std::vector<CheckResult>& out) {
    Tally ode("dynamics", "amplitude P agrees with the propagator oracle", 1e-6);
    Tally norm("dynamics", "amplitude norm conserved at every accepted step", 1e-9);
    Tally levels("dynamics", "|c4 from level 1|^2 = |c1 from level 4|^2", 1e-8);
    Tally idle("dynamics", "idle levels decouple from the working pair", 1e-9);
    Tally unit_defect("dynamics", "oracle unitarity", 1e-9);
    Tally micro("dynamics", "microreversibility and antiunitary symmetry", 1e-8);
    Tally quench("dynamics", "P(tau = 1e-4) matches the quench value", 1e-3);
    Tally energetics("cycle", "closed-form energetics match the density-matrix oracle", 1e-8);

    for (int k = 0; k < samples; ++k) {
        const ModelParams p = draw_params(rng);
        const std::string at = describe(p);
        const FieldSchedule s = FieldSchedule::forward(p);
        try {
            const AmplitudeSolution a1 = integrate_amplitudes(p, s, Level::One);
            const AmplitudeSolution a4 = integrate_amplitudes(p, s, Level::Four);
            norm.metric(std::max(a1.max_norm_defect, a4.max_norm_defect), at);
            levels.metric(std::abs(std::norm(a1.state.c4) - std::norm(a4.state.c1)), at);

            const MicroreversibilityReport mr = microreversibility_check(p, s);
            const double p_ode = adiabaticity(p, s);
            ode.metric(std::abs(p_ode - mr.forward(0, 0)), at);
            double leak = 0.0;
            for (int i = 0; i < 4; ++i) {
                for (int j : {1, 2}) {
                    if (i != j) leak = std::max({leak, mr.forward(i, j), mr.forward(j, i)});
                }
            }
            idle.metric(leak, at);
            micro.metric(mr.max_deviation(), at);

            const PropagatorResult fwd = schrodinger_oracle(p, s);
            unit_defect.metric(fwd.unitarity_defect, at);

            const CycleOutcome c = run_cycle(p, s, CycleRunOptions{{}, {}, 1.0});
            energetics.metric(*c.oracle_deviation, at);

            ModelParams q = p;
            q.tau = 1e-4;
            quench.metric(std::abs(adiabaticity(q, FieldSchedule::forward(q)) - quench_adiabaticity(q)),
                          at);
        } catch (const NumericalFailure& e) {
            ode.require(false, at + ": " + e.what());
        }
    }
    for (const Tally* t : {&ode, &norm, &levels, &idle, &unit_defect, &micro, &quench, &energetics}) {
        out.push_back(t->result());
    }
}

void analysis_checks(Rng& rng, int samples, std::vector<CheckResult>& out) {
    // Uncoupled spins: engine above T1 = (h1/h2) T2, refrigerator between, accelerator below T1 = T2.
    {
        Tally zones("analysis", "uncoupled-spin regime map matches the analytic zones");
        const ModelParams p{1e-9, 1e-9, 4.0, 1.0, 1.0, 1.0, 1.0};
        const auto axis = make_axis({0.05, 20.0, 41, true});
        const RegimeMap map = sweep_regimes(p, 1.0, axis, axis, 1);
        const double ratio = p.h1 / p.h2;
        const std::size_t n = axis.size();
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            for (std::size_t i2 = 0; i2 < n; ++i2) {
                auto zone = [&](std::size_t a, std::size_t b) {
                    const double t1 = axis[a];
                    const double t2 = axis[b];
                    if (t1 > ratio * t2) return Regime::Engine;
                    if (t1 > t2) return Regime::Refrigerator;
                    return Regime::Accelerator;
                };
                const Regime expected = zone(i1, i2);
                bool near_boundary = false;
                for (std::size_t a = i1 ? i1 - 1 : 0; a <= std::min(i1 + 1, n - 1); ++a)
                    for (std::size_t b = i2 ? i2 - 1 : 0; b <= std::min(i2 + 1, n - 1); ++b)
                        if (zone(a, b) != expected) near_boundary = true;
                if (near_boundary) continue;
                zones.require(map.at(i1, i2).regime == expected,
                              "T1=" + std::to_string(axis[i1]) + " T2=" + std::to_string(axis[i2]));
            }
        }
        out.push_back(zones.result());
    }

    Tally weak("analysis", "no counter-rotating engine under weak coupling");
    Tally threshold("analysis", "engine threshold T1_0 rises as P decreases");
    Tally nested("analysis", "high-efficiency regions shrink as P decreases");
    const auto axis = make_axis({0.05, 20.0, 25, true});
    for (int k = 0; k < samples; ++k) {
        ModelParams p = draw_params(rng);
        const std::string at = describe(p);
        if (!counter_rotating_condition(p)) {
            const RegimeMap map = sweep_regimes(p, 1.0, axis, axis, 1);
            bool none = true;
            for (const auto& c : map.cells)
                if (c.regime == Regime::Engine && c.rotation == Rotation::CounterRotating) none = false;
            weak.require(none, at);

            double prev = 0.0;
            bool ok = true;
            const double pm = p_min(p);
            for (int i = 0; i <= 10; ++i) {
                const double pp = 1.0 - (1.0 - pm) * 0.09 * i;
                const ThresholdResult r = find_threshold_T1(p, pp);
                const double t = r.kind == ThresholdKind::Unbounded ? INFINITY
                                 : r.kind == ThresholdKind::Zero   ? 0.0
                                                                   : r.t1_0;
                ok = ok && t >= prev;
                prev = t;
            }
            ok = ok && find_threshold_T1(p, pm).kind == ThresholdKind::Unbounded;
            threshold.require(ok, at);
        }
        const auto regions = high_efficiency_region(p, {1.0, 0.999, 0.99, 0.95}, axis, axis, 1);
        bool ok = true;
        for (std::size_t i = 1; i < regions.size(); ++i) {
            ok = ok && std::includes(regions[i - 1].cells.begin(), regions[i - 1].cells.end(),
                                     regions[i].cells.begin(), regions[i].cells.end());
        }
        nested.require(ok, at);
    }
    out.push_back(weak.result());
    out.push_back(threshold.result());
    out.push_back(nested.result());
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const VerifyOptions& opts) {
    std::vector<CheckResult> out;
    Rng rng(opts.seed);
    static_checks(rng, opts.static_samples, out);
    for (auto& c : g_property_checks(rng(), opts.g_samples)) out.push_back(std::move(c));
    efficiency_monotonicity(rng, opts.dynamic_samples, out);
    dynamic_checks(rng, opts.dynamic_samples, out);
    analysis_checks(rng, opts.dynamic_samples, out);
    return out;
}

}  // namespace xyotto
