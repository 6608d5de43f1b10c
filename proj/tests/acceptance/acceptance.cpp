// acceptance.cpp - One PASS/FAIL line per acceptance criterion; exits 1 if any fails

#include "xyotto/analysis.hpp"
#include "xyotto/cycle.hpp"
#include "xyotto/dynamics.hpp"
#include "xyotto/model.hpp"
#include "xyotto/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace xyotto;

namespace {

struct Criterion {
    int id;
    std::string title;
    bool passed;
    std::string detail;
};

std::vector<Criterion> results;

void record(int id, const std::string& title, bool passed, const std::string& detail) {
    results.push_back({id, title, passed, detail});
    std::fprintf(stderr, "  finished criterion %d\n", id);
}

std::string num(double v, int precision = 6) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ModelParams make(double jx, double jy, double h1 = 4.0, double h2 = 1.0) {
    ModelParams p;
    p.jx = jx;
    p.jy = jy;
    p.h1 = h1;
    p.h2 = h2;
    return p;
}

ModelParams with_tau(ModelParams p, double tau) {
    p.tau = tau;
    return p;
}

// Every sweep goes through here so the first-law criterion covers all of them.
double worst_first_law = 0.0;
std::size_t first_law_cells = 0;

RegimeMap sweep(const ModelParams& p, double P, const std::vector<double>& t1, const std::vector<double>& t2) {
    RegimeMap m = sweep_regimes(p, P, t1, t2);
    for (const auto& c : m.cells) worst_first_law = std::max(worst_first_law, std::abs(c.first_law_residual));
    first_law_cells += m.cells.size();
    return m;
}

const std::vector<double>& grid() {
    static const std::vector<double> g = make_axis(default_temperature_axis());
    return g;
}

// ---------------------------------------------------------------------------

void quench_criteria() {
    {
        const ModelParams p = with_tau(make(10, 2), 1e-4);
        const auto t0 = std::chrono::steady_clock::now();
        const double closed = quench_adiabaticity(p);
        const double ode = adiabaticity(p, FieldSchedule::forward(p));
        const double secs = seconds_since(t0);
        const bool ok = std::abs(closed - 0.929) <= 1e-3 && std::abs(ode - 0.929) <= 1e-3 && secs < 1.0;
        record(1, "quench adiabaticity (Jx=10, Jy=2, h1=4, h2=1)", ok,
               "closed form " + num(closed, 10) + ", ODE at tau=1e-4 " + num(ode, 10) + ", target 0.929 +- 0.001, " +
                   num(secs, 3) + " s (limit 1 s)");
    }
    {
        const ModelParams p = with_tau(make(10, 2), 50);
        const auto t0 = std::chrono::steady_clock::now();
        const double ode = adiabaticity(p, FieldSchedule::forward(p));
        const double secs = seconds_since(t0);
        record(2, "adiabatic limit at tau=50", ode >= 0.999 && secs < 10.0,
               "P=" + num(ode, 10) + " (>= 0.999), " + num(secs, 3) + " s (limit 10 s)");
    }
    {
        const ModelParams p = with_tau(make(10, 1.6), 1e-4);
        const double closed = quench_adiabaticity(p);
        const double ode = adiabaticity(p, FieldSchedule::forward(p));
        const bool ok = std::abs(closed - 0.932) <= 1e-3 && std::abs(ode - 0.932) <= 1e-3;
        record(3, "quench adiabaticity (Jx=10, Jy=1.6, h1=4, h2=1)", ok,
               "closed form " + num(closed, 10) + ", ODE at tau=1e-4 " + num(ode, 10) + ", target 0.932 +- 0.001");
    }
}

void oracle_criteria() {
    Rng rng(2024);
    constexpr int kSets = 60;
    double worst_p = 0.0;
    double worst_e = 0.0;
    double worst_micro = 0.0;
    int failed_sets = 0;
    std::string failure;
    for (int k = 0; k < kSets; ++k) {
        const ModelParams p = draw_params(rng);
        const FieldSchedule s = FieldSchedule::forward(p);
        try {
            const double p_ode = adiabaticity(p, s);
            const PropagatorResult fwd = schrodinger_oracle(p, s, Direction::Forward);
            const PropagatorResult rev = schrodinger_oracle(p, s, Direction::Reversed);
            worst_p = std::max(worst_p, std::abs(p_ode - fwd.p));

            const CornerEnergies a = corner_energies(p, p_ode);
            const CornerEnergies b = oracle_corner_energies(p, fwd.u, rev.u);
            const double scale = std::max(working_gap(p, p.h1), p.jx + p.jy);
            const double d = std::max({std::abs(a.e1 - b.e1), std::abs(a.e2 - b.e2), std::abs(a.e3 - b.e3),
                                       std::abs(a.e4 - b.e4)});
            worst_e = std::max(worst_e, d / scale);

            worst_micro = std::max(worst_micro, microreversibility_check(p, s).max_deviation());
        } catch (const std::exception& e) {
            if (failed_sets++ == 0) failure = std::string(", first failure: ") + e.what();
        }
    }
    const std::string sets = std::to_string(kSets) + " random sets (" + std::to_string(failed_sets) + " failed)";
    record(4, "oracle equivalence", failed_sets == 0 && worst_p < 1e-6 && worst_e < 1e-8,
           sets + ": max |P_ode - P_oracle| = " + num(worst_p, 3) + " (< 1e-6), max relative corner-energy deviation = " +
               num(worst_e, 3) + " (< 1e-8)" + failure);
    record(5, "microreversibility and symmetry", failed_sets == 0 && worst_micro < 1e-8,
           sets + ": max deviation " + num(worst_micro, 3) + " (< 1e-8)" + failure);
}

std::size_t min_engine_t1_index(const RegimeMap& m) {
    std::size_t best = m.t1_axis.size();
    for (const auto& r : engine_regions(m)) best = std::min(best, r.min_i1);
    return best;
}

void weak_topology() {
    const ModelParams p = make(0.01, 2);
    const RegimeMap m1 = sweep(p, 1.0, grid(), grid());
    const auto regions = engine_regions(m1);
    const bool one = regions.size() == 1;
    const bool touches = one && regions[0].min_i2 == 0;
    const RegimeMap m2 = sweep(p, 0.93, grid(), grid());
    const std::size_t a = min_engine_t1_index(m1);
    const std::size_t b = min_engine_t1_index(m2);
    const bool shifted = a < grid().size() && b < grid().size() && grid()[b] > grid()[a];
    record(7, "weak-coupling regime topology", one && touches && shifted,
           "P=1: " + std::to_string(regions.size()) + " engine region(s), touches min-T2 column: " +
               (touches ? "yes" : "no") + "; min engine T1 " + (a < grid().size() ? num(grid()[a]) : "none") +
               " at P=1 vs " + (b < grid().size() ? num(grid()[b]) : "none") + " at P=0.93");
}

void strong_topology() {
    const RegimeMap m = sweep(make(10, 2.6), 1.0, grid(), grid());
    const auto regions = engine_regions(m);
    int regular = 0, counter = 0;
    for (const auto& r : regions) (r.rotation == Rotation::Regular ? regular : counter)++;
    bool column_clear = true;
    for (std::size_t i1 = 0; i1 < m.t1_axis.size(); ++i1) {
        if (m.at(i1, 0).regime == Regime::Engine) column_clear = false;
    }
    const bool shape = regions.size() == 2 && regular == 1 && counter == 1 && column_clear;

    // Straddle Jx Jy = h1^2 along Jy at Jx=10, and along Jx at Jy=2.
    std::vector<std::pair<double, double>> scan;
    for (double jy : {1.0, 1.3, 1.5, 1.6, 1.7, 1.9, 2.2, 2.6, 3.5}) scan.push_back({10.0, jy});
    for (double jx : {5.0, 7.0, 7.9, 8.0, 8.1, 9.0, 12.0}) scan.push_back({jx, 2.0});
    int mismatches = 0;
    std::string where;
    for (const auto& [jx, jy] : scan) {
        const ModelParams q = make(jx, jy);
        const RegimeMap s = sweep(q, 1.0, grid(), grid());
        const bool has = std::any_of(s.cells.begin(), s.cells.end(), [](const RegimeCell& c) {
            return c.regime == Regime::Engine && c.rotation == Rotation::CounterRotating;
        });
        if (has != counter_rotating_condition(q)) {
            ++mismatches;
            where += " (Jx=" + num(jx) + ", Jy=" + num(jy) + ": counter-rotating cells " + (has ? "present" : "absent") +
                     ", Jx*Jy=" + num(jx * jy) + ")";
        }
    }
    record(8, "strong-coupling regime topology", shape && mismatches == 0,
           std::to_string(regular) + " regular + " + std::to_string(counter) +
               " counter-rotating engine region(s), min-T2 column engine-free: " + (column_clear ? "yes" : "no") +
               "; condition scan over " + std::to_string(scan.size()) + " (Jx, Jy) points, " +
               std::to_string(mismatches) + " mismatch(es)" + where);
}

void gap_criterion() {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams p = make(10, 2.6);
    const GapReport g = find_temperature_gap(p, 1.0, grid(), grid(), {0.95});
    // The regime map on the same grid, evaluated with parallel workers.
    const RegimeMap m = sweep(p, 1.0, grid(), grid());
    const double secs = seconds_since(t0);
    const bool ordered = g.found && g.t1_a < g.t2_0 && g.t2_0 < g.t1_b;
    const bool wider = g.found && !g.widened_vs_p.empty() && g.widened_vs_p[0].width() > g.width();
    bool map_agrees = g.found;
    for (std::size_t i1 = 0; i1 < m.t1_axis.size() && map_agrees; ++i1) {
        if (!(m.t1_axis[i1] > g.t1_a && m.t1_axis[i1] < g.t1_b)) continue;
        for (std::size_t i2 = 0; i2 < m.t2_axis.size(); ++i2) {
            if (m.at(i1, i2).regime == Regime::Engine) map_agrees = false;
        }
    }
    const bool ok = ordered && g.certificate.verified && map_agrees && wider && secs < 120.0;
    std::string detail = g.found ? "T1_a=" + num(g.t1_a) + " < T2_0=" + num(g.t2_0) + " < T1_b=" + num(g.t1_b) +
                                       ", W_cyc > 0 on " + std::to_string(g.certificate.t2_samples) +
                                       " T2 samples x " + std::to_string(g.certificate.t1_samples) +
                                       " T1 samples: " + (g.certificate.verified ? "yes" : "no") +
                                       ", width " + num(g.width()) + " at P=1 vs " +
                                       (g.widened_vs_p.empty() ? "?" : num(g.widened_vs_p[0].width())) + " at P=0.95"
                                 : "gap not found: " + g.diagnostics;
    record(9, "temperature gap", ok, detail + ", " + num(secs, 3) + " s (limit 120 s)");
}

double best_eta(const ModelParams& p, HotBath hot, const std::vector<double>& axis, double P) {
    const auto peak = max_efficiency(p, hot, axis, P);
    return peak ? peak->eta : -1.0;
}

std::size_t exceedance_cells(const ModelParams& p, HotBath hot, const std::vector<double>& axis, double P) {
    const auto s = efficiency_curve(p, hot, axis, {P});
    return static_cast<std::size_t>(
        std::count_if(s[0].eta.begin(), s[0].eta.end(), [](const auto& e) { return e && *e > 0.75; }));
}

void efficiency_criterion() {
    const std::vector<double> axis = make_axis({0.01, 100, 801, true});

    ModelParams weak = make(0.01, 0.8);
    weak.t2 = 0.2;
    const std::size_t weak_at_1 = exceedance_cells(weak, HotBath::Bath1, axis, 1.0);
    const std::size_t weak_at_9996 = exceedance_cells(weak, HotBath::Bath1, axis, 0.9996);
    // Adiabaticity at which the peak efficiency drops to the Otto value.
    auto excess = [&](double P) { return best_eta(weak, HotBath::Bath1, axis, P) - 0.75; };
    double lo = 0.99, hi = 1.0;
    const bool bracketed = excess(lo) < 0 && excess(hi) > 0;
    if (bracketed) {
        for (int i = 0; i < 60 && hi - lo > 1e-9; ++i) {
            const double mid = 0.5 * (lo + hi);
            (excess(mid) > 0 ? hi : lo) = mid;
        }
    }
    const double p_star = 0.5 * (lo + hi);
    const bool weak_ok = weak_at_1 > 0 && bracketed && p_star >= 0.9994 && p_star <= 0.9998;

    ModelParams strong = make(10, 1.6);
    strong.t1 = 0.05;
    const std::size_t strong_at_1 = exceedance_cells(strong, HotBath::Bath2, axis, 1.0);
    const std::size_t strong_at_q = exceedance_cells(strong, HotBath::Bath2, axis, 0.932);
    const double strong_peak = best_eta(strong, HotBath::Bath2, axis, 1.0);
    const bool strong_ok = strong_at_1 > 0 && strong_at_q == 0;

    record(10, "efficiency beyond Otto", weak_ok && strong_ok,
           "regular (Jx=0.01, Jy=0.8, T2=0.2): " + std::to_string(weak_at_1) + " T1 cells with eta > 0.75 at P=1, " +
               std::to_string(weak_at_9996) + " at P=0.9996, exceedance vanishes at P=" +
               (bracketed ? num(p_star, 8) : std::string("<not bracketed>")) +
               " (accept [0.9994, 0.9998]); counter-rotating (Jx=10, Jy=1.6, T1=0.05): " +
               std::to_string(strong_at_1) + " cells at P=1 (peak eta " +
               (strong_peak < 0 ? std::string("none, no engine") : num(strong_peak)) + "), " +
               std::to_string(strong_at_q) + " at P=0.932");
}

void monotonicity_criterion() {
    Rng rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr double kStep = 1e-6;
    int found = 0, increasing = 0, attempts = 0;
    std::string failure;
    while (found < 40 && attempts < 100000) {
        ++attempts;
        const ModelParams p = draw_params(rng);
        const double pm = p_min(p);
        const double P = pm + (1 - pm) * (0.05 + 0.9 * unit(rng));
        const auto lo = run_cycle(p, P - kStep);
        const auto hi = run_cycle(p, P + kStep);
        if (!lo.efficiency || !hi.efficiency) continue;
        ++found;
        if (*hi.efficiency > *lo.efficiency) {
            ++increasing;
        } else if (failure.empty()) {
            failure = ", first violation at P=" + num(P, 10);
        }
    }
    record(11, "efficiency increases with P", found >= 20 && increasing == found,
           std::to_string(increasing) + "/" + std::to_string(found) +
               " random engine points with eta(P+1e-6) > eta(P-1e-6)" + failure);
}

void never_inverted_criterion() {
    Rng rng(1312);
    constexpr int kDraws = 5000;
    int bound_violations = 0;
    int w21_violations = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::string example;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < kDraws; ++k) {
        const ModelParams p = draw_params(rng);
        const double q = quench_adiabaticity(p);
        const double bound = expansion_work_bound(p);
        if (!(q > bound)) {
            if (bound_violations == 0) {
                example = " (e.g. Jx=" + num(p.jx) + " Jy=" + num(p.jy) + " h1=" + num(p.h1) + " h2=" + num(p.h2) +
                          ": quench " + num(q, 8) + " vs bound " + num(bound, 8) + ")";
            }
            ++bound_violations;
        }
        worst_margin = std::min(worst_margin, q - bound);
        for (double P : {q, q + (1 - q) * unit(rng), 1.0}) {
            if (!(stroke_energetics(p, P).w21() < 0)) ++w21_violations;
        }
    }
    record(12, "expansion work never inverted", bound_violations == 0 && w21_violations == 0,
           std::to_string(kDraws) + " random sets: quench value <= sqrt bound in " + std::to_string(bound_violations) +
               " (min margin " + num(worst_margin, 4) + ")" + example + "; W21 >= 0 for P >= quench value in " +
               std::to_string(w21_violations) + " of " + std::to_string(3 * kDraws) + " evaluations");
}

void uncoupled_criterion() {
    const ModelParams p = make(1e-9, 1e-9);
    const RegimeMap m = sweep(p, 1.0, grid(), grid());
    const double ratio = p.h1 / p.h2;
    auto zone = [&](std::size_t i1, std::size_t i2) {
        const double t1 = m.t1_axis[i1], t2 = m.t2_axis[i2];
        if (t1 > ratio * t2) return Regime::Engine;
        if (t1 > t2) return Regime::Refrigerator;
        if (t1 < t2) return Regime::Accelerator;
        return Regime::Degenerate;
    };
    const std::size_t n1 = m.t1_axis.size(), n2 = m.t2_axis.size();
    std::size_t checked = 0, mismatched = 0;
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
        for (std::size_t i2 = 0; i2 < n2; ++i2) {
            const Regime expected = zone(i1, i2);
            bool near_boundary = expected == Regime::Degenerate;
            for (std::size_t a = i1 ? i1 - 1 : 0; a <= std::min(i1 + 1, n1 - 1); ++a) {
                for (std::size_t b = i2 ? i2 - 1 : 0; b <= std::min(i2 + 1, n2 - 1); ++b) {
                    if (zone(a, b) != expected) near_boundary = true;
                }
            }
            if (near_boundary) continue;
            ++checked;
            if (m.at(i1, i2).regime != expected) ++mismatched;
        }
    }
    record(13, "uncoupled limit zones", mismatched == 0 && checked > 0,
           std::to_string(checked) + " cells away from the boundaries, " + std::to_string(mismatched) + " mismatched");
}

void g_criterion() {
    const auto checks = g_property_checks(99, 10000);
    int passed = 0;
    std::string failed;
    for (const auto& c : checks) {
        if (c.passed) {
            ++passed;
        } else {
            failed += " [" + c.name + ": " + c.detail + "]";
        }
    }
    record(14, "g property suite", passed == 7 && checks.size() == 7,
           std::to_string(passed) + "/" + std::to_string(checks.size()) + " properties on 10^4 draws" + failed);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::function<void()>> steps = {
        quench_criteria, oracle_criteria,        weak_topology,          strong_topology, gap_criterion,
        efficiency_criterion, monotonicity_criterion, never_inverted_criterion, uncoupled_criterion, g_criterion,
    };
    for (const auto& step : steps) {
        try {
            step();
        } catch (const std::exception& e) {
            record(0, "unexpected exception", false, e.what());
        }
    }
    record(6, "first law on every sweep cell", worst_first_law <= 1e-10 && first_law_cells > 0,
           std::to_string(first_law_cells) + " cells, max |W_cyc + Q1 + Q2| = " + num(worst_first_law, 3) +
               " (<= 1e-10)");

    std::sort(results.begin(), results.end(), [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
    int failures = 0;
    for (const auto& r : results) {
        std::printf("[%s] %2d %s: %s\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.detail.c_str());
        if (!r.passed) ++failures;
    }
    std::printf("%zu criteria, %d failed, %.1f s\n", results.size(), failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
