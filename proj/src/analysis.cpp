// analysis.cpp - Parameter-space studies over bath temperatures and adiabaticity

#include "xyotto/analysis.hpp"

#include "xyotto/errors.hpp"
#include "xyotto/roots.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace xyotto {

std::vector<double> make_axis(const AxisSpec& spec) {
    if (spec.count < 2) throw std::invalid_argument("axis count must be >= 2");
    if (!(spec.min < spec.max)) throw std::invalid_argument("axis requires min < max");
    if (spec.log && !(spec.min > 0)) throw std::invalid_argument("log axis requires min > 0");
    std::vector<double> v(spec.count);
    const double n = static_cast<double>(spec.count - 1);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const double u = static_cast<double>(i) / n;
        v[i] = spec.log ? std::exp(std::log(spec.min) + u * (std::log(spec.max) - std::log(spec.min)))
                        : spec.min + u * (spec.max - spec.min);
    }
    v.front() = spec.min;
    v.back() = spec.max;
    return v;
}

AxisSpec default_temperature_axis() { return {0.01, 100.0, 201, true}; }

namespace {

// Runs fn(i) for i in [0, n). The exception of the lowest failing index is rethrown.
template <typename F>
void parallel_for(std::size_t n, unsigned workers, F&& fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = n;
    std::exception_ptr failure;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

ModelParams at_temperatures(ModelParams p, double t1, double t2) {
    p.t1 = t1;
    p.t2 = t2;
    return p;
}

CycleOutcome evaluate(const ModelParams& params, double p) {
    return classify(params, stroke_energetics(params, p));
}

}  // namespace

RegimeMap sweep_regimes(const ModelParams& params, double p, const std::vector<double>& t1_axis,
                        const std::vector<double>& t2_axis, unsigned workers) {
    if (t1_axis.empty() || t2_axis.empty()) throw std::invalid_argument("sweep_regimes: empty axis");
    validate(params);
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sweep_regimes: requires 0 <= P <= 1");
    for (double t : t1_axis) {
        if (!(t > 0)) throw std::invalid_argument("sweep_regimes: temperatures must be > 0");
    }
    for (double t : t2_axis) {
        if (!(t > 0)) throw std::invalid_argument("sweep_regimes: temperatures must be > 0");
    }

    RegimeMap map;
    map.t1_axis = t1_axis;
    map.t2_axis = t2_axis;
    map.params = params;
    map.p = p;
    map.cells.resize(t1_axis.size() * t2_axis.size());

    parallel_for(t1_axis.size(), workers, [&](std::size_t i1) {
        for (std::size_t i2 = 0; i2 < t2_axis.size(); ++i2) {
            const ModelParams q = at_temperatures(params, t1_axis[i1], t2_axis[i2]);
            const CycleOutcome o = evaluate(q, p);
            RegimeCell& c = map.cells[map.index(i1, i2)];
            c.t1 = q.t1;
            c.t2 = q.t2;
            c.regime = o.regime;
            c.rotation = o.rotation;
            c.w_cyc = o.w_cyc;
            c.q1 = o.energetics.q1;
            c.q2 = o.energetics.q2;
            c.eta = o.efficiency;
            c.first_law_residual = o.energetics.first_law_residual();
        }
    });
    return map;
}

std::vector<Region> connected_regions(const RegimeMap& map) {
    const std::size_t n1 = map.t1_axis.size();
    const std::size_t n2 = map.t2_axis.size();
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> label(map.cells.size(), none);
    std::vector<Region> regions;
    std::vector<std::size_t> stack;

    auto same = [&](std::size_t a, std::size_t b) {
        const auto& x = map.cells[a];
        const auto& y = map.cells[b];
        if (x.regime != y.regime) return false;
        return x.regime != Regime::Engine || x.rotation == y.rotation;
    };

    for (std::size_t seed = 0; seed < map.cells.size(); ++seed) {
        if (label[seed] != none) continue;
        Region r;
        r.regime = map.cells[seed].regime;
        r.rotation = map.cells[seed].rotation;
        r.min_i1 = r.min_i2 = none;
        label[seed] = regions.size();
        stack.assign(1, seed);
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            r.cells.push_back(k);
            const std::size_t i1 = k / n2;
            const std::size_t i2 = k % n2;
            r.min_i1 = std::min(r.min_i1, i1);
            r.max_i1 = std::max(r.max_i1, i1);
            r.min_i2 = std::min(r.min_i2, i2);
            r.max_i2 = std::max(r.max_i2, i2);
            auto visit = [&](std::size_t j) {
                if (label[j] == none && same(seed, j)) {
                    label[j] = regions.size();
                    stack.push_back(j);
                }
            };
            if (i1 > 0) visit(k - n2);
            if (i1 + 1 < n1) visit(k + n2);
            if (i2 > 0) visit(k - 1);
            if (i2 + 1 < n2) visit(k + 1);
        }
        std::sort(r.cells.begin(), r.cells.end());
        regions.push_back(std::move(r));
    }
    return regions;
}

std::vector<Region> engine_regions(const RegimeMap& map) {
    std::vector<Region> out;
    for (auto& r : connected_regions(map)) {
        if (r.regime == Regime::Engine) out.push_back(std::move(r));
    }
    return out;
}

std::vector<AdiabaticityPoint> adiabaticity_curve(const ModelParams& params,
                                                  const std::vector<double>& taus,
                                                  ScheduleKind kind, const IntegratorOptions& opts,
                                                  unsigned workers) {
    validate(params);
    std::vector<AdiabaticityPoint> out(taus.size());
    parallel_for(taus.size(), workers, [&](std::size_t i) {
        AdiabaticityPoint& pt = out[i];
        pt.tau = taus[i];
        if (!(taus[i] > 0)) {
            pt.error = "tau must be > 0";
            return;
        }
        ModelParams q = params;
        q.tau = taus[i];
        try {
            pt.p = adiabaticity(q, FieldSchedule::forward(q, kind), opts);
        } catch (const NumericalFailure& e) {
            pt.error = e.what();
        }
    });
    return out;
}

namespace {

ModelParams with_hot(const ModelParams& params, HotBath hot, double t) {
    ModelParams q = params;
    (hot == HotBath::Bath1 ? q.t1 : q.t2) = t;
    return q;
}

}  // namespace

std::vector<EfficiencySeries> efficiency_curve(const ModelParams& params, HotBath hot,
                                               const std::vector<double>& hot_axis,
                                               const std::vector<double>& p_list) {
    validate(params);
    std::vector<EfficiencySeries> out;
    out.reserve(p_list.size());
    for (double p : p_list) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("efficiency_curve: requires 0 <= P <= 1");
        EfficiencySeries s;
        s.p = p;
        s.temperatures = hot_axis;
        for (double t : hot_axis) {
            const CycleOutcome o = evaluate(with_hot(params, hot, t), p);
            s.regimes.push_back(o.regime);
            s.eta.push_back(o.efficiency);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::optional<EfficiencyPeak> max_efficiency(const ModelParams& params, HotBath hot,
                                             const std::vector<double>& hot_axis, double p) {
    validate(params);
    auto eta_at = [&](double t) {
        const auto e = evaluate(with_hot(params, hot, t), p).efficiency;
        return e ? *e : -1.0;
    };
    std::size_t best = hot_axis.size();
    double best_eta = -1.0;
    for (std::size_t i = 0; i < hot_axis.size(); ++i) {
        const double e = eta_at(hot_axis[i]);
        if (e > best_eta) {
            best_eta = e;
            best = i;
        }
    }
    if (best == hot_axis.size()) return std::nullopt;
    EfficiencyPeak peak{hot_axis[best], best_eta};
    const double a = hot_axis[best == 0 ? 0 : best - 1];
    const double b = hot_axis[std::min(best + 1, hot_axis.size() - 1)];
    const auto [t, e] = roots::golden_section_max(eta_at, a, b, 1e-12);
    if (e > peak.eta) peak = {t, e};
    return peak;
}

bool counter_rotating_condition(const ModelParams& params) {
    return params.jx * params.jy > params.h1 * params.h1;
}

std::string to_string(ThresholdKind k) {
    switch (k) {
        case ThresholdKind::Zero: return "zero";
        case ThresholdKind::Finite: return "finite";
        case ThresholdKind::Unbounded: return "unbounded";
    }
    return "unbounded";
}

namespace {

// Low-temperature limit of g(beta eps4, y): 1 below, 1/2 at, 0 above y = 1.
double cold_limit(double y) {
    if (y < 1.0) return 1.0;
    return y == 1.0 ? 0.5 : 0.0;
}

}  // namespace

ThresholdResult find_threshold_T1(const ModelParams& params, double p) {
    validate(params);
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("find_threshold_T1: requires 0 <= P <= 1");
    const double e1 = working_gap(params, params.h1);
    const double e2 = working_gap(params, params.h2);
    const double e3 = params.jx + params.jy;
    if (e3 > e1) {
        throw std::invalid_argument(
            "find_threshold_T1: requires weak coupling eps3 <= eps4(h1), i.e. Jx*Jy <= h1^2");
    }
    ThresholdResult r;
    if (p <= p_min(params)) {
        r.kind = ThresholdKind::Unbounded;
        return r;
    }
    r.target = c_of_p(params, p) * cold_limit(e3 / e2);
    if (r.target <= 0.0) {
        r.kind = ThresholdKind::Unbounded;
        return r;
    }
    if (r.target >= cold_limit(e3 / e1)) {
        r.kind = ThresholdKind::Zero;
        return r;
    }
    auto excess = [&](double t1) { return work_function(1.0 / t1, e1, e3) - r.target; };
    const roots::Bracket b = excess(1.0) > 0.0
                                 ? roots::expand_up([&](double t) { return excess(t) <= 0.0; }, 1.0)
                                 : roots::expand_down([&](double t) { return excess(t) > 0.0; }, 1.0);
    r.kind = ThresholdKind::Finite;
    r.t1_0 = roots::bisect(excess, b.lo, b.hi);
    return r;
}

namespace {

double t2_peak(const ModelParams& params, double p, const std::vector<double>& t2_axis) {
    auto extracted = [&](double t2) {
        ModelParams q = params;
        q.t2 = t2;
        return -stroke_energetics(q, p).w21();
    };
    std::size_t best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t2_axis.size(); ++i) {
        const double v = extracted(t2_axis[i]);
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    double a = 0.0;
    double b = 0.0;
    if (best == 0 || best + 1 == t2_axis.size()) {
        const double factor = best == 0 ? 0.5 : 2.0;
        double x = t2_axis[best];
        int steps = 0;
        while (extracted(x * factor) > extracted(x)) {
            x *= factor;
            if (++steps > 60) throw NumericalFailure("find_temperature_gap: T2 peak not bracketed");
        }
        a = x / 2.0;
        b = x * 2.0;
    } else {
        a = t2_axis[best - 1];
        b = t2_axis[best + 1];
    }
    return roots::golden_section_max(extracted, a, b, 1e-12).first;
}

struct Endpoints {
    double t1_a;
    double t1_b;
};

// Roots of W_cyc(T1, T2_0) on either side of T2_0.
Endpoints gap_endpoints(const ModelParams& params, double p, double t2_0,
                        const std::vector<double>& t1_axis) {
    auto w = [&](double t1) {
        ModelParams q = params;
        q.t1 = t1;
        q.t2 = t2_0;
        return stroke_energetics(q, p).w_cyc;
    };
    if (!(w(t2_0) > 0.0)) throw NumericalFailure("W_cyc is not positive at T1 = T2_0");

    // Below T2_0: descend the grid for the first engine point.
    double pos = t2_0;
    std::optional<double> neg;
    for (auto it = t1_axis.rbegin(); it != t1_axis.rend(); ++it) {
        if (*it >= t2_0) continue;
        if (w(*it) < 0.0) {
            neg = *it;
            break;
        }
        pos = *it;
    }
    if (!neg) {
        const auto br = roots::expand_down([&](double t) { return w(t) < 0.0; }, pos);
        neg = br.lo;
        pos = br.hi;
    }
    const double t1_a = roots::bisect(w, *neg, pos);

    pos = t2_0;
    neg.reset();
    for (double t : t1_axis) {
        if (t <= t2_0) continue;
        if (w(t) < 0.0) {
            neg = t;
            break;
        }
        pos = t;
    }
    if (!neg) {
        const auto br = roots::expand_up([&](double t) { return w(t) < 0.0; }, pos);
        neg = br.hi;
        pos = br.lo;
    }
    const double t1_b = roots::bisect(w, pos, *neg);
    return {t1_a, t1_b};
}

}  // namespace

GapReport find_temperature_gap(const ModelParams& params, double p,
                               const std::vector<double>& t2_axis,
                               const std::vector<double>& t1_axis,
                               const std::vector<double>& widen_p_list) {
    validate(params);
    if (!counter_rotating_condition(params)) {
        throw std::invalid_argument(
            "find_temperature_gap: requires strong coupling Jx*Jy > h1^2");
    }
    auto check_p = [&](double q) {
        if (!(q > p_min(params) && q <= 1.0)) {
            throw std::invalid_argument("find_temperature_gap: requires P_min < P <= 1 (P_min=" +
                                        detail::to_text(p_min(params)) +
                                        ", got P=" + detail::to_text(q) + ")");
        }
    };
    check_p(p);
    for (double q : widen_p_list) check_p(q);
    if (t2_axis.size() < 2 || t1_axis.size() < 2) {
        throw std::invalid_argument("find_temperature_gap: axes need at least 2 points");
    }

    GapReport rep;
    try {
        rep.t2_0 = t2_peak(params, p, t2_axis);
        const Endpoints e = gap_endpoints(params, p, rep.t2_0, t1_axis);
        rep.t1_a = e.t1_a;
        rep.t1_b = e.t1_b;
        for (double q : widen_p_list) {
            const Endpoints eq = gap_endpoints(params, q, rep.t2_0, t1_axis);
            rep.widened_vs_p.push_back({q, eq.t1_a, eq.t1_b});
        }
    } catch (const NumericalFailure& ex) {
        std::ostringstream os;
        os.precision(6);
        os << ex.what() << " (T1 grid [" << t1_axis.front() << ", " << t1_axis.back() << "] x "
           << t1_axis.size() << ", T2 grid [" << t2_axis.front() << ", " << t2_axis.back()
           << "] x " << t2_axis.size() << ")";
        rep.diagnostics = os.str();
        return rep;
    }
    rep.found = true;

    GapCertificate& cert = rep.certificate;
    cert.t2_samples = t2_axis.size();
    cert.min_w_cyc = std::numeric_limits<double>::infinity();
    cert.verified = true;
    for (double t1 : t1_axis) {
        if (!(t1 > rep.t1_a && t1 < rep.t1_b)) continue;
        ++cert.t1_samples;
        for (double t2 : t2_axis) {
            const double w = stroke_energetics(at_temperatures(params, t1, t2), p).w_cyc;
            cert.min_w_cyc = std::min(cert.min_w_cyc, w);
            if (!(w > 0.0)) cert.verified = false;
        }
    }
    if (cert.t1_samples == 0) cert.min_w_cyc = 0.0;
    return rep;
}

std::vector<HighEfficiencyRegion> high_efficiency_region(const ModelParams& params,
                                                         const std::vector<double>& p_list,
                                                         const std::vector<double>& t1_axis,
                                                         const std::vector<double>& t2_axis,
                                                         unsigned workers) {
    const double eta_otto = 1.0 - params.h2 / params.h1;
    std::vector<HighEfficiencyRegion> out;
    for (double p : p_list) {
        const RegimeMap map = sweep_regimes(params, p, t1_axis, t2_axis, workers);
        HighEfficiencyRegion r;
        r.p = p;
        for (std::size_t k = 0; k < map.cells.size(); ++k) {
            if (map.cells[k].eta && *map.cells[k].eta > eta_otto) r.cells.push_back(k);
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace xyotto
