// report.cpp - Command execution and CSV / JSON emission

#include "xyotto/report.hpp"

#include "xyotto/errors.hpp"
#include "xyotto/verify.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

namespace xyotto {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double or_nan(const std::optional<double>& v) { return v ? *v : kNaN; }

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string csv_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_number(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return csv_escape(v);
        },
        c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) return nullptr;
            }
            return v;
        },
        c);
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.11e}", v);
}

void write_csv(std::ostream& os, const Table& t, const nlohmann::ordered_json& header) {
    for (const auto& [key, value] : header.items()) os << "# " << key << ": " << value.dump() << '\n';
    for (const auto& [key, value] : t.metadata.items()) os << "# " << key << ": " << value.dump() << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& t, const nlohmann::ordered_json& header) {
    nlohmann::ordered_json doc;
    doc["metadata"] = header;
    for (const auto& [key, value] : t.metadata.items()) doc["metadata"][key] = value;
    auto& records = doc["records"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r;
        for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = json_cell(row[i]);
        records.push_back(std::move(r));
    }
    os << doc.dump(2) << '\n';
}

namespace {

struct Outcome {
    Table table;
    int code{kExitOk};
    std::string failure;
};

std::string describe_point(const ModelParams& p, const RunConfig& cfg) {
    return fmt::format("Jx={} Jy={} h1={} h2={} tau={} schedule={}", p.jx, p.jy, p.h1, p.h2,
                       p.tau, to_string(cfg.schedule));
}

// P from the explicit value or from the dynamics along the configured schedule.
double resolve_p(const RunConfig& cfg, nlohmann::ordered_json& meta) {
    if (cfg.p) {
        meta["p_source"] = "explicit";
        meta["p"] = *cfg.p;
        return *cfg.p;
    }
    const ModelParams m = cfg.model();
    const double p = adiabaticity(m, FieldSchedule::forward(m, cfg.schedule));
    meta["p_source"] = "dynamics";
    meta["p"] = p;
    return p;
}

Outcome run_cycle_command(const RunConfig& cfg) {
    Outcome o;
    const ModelParams m = cfg.model();
    CycleOutcome c;
    if (cfg.p) {
        c = run_cycle(m, *cfg.p);
    } else {
        c = run_cycle(m, FieldSchedule::forward(m, cfg.schedule));
    }
    const StrokeEnergetics& e = c.energetics;
    o.table.columns = {"p",      "regime", "eta",    "w_cyc",  "q1",     "q2",
                       "w12_ad", "w12_na", "w21_ad", "w21_na", "q1_ad",  "q1_na",
                       "q2_ad",  "q2_na",  "e1",     "e2",     "e3",     "e4",
                       "first_law_residual", "oracle_deviation"};
    o.table.rows.push_back({e.p, regime_label(c.regime, c.rotation), or_nan(c.efficiency), e.w_cyc,
                            e.q1, e.q2, e.w12_ad, e.w12_na, e.w21_ad, e.w21_na, e.q1_ad, e.q1_na,
                            e.q2_ad, e.q2_na, e.corners.e1, e.corners.e2, e.corners.e3,
                            e.corners.e4, e.first_law_residual(), or_nan(c.oracle_deviation)});
    o.table.metadata["p_source"] = cfg.p ? "explicit" : "dynamics";
    return o;
}

Outcome run_sweep_command(const RunConfig& cfg) {
    Outcome o;
    const double p = resolve_p(cfg, o.table.metadata);
    const RegimeMap map = sweep_regimes(cfg.model(), p, make_axis(*cfg.grid_t1),
                                        make_axis(*cfg.grid_t2), cfg.workers);
    o.table.columns = {"t1", "t2", "regime", "w_cyc", "q1", "q2", "eta"};
    double worst = 0.0;
    for (const RegimeCell& c : map.cells) {
        o.table.rows.push_back({c.t1, c.t2, regime_label(c.regime, c.rotation), c.w_cyc, c.q1, c.q2,
                                or_nan(c.eta)});
        worst = std::max(worst, std::abs(c.first_law_residual));
    }
    o.table.metadata["max_first_law_residual"] = worst;
    auto regions = nlohmann::ordered_json::array();
    for (const Region& r : engine_regions(map)) {
        regions.push_back({{"rotation", to_string(r.rotation)},
                           {"cells", r.cells.size()},
                           {"t1_min", map.t1_axis[r.min_i1]},
                           {"t1_max", map.t1_axis[r.max_i1]},
                           {"t2_min", map.t2_axis[r.min_i2]},
                           {"t2_max", map.t2_axis[r.max_i2]}});
    }
    o.table.metadata["engine_regions"] = regions;
    return o;
}

Outcome run_adiabaticity_command(const RunConfig& cfg) {
    Outcome o;
    const std::vector<double> taus = cfg.grid_tau ? make_axis(*cfg.grid_tau) : std::vector<double>{*cfg.tau};
    const ModelParams m = cfg.model();
    const auto curve = adiabaticity_curve(m, taus, cfg.schedule, {}, cfg.workers);
    o.table.columns = {"tau", "p", "error"};
    o.table.metadata["quench_p"] = quench_adiabaticity(m);
    for (const auto& pt : curve) {
        o.table.rows.push_back({pt.tau, or_nan(pt.p), pt.error});
        if (!pt.error.empty() && o.code == kExitOk) {
            o.code = kExitNumerical;
            ModelParams q = m;
            q.tau = pt.tau;
            o.failure = pt.error + " at " + describe_point(q, cfg);
        }
    }
    return o;
}

Outcome run_efficiency_command(const RunConfig& cfg) {
    Outcome o;
    const double p = resolve_p(cfg, o.table.metadata);
    const HotBath hot = cfg.grid_t1 ? HotBath::Bath1 : HotBath::Bath2;
    const std::vector<double> axis = make_axis(cfg.grid_t1 ? *cfg.grid_t1 : *cfg.grid_t2);
    std::vector<double> ps{p};
    ps.insert(ps.end(), cfg.p_list.begin(), cfg.p_list.end());
    const ModelParams m = cfg.model();
    const double eta_otto = 1.0 - m.h2 / m.h1;
    o.table.metadata["hot_bath"] = hot == HotBath::Bath1 ? "t1" : "t2";
    o.table.metadata["eta_otto"] = eta_otto;
    o.table.columns = {"p", "t1", "t2", "regime", "eta"};
    auto peaks = nlohmann::ordered_json::array();
    for (const EfficiencySeries& s : efficiency_curve(m, hot, axis, ps)) {
        long long above = 0;
        for (std::size_t i = 0; i < s.temperatures.size(); ++i) {
            const double t1 = hot == HotBath::Bath1 ? s.temperatures[i] : m.t1;
            const double t2 = hot == HotBath::Bath2 ? s.temperatures[i] : m.t2;
            const Rotation rot = t1 > t2 ? Rotation::Regular : Rotation::CounterRotating;
            o.table.rows.push_back({s.p, t1, t2, regime_label(s.regimes[i], rot), or_nan(s.eta[i])});
            if (s.eta[i] && *s.eta[i] > eta_otto) ++above;
        }
        const auto peak = max_efficiency(m, hot, axis, s.p);
        nlohmann::ordered_json entry{{"p", s.p}, {"points_above_eta_otto", above}};
        entry["eta_max"] = peak ? nlohmann::ordered_json(peak->eta) : nlohmann::ordered_json(nullptr);
        entry["t_at_eta_max"] =
            peak ? nlohmann::ordered_json(peak->temperature) : nlohmann::ordered_json(nullptr);
        peaks.push_back(std::move(entry));
    }
    o.table.metadata["peaks"] = peaks;
    return o;
}

Outcome run_gap_command(const RunConfig& cfg) {
    Outcome o;
    const double p = resolve_p(cfg, o.table.metadata);
    const GapReport g = find_temperature_gap(cfg.model(), p, make_axis(*cfg.grid_t2),
                                             make_axis(*cfg.grid_t1), cfg.p_list);
    auto& meta = o.table.metadata;
    meta["found"] = g.found;
    if (!g.found) {
        meta["diagnostics"] = g.diagnostics;
        o.code = kExitNumerical;
        o.failure = "temperature gap not found: " + g.diagnostics;
    }
    meta["t2_0"] = g.t2_0;
    meta["t1_a"] = g.t1_a;
    meta["t1_b"] = g.t1_b;
    meta["certificate"] = {{"t2_samples", g.certificate.t2_samples},
                           {"t1_samples", g.certificate.t1_samples},
                           {"min_w_cyc", g.certificate.min_w_cyc},
                           {"verified", g.certificate.verified},
                           {"note", "W_cyc > 0 checked on grid T2 values for grid T1 inside the gap; "
                                    "a finite certificate, not a proof over all T2"}};
    o.table.columns = {"p", "t2_0", "t1_a", "t1_b", "width"};
    if (g.found) {
        o.table.rows.push_back({p, g.t2_0, g.t1_a, g.t1_b, g.width()});
        for (const GapWidth& w : g.widened_vs_p) {
            o.table.rows.push_back({w.p, g.t2_0, w.t1_a, w.t1_b, w.width()});
        }
    }
    return o;
}

Outcome run_verify_command(const RunConfig& cfg, std::ostream& diag) {
    Outcome o;
    VerifyOptions opts;
    opts.seed = cfg.seed;
    o.table.columns = {"module", "check", "status", "detail"};
    long long failed = 0;
    for (const CheckResult& c : run_verify_suite(opts)) {
        diag << (c.passed ? "PASS " : "FAIL ") << c.module << ": " << c.name << " (" << c.detail << ")\n";
        o.table.rows.push_back({c.module, c.name, std::string(c.passed ? "pass" : "fail"), c.detail});
        if (!c.passed) ++failed;
    }
    o.table.metadata["checks"] = static_cast<long long>(o.table.rows.size());
    o.table.metadata["failed"] = failed;
    if (failed > 0) {
        o.code = kExitVerify;
        o.failure = fmt::format("{} verify check(s) failed", failed);
    }
    return o;
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        switch (cfg.command) {
            case Command::Cycle: o = run_cycle_command(cfg); break;
            case Command::Sweep: o = run_sweep_command(cfg); break;
            case Command::Adiabaticity: o = run_adiabaticity_command(cfg); break;
            case Command::Efficiency: o = run_efficiency_command(cfg); break;
            case Command::Gap: o = run_gap_command(cfg); break;
            case Command::Verify: o = run_verify_command(cfg, diag); break;
        }
    } catch (const NumericalFailure& e) {
        diag << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ConfigError& e) {
        diag << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        diag << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    nlohmann::ordered_json header;
    header["tool"] = kToolName;
    header["version"] = kToolVersion;
    header["config"] = to_json(cfg);
    if (cfg.wall_time) header["wall_time_s"] = wall;

    std::ofstream file;
    if (!cfg.out.empty()) {
        file.open(cfg.out);
        if (!file) {
            diag << "config error: out: cannot open '" << cfg.out << "' for writing\n";
            return kExitConfig;
        }
    }
    std::ostream& dest = cfg.out.empty() ? out : file;
    if (cfg.format == Format::Csv) {
        write_csv(dest, o.table, header);
    } else {
        write_json(dest, o.table, header);
    }
    dest.flush();
    diag << fmt::format("{}: {} record(s) in {:.3f} s\n", to_string(cfg.command), o.table.rows.size(), wall);
    if (o.code != kExitOk) diag << (o.code == kExitVerify ? "verify failure: " : "numerical failure: ")
                                << o.failure << '\n';
    return o.code;
}

}  // namespace xyotto
