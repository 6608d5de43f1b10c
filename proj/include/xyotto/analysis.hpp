// analysis.hpp - Regime maps, efficiency and adiabaticity curves, threshold and gap searches

#pragma once

#include "xyotto/cycle.hpp"
#include "xyotto/dynamics.hpp"
#include "xyotto/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace xyotto {

struct AxisSpec {
    double min{0.01};
    double max{100.0};
    std::size_t count{201};
    bool log{true};
};

// Throws std::invalid_argument unless count >= 2, min < max (and min > 0 for log axes).
std::vector<double> make_axis(const AxisSpec& spec);

AxisSpec default_temperature_axis();

// ------------------------------- Regime maps --------------------------------

struct RegimeCell {
    double t1{0};
    double t2{0};
    Regime regime{Regime::Degenerate};
    Rotation rotation{Rotation::Regular};
    double w_cyc{0};
    double q1{0};
    double q2{0};
    std::optional<double> eta;
    double first_law_residual{0};
};

struct RegimeMap {
    std::vector<double> t1_axis;
    std::vector<double> t2_axis;
    std::vector<RegimeCell> cells;  // row-major, index = i1 * t2_axis.size() + i2
    ModelParams params;             // t1, t2 ignored
    double p{1};

    std::size_t index(std::size_t i1, std::size_t i2) const { return i1 * t2_axis.size() + i2; }
    const RegimeCell& at(std::size_t i1, std::size_t i2) const { return cells[index(i1, i2)]; }
};

// workers = 0 uses the hardware concurrency. Output does not depend on the worker count.
RegimeMap sweep_regimes(const ModelParams& params, double p, const std::vector<double>& t1_axis,
                        const std::vector<double>& t2_axis, unsigned workers = 0);

struct Region {
    Regime regime{Regime::Degenerate};
    Rotation rotation{Rotation::Regular};
    std::vector<std::size_t> cells;  // ascending cell indices
    std::size_t min_i1{0}, max_i1{0}, min_i2{0}, max_i2{0};
};

// 4-connected components of cells sharing the same regime and rotation.
std::vector<Region> connected_regions(const RegimeMap& map);
std::vector<Region> engine_regions(const RegimeMap& map);

// --------------------------------- Curves -----------------------------------

struct AdiabaticityPoint {
    double tau{0};
    std::optional<double> p;
    std::string error;  // set when the integrator failed at this point
};

std::vector<AdiabaticityPoint> adiabaticity_curve(const ModelParams& params,
                                                  const std::vector<double>& taus,
                                                  ScheduleKind kind = ScheduleKind::SqrtLinear,
                                                  const IntegratorOptions& opts = {},
                                                  unsigned workers = 0);

enum class HotBath { Bath1, Bath2 };

struct EfficiencySeries {
    double p{1};
    std::vector<double> temperatures;  // of the varied (hot) bath
    std::vector<Regime> regimes;
    std::vector<std::optional<double>> eta;
};

// Varies T1 (Bath1) or T2 (Bath2) over hot_axis; the other temperature is taken from params.
std::vector<EfficiencySeries> efficiency_curve(const ModelParams& params, HotBath hot,
                                               const std::vector<double>& hot_axis,
                                               const std::vector<double>& p_list);

struct EfficiencyPeak {
    double temperature{0};
    double eta{0};
};

// Best engine efficiency over hot_axis, refined by golden section around the best grid point.
std::optional<EfficiencyPeak> max_efficiency(const ModelParams& params, HotBath hot,
                                             const std::vector<double>& hot_axis, double p);

// ------------------------------ Appendix checks -----------------------------

bool counter_rotating_condition(const ModelParams& params);

enum class ThresholdKind { Zero, Finite, Unbounded };

struct ThresholdResult {
    ThresholdKind kind{ThresholdKind::Zero};
    double t1_0{0};  // meaningful for Finite
    double target{0};  // c(P) times the T2 -> 0 limit of f(2)
};

std::string to_string(ThresholdKind k);

// Lowest T1 above which an engine exists as T2 -> 0. Requires weak coupling.
ThresholdResult find_threshold_T1(const ModelParams& params, double p);

struct GapCertificate {
    std::size_t t2_samples{0};
    std::size_t t1_samples{0};  // grid T1 strictly inside the gap
    double min_w_cyc{0};
    bool verified{false};
};

struct GapWidth {
    double p{1};
    double t1_a{0};
    double t1_b{0};
    double width() const { return t1_b - t1_a; }
};

struct GapReport {
    bool found{false};
    double t2_0{0};
    double t1_a{0};
    double t1_b{0};
    GapCertificate certificate;
    std::vector<GapWidth> widened_vs_p;
    std::string diagnostics;  // why the gap was not found

    double width() const { return t1_b - t1_a; }
};

// Requires strong coupling and P > P_min. Endpoints are roots of W_cyc(T1, T2_0);
// positivity is certified on every grid T2 for grid T1 inside the gap.
GapReport find_temperature_gap(const ModelParams& params, double p,
                               const std::vector<double>& t2_axis,
                               const std::vector<double>& t1_axis,
                               const std::vector<double>& widen_p_list = {});

struct HighEfficiencyRegion {
    double p{1};
    std::vector<std::size_t> cells;  // engine cells with eta > 1 - h2/h1
};

std::vector<HighEfficiencyRegion> high_efficiency_region(const ModelParams& params,
                                                         const std::vector<double>& p_list,
                                                         const std::vector<double>& t1_axis,
                                                         const std::vector<double>& t2_axis,
                                                         unsigned workers = 0);

}  // namespace xyotto
