// cycle.hpp - Four-stroke Otto cycle energetics, regime classification and efficiency
//
// Sign convention: W is work injected into the working substance, Q_k heat drawn from
// bath k. W_cyc = W12 + W21 = -(Q1 + Q2); W_cyc < 0 is a heat engine.

#pragma once

#include "xyotto/dynamics.hpp"
#include "xyotto/model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace xyotto {

struct CornerEnergies {
    double e1{0};  // thermal at (H1, T1)
    double e2{0};  // after compression
    double e3{0};  // thermal at (H2, T2)
    double e4{0};  // after expansion
};

// Doubly stochastic transition matrix of a stroke with adiabaticity P.
Eigen::Matrix4d transition_matrix(double p);

CornerEnergies corner_energies(const ModelParams& params, double p);

struct StrokeEnergetics {
    double p{1};
    double w12_ad{0}, w12_na{0};
    double w21_ad{0}, w21_na{0};
    double q1_ad{0}, q1_na{0};
    double q2_ad{0}, q2_na{0};
    // Totals, evaluated without cancelling near-equal work functions.
    double w_cyc{0}, q1{0}, q2{0};
    CornerEnergies corners;
    // Sum of |terms| entering w_cyc, q1, q2; roundoff is relative to these.
    double w_scale{0}, q1_scale{0}, q2_scale{0};

    double w12() const { return w12_ad + w12_na; }
    double w21() const { return w21_ad + w21_na; }
    double first_law_residual() const { return w_cyc + q1 + q2; }
};

StrokeEnergetics stroke_energetics(const ModelParams& params, double p);

enum class Regime { Engine, Refrigerator, Accelerator, Heater, Degenerate };
enum class Rotation { Regular, CounterRotating };

std::string to_string(Regime r);
std::string to_string(Rotation r);
// Lowercase label, with ":regular" or ":counter-rotating" appended for engines.
std::string regime_label(Regime r, Rotation rot);

// Quantities within kSignTolerance * scale of zero have no sign.
inline constexpr double kSignTolerance = 1e-12;

struct CycleOutcome {
    StrokeEnergetics energetics;
    double w_cyc{0};
    Regime regime{Regime::Degenerate};
    Rotation rotation{Rotation::Regular};
    std::optional<double> efficiency;
    std::optional<double> oracle_deviation;  // set when run from a schedule
};

// eta = -W_cyc / Q_hot for engines, empty otherwise.
std::optional<double> efficiency(Regime regime, Rotation rotation, double w_cyc, double q1,
                                 double q2);

CycleOutcome classify(const ModelParams& params, const StrokeEnergetics& e);

// Corner energies from full density-matrix propagation with numerically diagonalised
// Gibbs states; u is the compression unitary, v the expansion unitary.
CornerEnergies oracle_corner_energies(const ModelParams& params, const Eigen::Matrix4cd& u,
                                      const Eigen::Matrix4cd& v);

// Explicit adiabaticity, 0 <= p <= 1.
CycleOutcome run_cycle(const ModelParams& params, double p);

struct CycleRunOptions {
    IntegratorOptions integrator{};
    OracleOptions oracle{};
    double cross_check_tol{1e-8};  // relative to max(1, eps4(h1), eps3)
};

// P from the amplitude equations; energetics cross-checked against the oracle.
CycleOutcome run_cycle(const ModelParams& params, const FieldSchedule& schedule,
                       const CycleRunOptions& opts = {});

}  // namespace xyotto
