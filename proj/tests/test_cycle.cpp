#include "oracles.hpp"

#include "xyotto/cycle.hpp"

#include <doctest.h>

#include <cmath>

using namespace xyotto;

namespace {

ModelParams make(double jx, double jy, double t1, double t2, double h1 = 4, double h2 = 1) {
    ModelParams p;
    p.jx = jx;
    p.jy = jy;
    p.h1 = h1;
    p.h2 = h2;
    p.t1 = t1;
    p.t2 = t2;
    return p;
}

// A unitary in the product basis whose working-level transition probability is P.
Eigen::Matrix4cd unitary_with(const ModelParams& p, double P, double h_from, double h_to) {
    const Eigen::Matrix4d a = eigenvectors(p, h_from);
    const Eigen::Matrix4d b = eigenvectors(p, h_to);
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    const double c = std::sqrt(P), s = std::sqrt(1 - P);
    m(0, 0) = c;
    m(3, 3) = std::complex<double>(0, 1) * c;
    m(0, 3) = s;
    m(3, 0) = std::complex<double>(0, 1) * s;
    m(1, 1) = std::complex<double>(0, 1);
    m(2, 2) = -1;
    return b.cast<std::complex<double>>() * m * a.transpose().cast<std::complex<double>>();
}

struct Corners {
    double e1, e2, e3, e4;
};

// Density-matrix route with Gibbs states from the matrix exponential.
Corners density_matrix_corners(const ModelParams& p, double P) {
    const Eigen::Matrix4cd h1 = oracle::pauli_hamiltonian(p.jx, p.jy, p.h1);
    const Eigen::Matrix4cd h2 = oracle::pauli_hamiltonian(p.jx, p.jy, p.h2);
    const Eigen::Matrix4cd r1 = oracle::gibbs(p.jx, p.jy, p.h1, 1 / p.t1);
    const Eigen::Matrix4cd r3 = oracle::gibbs(p.jx, p.jy, p.h2, 1 / p.t2);
    const Eigen::Matrix4cd u = unitary_with(p, P, p.h1, p.h2);
    const Eigen::Matrix4cd v = unitary_with(p, P, p.h2, p.h1);
    return {(h1 * r1).trace().real(), (h2 * u * r1 * u.adjoint()).trace().real(),
            (h2 * r3).trace().real(), (h1 * v * r3 * v.adjoint()).trace().real()};
}

}  // namespace

TEST_CASE("transition matrix is doubly stochastic") {
    for (double P : {0.0, 0.3, 0.5, 0.97, 1.0}) {
        const Eigen::Matrix4d t = transition_matrix(P);
        CHECK((t.rowwise().sum() - Eigen::Vector4d::Ones()).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((t.colwise().sum() - Eigen::RowVector4d::Ones()).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("corner energies") {
    SUBCASE("adiabatic strokes keep populations") {
        const ModelParams p = make(10, 2, 3, 0.5);
        const auto c = corner_energies(p, 1.0);
        const auto s1 = spectrum(p, p.h1), s2 = spectrum(p, p.h2);
        const auto q1 = thermal_populations(s1, p.beta1());
        const auto q3 = thermal_populations(s2, p.beta2());
        CHECK(c.e2 == doctest::Approx(s2.levels().dot(q1.vector())));
        CHECK(c.e4 == doctest::Approx(s1.levels().dot(q3.vector())));
    }
    SUBCASE("cold weak-coupling start") {
        const ModelParams p = make(0.01, 2, 1e-3, 1);
        for (double P : {0.6, 0.9, 1.0}) {
            const auto c = corner_energies(p, P);
            CHECK(c.e2 == doctest::Approx((1 - 2 * P) * working_gap(p, p.h2)).epsilon(1e-12));
        }
    }
    SUBCASE("match the density-matrix construction on random draws") {
        oracle::Gen gen(31);
        for (int k = 0; k < 300; ++k) {
            ModelParams p = gen.params();
            const double P = gen.uniform(0.5, 1.0);
            const auto c = corner_energies(p, P);
            const auto r = density_matrix_corners(p, P);
            const double scale = std::max({1.0, working_gap(p, p.h1), p.jx + p.jy});
            REQUIRE(std::abs(c.e1 - r.e1) < 1e-10 * scale);
            REQUIRE(std::abs(c.e2 - r.e2) < 1e-10 * scale);
            REQUIRE(std::abs(c.e3 - r.e3) < 1e-10 * scale);
            REQUIRE(std::abs(c.e4 - r.e4) < 1e-10 * scale);
        }
    }
    SUBCASE("oracle corners with the constructed unitaries") {
        const ModelParams p = make(10, 2.6, 0.7, 2.0);
        const auto c = corner_energies(p, 0.96);
        const auto o = oracle_corner_energies(p, unitary_with(p, 0.96, p.h1, p.h2),
                                              unitary_with(p, 0.96, p.h2, p.h1));
        CHECK(o.e1 == doctest::Approx(c.e1).epsilon(1e-12));
        CHECK(o.e2 == doctest::Approx(c.e2).epsilon(1e-12));
        CHECK(o.e3 == doctest::Approx(c.e3).epsilon(1e-12));
        CHECK(o.e4 == doctest::Approx(c.e4).epsilon(1e-12));
    }
}

TEST_CASE("stroke energetics agree with corner differences") {
    oracle::Gen gen(32);
    for (int k = 0; k < 1000; ++k) {
        const ModelParams p = gen.params();
        const double P = gen.uniform(0.5, 1.0);
        const auto e = stroke_energetics(p, P);
        const auto& c = e.corners;
        const double scale = std::max({1.0, working_gap(p, p.h1), p.jx + p.jy});
        REQUIRE(std::abs(e.w12() - (c.e2 - c.e1)) < 1e-10 * scale);
        REQUIRE(std::abs(e.w21() - (c.e4 - c.e3)) < 1e-10 * scale);
        REQUIRE(std::abs(e.q1 - (c.e1 - c.e4)) < 1e-10 * scale);
        REQUIRE(std::abs(e.q2 - (c.e3 - c.e2)) < 1e-10 * scale);
        REQUIRE(std::abs(e.first_law_residual()) < 1e-12 * scale);
        REQUIRE(e.w12_na >= 0);
        REQUIRE(e.w21_na >= 0);
        REQUIRE(e.w12_ad >= 0);
        REQUIRE(e.w21_ad <= 0);
    }
}

TEST_CASE("regime classification examples") {
    SUBCASE("weak coupling, hot bath 1: regular engine") {
        const auto o = run_cycle(make(0.01, 2, 2, 1e-3), 1.0);
        CHECK(o.regime == Regime::Engine);
        CHECK(o.rotation == Rotation::Regular);
        CHECK(regime_label(o.regime, o.rotation) == "engine:regular");
        REQUIRE(o.efficiency.has_value());
        CHECK(*o.efficiency > 0);
        CHECK(*o.efficiency < 1);
    }
    SUBCASE("strong coupling, cold bath 1: counter-rotating engine") {
        const auto o = run_cycle(make(10, 2.6, 1e-3, 2.0), 1.0);
        CHECK(o.regime == Regime::Engine);
        CHECK(o.rotation == Rotation::CounterRotating);
        CHECK(regime_label(o.regime, o.rotation) == "engine:counter-rotating");
    }
    SUBCASE("sudden stroke at nearly equal temperatures heats both baths") {
        const auto o = run_cycle(make(10, 2, 1, 1.1), 0.5);
        CHECK(o.regime == Regime::Heater);
        CHECK_FALSE(o.efficiency.has_value());
        CHECK(o.w_cyc > 0);
    }
    SUBCASE("equal temperatures at P=1 are degenerate") {
        const auto o = run_cycle(make(10, 2, 1.3, 1.3), 1.0);
        CHECK(o.regime == Regime::Degenerate);
    }
    SUBCASE("regime labels") {
        CHECK(to_string(Regime::Refrigerator) == "refrigerator");
        CHECK(to_string(Regime::Accelerator) == "accelerator");
        CHECK(regime_label(Regime::Heater, Rotation::Regular) == "heater");
    }
    SUBCASE("invalid adiabaticity") {
        CHECK_THROWS_AS(run_cycle(make(1, 1, 1, 2), 1.2), std::invalid_argument);
        CHECK_THROWS_AS(run_cycle(make(1, 1, 1, 2), -0.1), std::invalid_argument);
    }
}

TEST_CASE("uncoupled limit recovers the Otto efficiency") {
    const auto o = run_cycle(make(1e-9, 1e-9, 10, 0.1), 1.0);
    REQUIRE(o.regime == Regime::Engine);
    CHECK(*o.efficiency == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("no engine at or below P_min") {
    oracle::Gen gen(33);
    for (int k = 0; k < 2000; ++k) {
        const ModelParams p = gen.params();
        const double P = gen.uniform(0.5, p_min(p));
        REQUIRE(run_cycle(p, P).regime != Regime::Engine);
    }
}

TEST_CASE("classification is consistent with signs") {
    oracle::Gen gen(34);
    for (int k = 0; k < 2000; ++k) {
        const ModelParams p = gen.params();
        const double P = gen.uniform(0.5, 1.0);
        const auto o = run_cycle(p, P);
        const auto& e = o.energetics;
        if (o.regime == Regime::Engine) {
            REQUIRE(e.w_cyc < 0);
            const double q_hot = o.rotation == Rotation::Regular ? e.q1 : e.q2;
            REQUIRE(q_hot > 0);
            REQUIRE(*o.efficiency == doctest::Approx(-e.w_cyc / q_hot));
            REQUIRE(*o.efficiency <= 1.0);
            // Engines never beat Carnot between the actual baths.
            const double t_hot = std::max(p.t1, p.t2), t_cold = std::min(p.t1, p.t2);
            REQUIRE(*o.efficiency <= 1 - t_cold / t_hot + 1e-9);
        } else {
            REQUIRE_FALSE(o.efficiency.has_value());
        }
        if (o.regime == Regime::Heater) REQUIRE(e.w_cyc > 0);
    }
}

TEST_CASE("schedule-driven cycle matches the explicit-P cycle") {
    ModelParams p = make(10, 2, 0.8, 0.3);
    p.tau = 0.5;
    const FieldSchedule s = FieldSchedule::forward(p);
    const auto a = run_cycle(p, s);
    const auto b = run_cycle(p, adiabaticity(p, s));
    CHECK(a.energetics.w_cyc == doctest::Approx(b.energetics.w_cyc).epsilon(1e-12));
    CHECK(a.regime == b.regime);
    REQUIRE(a.oracle_deviation.has_value());
    CHECK(*a.oracle_deviation < 1e-8);
    CHECK_THROWS_AS(run_cycle(p, s.reverse()), std::invalid_argument);
}
