// model.hpp - Closed-form spectrum, eigenbasis and thermal quantities of the two-qubit XY model
//
//   H(h) = Jx sx.sx + Jy sy.sy + h (sz1 + sz2)
//
// Product basis ordering used throughout: {|uu>, |ud>, |du>, |dd>}.
// Level labels follow the working/idle split: eps1 = -eps4 and eps4 depend on h,
// eps2 = -eps3 and eps3 = Jx + Jy do not. Labels are not sorted by energy.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace xyotto {

template <typename Scalar>
struct BasicModelParams {
    Scalar jx{0};
    Scalar jy{0};
    Scalar h1{2};    // field at the start of the compression stroke
    Scalar h2{1};    // field at its end, h2 < h1
    Scalar t1{1};    // bath in contact with H(h1)
    Scalar t2{1};    // bath in contact with H(h2)
    Scalar tau{1};   // unitary stroke duration

    Scalar beta1() const { return Scalar(1) / t1; }
    Scalar beta2() const { return Scalar(1) / t2; }
    Scalar anisotropy() const { return jx - jy; }
};

using ModelParams = BasicModelParams<double>;

namespace detail {

template <typename T>
std::string to_text(const T& v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace detail

// Throws std::invalid_argument naming the first violated invariant.
template <typename Scalar>
void validate(const BasicModelParams<Scalar>& p) {
    using detail::to_text;
    auto finite = [](Scalar v) { return std::isfinite(static_cast<double>(v)); };
    if (!finite(p.jx) || !finite(p.jy) || !finite(p.h1) || !finite(p.h2) || !finite(p.t1) ||
        !finite(p.t2) || !finite(p.tau)) {
        throw std::invalid_argument("model parameters must be finite");
    }
    if (p.jx < 0 || p.jy < 0) {
        throw std::invalid_argument("couplings must satisfy Jx >= 0 and Jy >= 0 (got Jx=" +
                                    to_text(p.jx) + ", Jy=" + to_text(p.jy) + ")");
    }
    if (!(p.h2 > 0)) {
        throw std::invalid_argument("fields must satisfy h2 > 0 (got h2=" + to_text(p.h2) + ")");
    }
    if (!(p.h1 > p.h2)) {
        throw std::invalid_argument("fields must satisfy h1 > h2 (got h1=" + to_text(p.h1) +
                                    ", h2=" + to_text(p.h2) + ")");
    }
    if (!(p.t1 > 0) || !(p.t2 > 0)) {
        throw std::invalid_argument("temperatures must satisfy T1 > 0 and T2 > 0 (got T1=" +
                                    to_text(p.t1) + ", T2=" + to_text(p.t2) + ")");
    }
    if (!(p.tau > 0)) {
        throw std::invalid_argument("stroke duration must satisfy tau > 0 (got tau=" +
                                    to_text(p.tau) + ")");
    }
}

// ------------------------------- Spectrum -----------------------------------

template <typename Scalar>
struct Spectrum {
    Scalar eps1{0};
    Scalar eps2{0};
    Scalar eps3{0};
    Scalar eps4{0};

    Eigen::Matrix<Scalar, 4, 1> levels() const {
        Eigen::Matrix<Scalar, 4, 1> v;
        v << eps1, eps2, eps3, eps4;
        return v;
    }
};

// Working-level energy sqrt(4h^2 + (Jx-Jy)^2).
template <typename Scalar>
Scalar working_gap(const BasicModelParams<Scalar>& p, Scalar h) {
    using std::sqrt;
    const Scalar d = p.anisotropy();
    return sqrt(Scalar(4) * h * h + d * d);
}

template <typename Scalar>
Spectrum<Scalar> spectrum(const BasicModelParams<Scalar>& p, Scalar h) {
    if (h < 0) throw std::invalid_argument("spectrum: field must satisfy h >= 0");
    Spectrum<Scalar> s;
    s.eps4 = working_gap(p, h);
    s.eps3 = p.jx + p.jy;
    s.eps2 = -s.eps3;
    s.eps1 = -s.eps4;
    return s;
}

// Dense Hamiltonian in the product basis. Real symmetric and block diagonal:
// {|uu>,|dd>} carries the field and Jx-Jy, {|ud>,|du>} carries Jx+Jy.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> hamiltonian(const BasicModelParams<Scalar>& p, Scalar h) {
    Eigen::Matrix<Scalar, 4, 4> H = Eigen::Matrix<Scalar, 4, 4>::Zero();
    H(0, 0) = Scalar(2) * h;
    H(3, 3) = Scalar(-2) * h;
    H(0, 3) = H(3, 0) = p.jx - p.jy;
    H(1, 2) = H(2, 1) = p.jx + p.jy;
    return H;
}

// ------------------------------- Eigenbasis ---------------------------------

template <typename Scalar>
struct EigenBasis {
    Scalar alpha_plus{1};
    Scalar alpha_minus{0};
};

template <typename Scalar>
EigenBasis<Scalar> eigenbasis(const BasicModelParams<Scalar>& p, Scalar h) {
    using std::sqrt;
    if (h < 0) throw std::invalid_argument("eigenbasis: field must satisfy h >= 0");
    const Scalar e4 = working_gap(p, h);
    EigenBasis<Scalar> b;
    if (e4 == Scalar(0)) return b;  // h = 0 and Jx = Jy: take the h -> 0+ limit
    const Scalar r = std::clamp(Scalar(2) * h / e4, Scalar(0), Scalar(1));
    b.alpha_plus = sqrt((Scalar(1) + r) / Scalar(2));
    b.alpha_minus = sqrt((Scalar(1) - r) / Scalar(2));
    return b;
}

// Columns are |eps1>, |eps2>, |eps3>, |eps4> in the product basis. All real.
// The |dd> amplitudes carry sign(Jx - Jy); for Jx >= Jy this is the textbook form
//   |eps4> = a+ |uu> + a- |dd>,  |eps1> = a- |uu> - a+ |dd>.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> eigenvectors(const BasicModelParams<Scalar>& p, Scalar h) {
    using std::sqrt;
    const auto b = eigenbasis(p, h);
    const Scalar s = p.anisotropy() < 0 ? Scalar(-1) : Scalar(1);
    const Scalar r2 = Scalar(1) / sqrt(Scalar(2));
    Eigen::Matrix<Scalar, 4, 4> V = Eigen::Matrix<Scalar, 4, 4>::Zero();
    V(0, 0) = s * b.alpha_minus;
    V(3, 0) = -b.alpha_plus;
    V(1, 1) = r2;
    V(2, 1) = -r2;
    V(1, 2) = r2;
    V(2, 2) = r2;
    V(0, 3) = b.alpha_plus;
    V(3, 3) = s * b.alpha_minus;
    return V;
}

// --------------------------- Thermal populations ----------------------------

template <typename Scalar>
struct ThermalPopulations {
    Scalar p1{0.25};
    Scalar p2{0.25};
    Scalar p3{0.25};
    Scalar p4{0.25};

    Eigen::Matrix<Scalar, 4, 1> vector() const {
        Eigen::Matrix<Scalar, 4, 1> v;
        v << p1, p2, p3, p4;
        return v;
    }
};

// Gibbs weights shifted by the lowest level so large beta cannot overflow.
template <typename Scalar>
ThermalPopulations<Scalar> thermal_populations(const Spectrum<Scalar>& s, Scalar beta) {
    using std::exp;
    if (!(beta >= 0) || !std::isfinite(static_cast<double>(beta))) {
        throw std::invalid_argument("thermal_populations: beta must be finite and >= 0");
    }
    const auto e = s.levels();
    const Scalar lowest = e.minCoeff();
    Eigen::Matrix<Scalar, 4, 1> w;
    for (int i = 0; i < 4; ++i) w(i) = exp(-beta * (e(i) - lowest));
    w /= w.sum();
    return {w(0), w(1), w(2), w(3)};
}

// ------------------------------ Work function -------------------------------

//   g(x, y) = (e^x - e^-x) / (e^xy + e^-xy + e^x + e^-x),   x, y >= 0
// Numerator and denominator are scaled by e^-max(x, xy).
template <typename Scalar>
Scalar g(Scalar x, Scalar y) {
    using std::exp;
    using std::expm1;
    using std::max;
    if (x < 0 || y < 0) throw std::invalid_argument("g: requires x >= 0 and y >= 0");
    const Scalar xy = x * y;
    const Scalar m = max(x, xy);
    const Scalar num = -exp(x - m) * expm1(Scalar(-2) * x);
    const Scalar den = exp(xy - m) + exp(-xy - m) + exp(x - m) + exp(-x - m);
    return num / den;
}

// 1 - g(x, y), accurate where g is close to 1.
template <typename Scalar>
Scalar g_complement(Scalar x, Scalar y) {
    using std::exp;
    using std::max;
    if (x < 0 || y < 0) throw std::invalid_argument("g_complement: requires x >= 0 and y >= 0");
    const Scalar xy = x * y;
    const Scalar m = max(x, xy);
    const Scalar num = exp(xy - m) + exp(-xy - m) + Scalar(2) * exp(-x - m);
    const Scalar den = exp(xy - m) + exp(-xy - m) + exp(x - m) + exp(-x - m);
    return num / den;
}

// f = p1 - p4 = sinh(b e4) / (cosh(b e3) + cosh(b e4)) = g(b e4, e3/e4).
template <typename Scalar>
Scalar work_function(Scalar beta, Scalar eps4, Scalar eps3) {
    if (beta < 0 || eps4 < 0 || eps3 < 0) {
        throw std::invalid_argument("work_function: requires beta, eps4, eps3 >= 0");
    }
    if (eps4 == Scalar(0)) return Scalar(0);
    return g(beta * eps4, eps3 / eps4);
}

template <typename Scalar>
Scalar work_function_complement(Scalar beta, Scalar eps4, Scalar eps3) {
    if (beta < 0 || eps4 < 0 || eps3 < 0) {
        throw std::invalid_argument("work_function_complement: requires beta, eps4, eps3 >= 0");
    }
    if (eps4 == Scalar(0)) return Scalar(1);
    return g_complement(beta * eps4, eps3 / eps4);
}

// ------------------------ Adiabaticity thresholds ---------------------------

// Sudden-quench limit |<eps1(h2)|eps1(h1)>|^2.
template <typename Scalar>
Scalar quench_adiabaticity(const BasicModelParams<Scalar>& p) {
    using std::sqrt;
    const Scalar d2 = p.anisotropy() * p.anisotropy();
    const Scalar a = Scalar(4) * p.h1 * p.h1 + d2;
    const Scalar b = Scalar(4) * p.h2 * p.h2 + d2;
    if (d2 == Scalar(0)) return Scalar(1);
    return Scalar(0.5) * (Scalar(1) + (Scalar(4) * p.h1 * p.h2 + d2) / sqrt(a * b));
}

// Below this adiabaticity no engine exists at any temperatures; it is also the
// exact threshold below which the expansion stroke stops extracting work.
template <typename Scalar>
Scalar p_min(const BasicModelParams<Scalar>& p) {
    return Scalar(0.5) * (Scalar(1) + working_gap(p, p.h2) / working_gap(p, p.h1));
}

// Sufficient bound for work extraction in the expansion stroke:
// W21 < 0 whenever P > (1 + sqrt(eps4(h2)/eps4(h1))) / 2.
template <typename Scalar>
Scalar expansion_work_bound(const BasicModelParams<Scalar>& p) {
    using std::sqrt;
    return Scalar(0.5) * (Scalar(1) + sqrt(working_gap(p, p.h2) / working_gap(p, p.h1)));
}

// Engine condition at adiabaticity P reads f(1) < c(P) f(2).
template <typename Scalar>
Scalar c_of_p(const BasicModelParams<Scalar>& p, Scalar P) {
    if (P < Scalar(0.5) || P > Scalar(1)) {
        throw std::invalid_argument("c_of_p: requires 1/2 <= P <= 1");
    }
    const Scalar e1 = working_gap(p, p.h1);
    const Scalar e2 = working_gap(p, p.h2);
    const Scalar loss = Scalar(2) * (Scalar(1) - P);
    return (e1 - e2 - loss * e1) / (e1 - e2 + loss * e2);
}

}  // namespace xyotto
