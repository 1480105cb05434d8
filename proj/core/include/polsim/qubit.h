// Copyright 2026 The polsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLSIM_QUBIT_H
#define POLSIM_QUBIT_H

#include <array>
#include <complex>
#include <string>

namespace polsim {

using Complex = std::complex<double>;

inline constexpr double NORM_TOL = 1e-12;
inline constexpr double OP_TOL = 1e-12;
/// Looser tolerance for values typed in by users (decimal Bloch components etc).
inline constexpr double INPUT_TOL = 1e-9;

/// Polarization amplitudes in the H/V basis.
///
/// The same type holds both normalized states and the unnormalized branch
/// states produced by measurement operators; callers that need a unit vector go
/// through make_state.
struct PolState {
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};

    double norm_sq() const {
        return std::norm(alpha) + std::norm(beta);
    }
    PolState operator*(Complex scale) const {
        return {alpha * scale, beta * scale};
    }
    PolState operator+(const PolState &other) const {
        return {alpha + other.alpha, beta + other.beta};
    }
    bool operator==(const PolState &other) const = default;

    std::string str() const;
};

/// Renormalizes (alpha, beta) to unit norm without touching the global phase.
PolState make_state(Complex alpha, Complex beta);

/// ⟨a|b⟩.
Complex inner(const PolState &a, const PolState &b);

/// True when a and b are parallel: |⟨a|b⟩| = ‖a‖·‖b‖ within tol, and their norms agree within tol.
bool same_up_to_phase(const PolState &a, const PolState &b, double tol);

namespace states {
inline const PolState H{{1, 0}, {0, 0}};
inline const PolState V{{0, 0}, {1, 0}};
PolState D();
PolState A();
PolState L();
PolState R();
}  // namespace states

/// 2x2 complex matrix, row-major in the basis order |H⟩, |V⟩.
struct Operator2 {
    std::array<Complex, 4> m{};

    static Operator2 identity();
    static Operator2 diag(Complex d0, Complex d1);

    Complex &operator()(int row, int col) {
        return m[2 * row + col];
    }
    const Complex &operator()(int row, int col) const {
        return m[2 * row + col];
    }

    Operator2 adjoint() const;
    Complex trace() const;
    Complex det() const;

    Operator2 operator*(const Operator2 &rhs) const;
    Operator2 operator+(const Operator2 &rhs) const;
    Operator2 operator-(const Operator2 &rhs) const;
    Operator2 operator*(Complex scale) const;
    PolState operator*(const PolState &v) const;
    bool operator==(const Operator2 &other) const = default;

    /// Largest entrywise modulus of (this - other).
    double max_abs_diff(const Operator2 &other) const;
    bool is_hermitian(double tol = OP_TOL) const;
    bool is_unitary(double tol = OP_TOL) const;
    /// Hermitian with both eigenvalues in [0, 1].
    bool is_effect(double tol = OP_TOL) const;

    std::string str() const;
};

inline Operator2 operator*(Complex scale, const Operator2 &op) {
    return op * scale;
}

/// Anticommutator {a, b} = ab + ba.
Operator2 anticommutator(const Operator2 &a, const Operator2 &b);

/// Eigenvalues of a Hermitian operator, ascending.
std::array<double, 2> hermitian_eigenvalues(const Operator2 &op);

/// Unit direction on the Bloch sphere.
struct BlochVector {
    double nx = 0;
    double ny = 0;
    double nz = 1;

    double norm() const;
    double dot(const BlochVector &other) const;
    bool operator==(const BlochVector &other) const = default;

    /// Rescales to unit length. Throws NonUnitBloch if the input norm is off by more than tol
    /// (or is zero).
    static BlochVector normalized(double nx, double ny, double nz, double tol = INPUT_TOL);

    static BlochVector x() {
        return {1, 0, 0};
    }
    static BlochVector y() {
        return {0, 1, 0};
    }
    static BlochVector z() {
        return {0, 0, 1};
    }
};

/// Bloch vector of a pure state, i.e. the n for which the state is the +1 eigenvector of σ_n.
BlochVector bloch_vector_of(const PolState &state);

enum class PauliAxis { X, Y, Z };

Operator2 pauli(PauliAxis axis);

/// σ_n = n_x σ_x + n_y σ_y + n_z σ_z. Throws NonUnitBloch if |n| deviates from 1 by more than 1e-9.
Operator2 bloch_observable(const BlochVector &n);

/// Unitary U(n) with U σ_z U† = σ_n.
///
/// Built as cos(θ/2) - i sin(θ/2) (n_x σ_y - n_y σ_x) / sqrt(1 - n_z²), cos θ = n_z. At the
/// north pole this is the identity; at the south pole the axis is undefined and -iσ_y is
/// returned (the limit taken along n_y = 0, n_x → 0⁺).
Operator2 bloch_rotation(const BlochVector &n);

/// ⟨ψ|op|ψ⟩ for Hermitian op. Throws NonHermitian if ‖op - op†‖_max > 1e-9.
double expectation(const PolState &state, const Operator2 &op);

}  // namespace polsim

#endif
