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

#include "polsim/qubit.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "polsim/error.h"

namespace polsim {

namespace {

constexpr Complex I_UNIT{0.0, 1.0};

std::string format_complex(Complex c) {
    return fmt::format("{:.6g}{:+.6g}i", c.real(), c.imag());
}

}  // namespace

std::string PolState::str() const {
    return fmt::format("({}, {})", format_complex(alpha), format_complex(beta));
}

PolState make_state(Complex alpha, Complex beta) {
    double n2 = std::norm(alpha) + std::norm(beta);
    if (!(n2 >= 1e-30) || !std::isfinite(n2)) {
        throw_error(ErrorCode::ZeroVector, "cannot normalize a (near-)zero polarization vector");
    }
    // Already unit to rounding: keep the bits so normalize/print/parse is a fixed point.
    if (std::abs(n2 - 1) <= 4 * std::numeric_limits<double>::epsilon()) {
        return {alpha, beta};
    }
    double inv = 1.0 / std::sqrt(n2);
    return {alpha * inv, beta * inv};
}

Complex inner(const PolState &a, const PolState &b) {
    return std::conj(a.alpha) * b.alpha + std::conj(a.beta) * b.beta;
}

bool same_up_to_phase(const PolState &a, const PolState &b, double tol) {
    Complex overlap = inner(b, a);
    double mag = std::abs(overlap);
    if (mag < 1e-300) {
        return a.norm_sq() <= tol * tol && b.norm_sq() <= tol * tol;
    }
    Complex phase = overlap / mag;
    PolState aligned = b * phase;
    return std::abs(a.alpha - aligned.alpha) <= tol && std::abs(a.beta - aligned.beta) <= tol;
}

namespace states {
PolState D() {
    return make_state(1, 1);
}
PolState A() {
    return make_state(1, -1);
}
PolState L() {
    return make_state(1, I_UNIT);
}
PolState R() {
    return make_state(1, -I_UNIT);
}
}  // namespace states

Operator2 Operator2::identity() {
    return diag(1, 1);
}

Operator2 Operator2::diag(Complex d0, Complex d1) {
    return {{d0, 0, 0, d1}};
}

Operator2 Operator2::adjoint() const {
    return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

Complex Operator2::trace() const {
    return m[0] + m[3];
}

Complex Operator2::det() const {
    return m[0] * m[3] - m[1] * m[2];
}

Operator2 Operator2::operator*(const Operator2 &rhs) const {
    const auto &r = rhs.m;
    return {{
        m[0] * r[0] + m[1] * r[2],
        m[0] * r[1] + m[1] * r[3],
        m[2] * r[0] + m[3] * r[2],
        m[2] * r[1] + m[3] * r[3],
    }};
}

Operator2 Operator2::operator+(const Operator2 &rhs) const {
    Operator2 out;
    for (size_t k = 0; k < 4; k++) {
        out.m[k] = m[k] + rhs.m[k];
    }
    return out;
}

Operator2 Operator2::operator-(const Operator2 &rhs) const {
    Operator2 out;
    for (size_t k = 0; k < 4; k++) {
        out.m[k] = m[k] - rhs.m[k];
    }
    return out;
}

Operator2 Operator2::operator*(Complex scale) const {
    Operator2 out;
    for (size_t k = 0; k < 4; k++) {
        out.m[k] = m[k] * scale;
    }
    return out;
}

PolState Operator2::operator*(const PolState &v) const {
    return {m[0] * v.alpha + m[1] * v.beta, m[2] * v.alpha + m[3] * v.beta};
}

double Operator2::max_abs_diff(const Operator2 &other) const {
    double worst = 0;
    for (size_t k = 0; k < 4; k++) {
        worst = std::max(worst, std::abs(m[k] - other.m[k]));
    }
    return worst;
}

bool Operator2::is_hermitian(double tol) const {
    return max_abs_diff(adjoint()) <= tol;
}

bool Operator2::is_unitary(double tol) const {
    return (adjoint() * *this).max_abs_diff(identity()) <= tol;
}

bool Operator2::is_effect(double tol) const {
    if (!is_hermitian(tol)) {
        return false;
    }
    auto ev = hermitian_eigenvalues(*this);
    return ev[0] >= -tol && ev[1] <= 1 + tol;
}

std::string Operator2::str() const {
    return fmt::format(
        "[[{}, {}], [{}, {}]]",
        format_complex(m[0]),
        format_complex(m[1]),
        format_complex(m[2]),
        format_complex(m[3]));
}

Operator2 anticommutator(const Operator2 &a, const Operator2 &b) {
    return a * b + b * a;
}

std::array<double, 2> hermitian_eigenvalues(const Operator2 &op) {
    double a = op.m[0].real();
    double d = op.m[3].real();
    double mean = 0.5 * (a + d);
    double half_gap = std::hypot(0.5 * (a - d), std::abs(op.m[1]));
    return {mean - half_gap, mean + half_gap};
}

double BlochVector::norm() const {
    return std::sqrt(nx * nx + ny * ny + nz * nz);
}

double BlochVector::dot(const BlochVector &other) const {
    return nx * other.nx + ny * other.ny + nz * other.nz;
}

BlochVector BlochVector::normalized(double nx, double ny, double nz, double tol) {
    BlochVector v{nx, ny, nz};
    double n = v.norm();
    if (!std::isfinite(n) || std::abs(n - 1) > tol) {
        throw_error(
            ErrorCode::NonUnitBloch,
            fmt::format("Bloch vector [{}, {}, {}] has norm {} (tolerance {})", nx, ny, nz, n, tol));
    }
    if (std::abs(v.dot(v) - 1) <= 4 * std::numeric_limits<double>::epsilon()) {
        return v;
    }
    return {nx / n, ny / n, nz / n};
}

BlochVector bloch_vector_of(const PolState &state) {
    PolState s = make_state(state.alpha, state.beta);
    Complex cross = std::conj(s.alpha) * s.beta;
    return BlochVector::normalized(
        2 * cross.real(), 2 * cross.imag(), std::norm(s.alpha) - std::norm(s.beta), 1e-9);
}

Operator2 pauli(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::X:
            return {{0, 1, 1, 0}};
        case PauliAxis::Y:
            return {{0, -I_UNIT, I_UNIT, 0}};
        case PauliAxis::Z:
            return Operator2::diag(1, -1);
    }
    return Operator2::identity();
}

Operator2 bloch_observable(const BlochVector &n) {
    double len = n.norm();
    if (!std::isfinite(len) || std::abs(len - 1) > INPUT_TOL) {
        throw_error(ErrorCode::NonUnitBloch, fmt::format("|n| = {} is not 1", len));
    }
    return {{
        Complex{n.nz, 0},
        Complex{n.nx, -n.ny},
        Complex{n.nx, n.ny},
        Complex{-n.nz, 0},
    }};
}

Operator2 bloch_rotation(const BlochVector &n) {
    if (n.nz > 1 - 1e-12) {
        return Operator2::identity();
    }
    if (n.nz < -1 + 1e-12) {
        return pauli(PauliAxis::Y) * Complex{0, -1};
    }
    // Half angle from atan2 so neither pole loses precision to cancellation.
    double rho = std::hypot(n.nx, n.ny);
    double half = 0.5 * std::atan2(rho, n.nz);
    double c = std::cos(half);
    double k = std::sin(half) / rho;
    Operator2 axis = pauli(PauliAxis::Y) * n.nx - pauli(PauliAxis::X) * n.ny;
    return Operator2::identity() * c + axis * Complex{0, -k};
}

double expectation(const PolState &state, const Operator2 &op) {
    if (op.max_abs_diff(op.adjoint()) > INPUT_TOL) {
        throw_error(ErrorCode::NonHermitian, "expectation requires a Hermitian operator, got " + op.str());
    }
    return inner(state, op * state).real();
}

}  // namespace polsim
