// Copyright 2026 The Faultpath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense complex operator algebra on the joint system (x) bath space.
//
// Subsystem ordering convention, used by every module: qubit 0 is the
// slowest-varying tensor index, qubit n-1 the fastest of the qubits, and the
// bath factor (if any) comes last. A full-space basis index is therefore
//
//     idx = ((q0 * 2 + q1) * 2 + ... + q_{n-1}) * d_B + b.
//
// The bath is addressed as subsystem index n.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "faultpath/error.hpp"

namespace faultpath {

template <typename Real>
using OperatorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
using Operator = OperatorT<double>;
using Complex = std::complex<double>;

// Centralized numerical tolerances.
struct Tolerances {
    double hermiticity = 1e-12;
    double unitarity = 1e-10;
};

inline constexpr Tolerances kDefaultTolerances{};

struct TensorFactorSpec {
    int n_qubits = 0;
    int bath_dim = 1;

    int num_subsystems() const { return n_qubits + 1; }
    int bath_index() const { return n_qubits; }
    std::size_t subsystem_dim(int k) const { return k == n_qubits ? std::size_t(bath_dim) : 2; }
    std::size_t total_dim() const { return (std::size_t{1} << n_qubits) * std::size_t(bath_dim); }
    bool operator==(const TensorFactorSpec&) const = default;
};

namespace pauli {

template <typename Real = double>
OperatorT<Real> I() {
    return OperatorT<Real>::Identity(2, 2);
}
template <typename Real = double>
OperatorT<Real> X() {
    OperatorT<Real> m = OperatorT<Real>::Zero(2, 2);
    m(0, 1) = m(1, 0) = 1;
    return m;
}
template <typename Real = double>
OperatorT<Real> Y() {
    OperatorT<Real> m = OperatorT<Real>::Zero(2, 2);
    m(0, 1) = std::complex<Real>(0, -1);
    m(1, 0) = std::complex<Real>(0, 1);
    return m;
}
template <typename Real = double>
OperatorT<Real> Z() {
    OperatorT<Real> m = OperatorT<Real>::Zero(2, 2);
    m(0, 0) = 1;
    m(1, 1) = -1;
    return m;
}

}  // namespace pauli

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& op) {
    for (Eigen::Index c = 0; c < op.cols(); ++c)
        for (Eigen::Index r = 0; r < op.rows(); ++r)
            if (!std::isfinite(std::real(op(r, c))) || !std::isfinite(std::imag(op(r, c)))) return false;
    return true;
}

template <typename Derived>
void require_square_finite(const Eigen::MatrixBase<Derived>& op, const char* what) {
    if (op.rows() < 1 || op.rows() != op.cols())
        throw InputError(std::string(what) + ": operator must be square with dim >= 1");
    if (!all_finite(op)) throw InputError(std::string(what) + ": operator has non-finite entries");
}

// Largest singular value. Full SVD; dims here are small enough that no
// iterative estimate is needed.
template <typename Derived>
typename Derived::RealScalar sup_norm(const Eigen::MatrixBase<Derived>& op) {
    using Plain = typename Derived::PlainObject;
    require_square_finite(op, "sup_norm");
    Eigen::JacobiSVD<Plain> svd(op.eval());
    return svd.singularValues()(0);
}

// max |A(a,b) - conj(A(b,a))|
template <typename Derived>
typename Derived::RealScalar hermiticity_error(const Eigen::MatrixBase<Derived>& op) {
    return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar unitarity_error(const Eigen::MatrixBase<Derived>& op) {
    using Plain = typename Derived::PlainObject;
    Plain defect = op.adjoint() * op - Plain::Identity(op.rows(), op.cols());
    return sup_norm(defect);
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& op, double tol = kDefaultTolerances.hermiticity) {
    return op.rows() == op.cols() && hermiticity_error(op) <= tol;
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::PlainObject kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    typename DerivedA::PlainObject out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Acts as `local` on the listed subsystems (first listed = slowest local
// index) and as the identity elsewhere.
template <typename Derived>
typename Derived::PlainObject embed(const Eigen::MatrixBase<Derived>& local, std::span<const int> support,
                                    const TensorFactorSpec& spec) {
    using Plain = typename Derived::PlainObject;
    require_square_finite(local, "embed");
    const int nsub = spec.num_subsystems();
    std::vector<std::size_t> stride(nsub);
    std::size_t s = 1;
    for (int k = nsub - 1; k >= 0; --k) {
        stride[k] = s;
        s *= spec.subsystem_dim(k);
    }
    const std::size_t full = s;

    std::vector<char> used(nsub, 0);
    std::size_t local_dim = 1;
    for (int q : support) {
        if (q < 0 || q >= nsub) throw InputError("embed: subsystem index " + std::to_string(q) + " out of range");
        if (used[q]) throw InputError("embed: repeated subsystem index " + std::to_string(q));
        used[q] = 1;
        local_dim *= spec.subsystem_dim(q);
    }
    if (std::size_t(local.rows()) != local_dim)
        throw InputError("embed: local dimension " + std::to_string(local.rows()) + " does not match support dimension " +
                         std::to_string(local_dim));

    // Offset in the full index contributed by each local basis index.
    std::vector<std::size_t> offset(local_dim, 0);
    for (std::size_t a = 0; a < local_dim; ++a) {
        std::size_t rem = a, off = 0;
        for (std::size_t k = support.size(); k-- > 0;) {
            const std::size_t d = spec.subsystem_dim(support[k]);
            off += (rem % d) * stride[support[k]];
            rem /= d;
        }
        offset[a] = off;
    }

    Plain out = Plain::Zero(full, full);
    for (std::size_t base = 0; base < full; ++base) {
        bool on_support_zero = true;
        for (int q : support)
            if ((base / stride[q]) % spec.subsystem_dim(q) != 0) {
                on_support_zero = false;
                break;
            }
        if (!on_support_zero) continue;
        for (std::size_t a = 0; a < local_dim; ++a)
            for (std::size_t b = 0; b < local_dim; ++b) out(base + offset[a], base + offset[b]) = local(a, b);
    }
    return out;
}

template <typename Derived>
typename Derived::PlainObject embed(const Eigen::MatrixBase<Derived>& local, std::initializer_list<int> support,
                                    const TensorFactorSpec& spec) {
    return embed(local, std::span<const int>(support.begin(), support.size()), spec);
}

// exp(-i * scale * h) for Hermitian h, via the Hermitian eigendecomposition.
template <typename Derived>
typename Derived::PlainObject expm(const Eigen::MatrixBase<Derived>& h, typename Derived::RealScalar scale,
                                   double hermiticity_tol = kDefaultTolerances.hermiticity) {
    using Plain = typename Derived::PlainObject;
    using Real = typename Derived::RealScalar;
    require_square_finite(h, "expm");
    const Real herr = hermiticity_error(h);
    if (herr > hermiticity_tol * std::max<Real>(Real(1), h.cwiseAbs().maxCoeff()))
        throw InputError("expm: generator is not Hermitian (defect " + std::to_string(double(herr)) + ")");
    if (scale == Real(0)) return Plain::Identity(h.rows(), h.cols());
    Plain sym = (h + h.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<Plain> eig(sym);
    const auto& vals = eig.eigenvalues();
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> phases(vals.size());
    for (Eigen::Index k = 0; k < vals.size(); ++k) phases(k) = std::polar(Real(1), -scale * vals(k));
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

// Integer matrix power by repeated squaring.
template <typename Derived>
typename Derived::PlainObject matrix_power(const Eigen::MatrixBase<Derived>& m, std::size_t exponent) {
    using Plain = typename Derived::PlainObject;
    Plain result = Plain::Identity(m.rows(), m.cols());
    Plain base = m;
    while (exponent > 0) {
        if (exponent & 1U) result = result * base;
        exponent >>= 1U;
        if (exponent > 0) base = base * base;
    }
    return result;
}

// Random Hermitian matrix with GUE-like entries, normalized to sup norm 1
// (unless it is exactly zero, which happens only for dim 0).
template <typename Real = double, typename Rng>
OperatorT<Real> random_hermitian(std::size_t dim, Rng& rng) {
    std::normal_distribution<Real> normal(0, 1);
    OperatorT<Real> a(dim, dim);
    for (std::size_t c = 0; c < dim; ++c)
        for (std::size_t r = 0; r < dim; ++r) a(r, c) = std::complex<Real>(normal(rng), normal(rng));
    OperatorT<Real> h = (a + a.adjoint()) / Real(2);
    const Real n = sup_norm(h);
    return n > 0 ? OperatorT<Real>(h / n) : h;
}

template <typename Real = double, typename Rng>
OperatorT<Real> random_unitary(std::size_t dim, Rng& rng) {
    OperatorT<Real> h = random_hermitian<Real>(dim, rng);
    std::uniform_real_distribution<Real> angle(0, Real(2 * M_PI));
    return expm(h, angle(rng));
}

}  // namespace faultpath
