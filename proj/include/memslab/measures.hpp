// Entanglement and mixedness functionals of a two-qubit state.
//
// Units: eof in bits (binary Shannon entropy), von_neumann in nats.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "memslab/numerics.hpp"
#include "memslab/states.hpp"

namespace memslab {

/// Square roots of the eigenvalues of rho * spin_flip(rho), descending.
struct WoottersSpectrum {
    std::array<double, 4> lambdas{};
};

struct MeasureReport {
    double purity = 0.0;
    double linear_entropy = 0.0;
    double von_neumann = 0.0; // nats
    double concurrence = 0.0;
    double tangle = 0.0;
    double eof = 0.0; // bits
    double negativity = 0.0;
};

namespace detail {

inline const CMat4& sigma_y_y() {
    static const CMat4 yy = kron(pauli::y(), pauli::y());
    return yy;
}

// Eigenvalues at round-off level relative to the matrix scale are
// indistinguishable from zero and are snapped there.
inline double snap_zero(double x, double scale) noexcept {
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    return x <= floor ? 0.0 : x;
}

inline std::array<double, 4> clamped_eigenvalues(const DensityMatrix& rho) {
    auto eig = hermitian_eig(rho.matrix()).eigenvalues;
    for (auto& e : eig) e = std::max(e, 0.0);
    return eig;
}

} // namespace detail

/// rho~ = (sigma_y x sigma_y) rho* (sigma_y x sigma_y).
inline CMat4 spin_flip(const DensityMatrix& rho) {
    const CMat4& yy = detail::sigma_y_y();
    return yy * conj(rho.matrix()) * yy;
}

/// The spectrum of rho * rho~ is read off the Hermitian similar matrix
/// sqrt(rho) rho~ sqrt(rho); the non-Hermitian product is never diagonalised.
inline WoottersSpectrum wootters_lambdas(const DensityMatrix& rho) {
    const CMat4 root = psd_sqrt(rho.matrix());
    CMat4 r = root * spin_flip(rho) * root;
    r = 0.5 * (r + adjoint(r));
    const auto eig = hermitian_eig(r);
    const double scale = std::max(eig.eigenvalues.back(), 0.0);
    WoottersSpectrum out;
    for (std::size_t i = 0; i < 4; ++i) {
        const double mu = detail::snap_zero(eig.eigenvalues[3 - i], scale);
        out.lambdas[i] = std::sqrt(std::max(mu, 0.0));
    }
    return out;
}

inline double concurrence(const WoottersSpectrum& s) noexcept {
    const auto& l = s.lambdas;
    return std::max(l[0] - l[1] - l[2] - l[3], 0.0);
}

inline double concurrence(const DensityMatrix& rho) { return concurrence(wootters_lambdas(rho)); }

inline double tangle(const DensityMatrix& rho) {
    const double c = concurrence(rho);
    return c * c;
}

/// Binary Shannon entropy in bits with h(0) = h(1) = 0.
inline double binary_entropy(double p) noexcept {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// Entanglement of formation as a function of the tangle.
inline double eof_from_tangle(double tau) noexcept {
    tau = std::clamp(tau, 0.0, 1.0);
    return binary_entropy((1.0 + std::sqrt(1.0 - tau)) / 2.0);
}

inline double eof(const DensityMatrix& rho) { return eof_from_tangle(tangle(rho)); }

/// Tr rho^2, computed as the sum of squared moduli (rho is Hermitian).
inline double purity(const DensityMatrix& rho) noexcept {
    double s = 0.0;
    for (const auto& v : rho.matrix().entries()) s += std::norm(v);
    return s;
}

inline double linear_entropy_from_purity(double p) noexcept {
    return std::clamp(4.0 / 3.0 * (1.0 - p), 0.0, 1.0);
}

/// (4/3)(1 - Tr rho^2): 0 for pure states, 1 for I/4.
inline double linear_entropy(const DensityMatrix& rho) noexcept {
    return linear_entropy_from_purity(purity(rho));
}

/// -Tr rho ln rho in nats, with 0 ln 0 = 0.
inline double von_neumann_entropy(const DensityMatrix& rho) {
    double s = 0.0;
    for (double e : detail::clamped_eigenvalues(rho))
        if (e > 0.0) s -= e * std::log(e);
    return std::max(s, 0.0);
}

/// von Neumann entropy divided by ln 4, mapped onto [0, 1].
inline double von_neumann_normalized(const DensityMatrix& rho) {
    return std::clamp(von_neumann_entropy(rho) / std::log(4.0), 0.0, 1.0);
}

/// Partial transpose over qubit B.
inline CMat4 partial_transpose_b(const CMat4& m) noexcept {
    CMat4 out;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t b = 0; b < 2; ++b) out(2 * i + a, 2 * j + b) = m(2 * i + b, 2 * j + a);
    return out;
}

/// Sum of the moduli of the negative eigenvalues of the partial transpose.
inline double negativity(const DensityMatrix& rho) {
    const auto eig = hermitian_eig(partial_transpose_b(rho.matrix()));
    double n = 0.0;
    for (double e : eig.eigenvalues)
        if (e < 0.0) n -= e;
    return n;
}

inline MeasureReport measure_report(const DensityMatrix& rho) {
    MeasureReport r;
    r.purity = purity(rho);
    r.linear_entropy = linear_entropy_from_purity(r.purity);
    r.von_neumann = von_neumann_entropy(rho);
    r.concurrence = concurrence(rho);
    r.tangle = r.concurrence * r.concurrence;
    r.eof = eof_from_tangle(r.tangle);
    r.negativity = negativity(rho);
    return r;
}

} // namespace memslab
