// Fixed-size dense complex matrices (2x2 and 4x4) and the Hermitian
// eigensolver used by every two-qubit measure.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <sstream>

#include "memslab/error.hpp"

namespace memslab {

using Complex = std::complex<double>;

namespace tol {
inline constexpr double kHermitian = 1e-10;   // ||H - H^dagger||_F, scaled by max(1, ||H||_F)
inline constexpr double kPsdClamp = 1e-10;    // eigenvalues in [-kPsdClamp, 0) are rounded to 0
inline constexpr double kReconstruct = 1e-12; // eigendecomposition reconstruction
inline constexpr double kJacobiStop = 1e-14;  // off-diagonal mass relative to ||H||_F
inline constexpr int kJacobiMaxSweeps = 100;
} // namespace tol

/// Row-major N x N complex matrix with value semantics.
template <std::size_t N>
class SquareMatrix {
public:
    static constexpr std::size_t kDim = N;

    constexpr SquareMatrix() noexcept : data_{} {}

    static constexpr SquareMatrix identity() noexcept {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    template <class Range>
    static SquareMatrix diagonal(const Range& values) {
        SquareMatrix m;
        std::size_t i = 0;
        for (const auto& v : values) {
            if (i == N) break;
            m(i, i) = v;
            ++i;
        }
        return m;
    }

    static SquareMatrix diagonal(std::initializer_list<Complex> values) {
        return diagonal<std::initializer_list<Complex>>(values);
    }

    static SquareMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
        SquareMatrix m;
        std::size_t r = 0;
        for (const auto& row : rows) {
            std::size_t c = 0;
            for (const auto& v : row) {
                if (r < N && c < N) m(r, c) = v;
                ++c;
            }
            ++r;
        }
        return m;
    }

    constexpr Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * N + c]; }
    constexpr const Complex& operator()(std::size_t r, std::size_t c) const noexcept {
        return data_[r * N + c];
    }

    constexpr const std::array<Complex, N * N>& entries() const noexcept { return data_; }
    constexpr std::array<Complex, N * N>& entries() noexcept { return data_; }

    SquareMatrix& operator+=(const SquareMatrix& o) noexcept {
        for (std::size_t i = 0; i < N * N; ++i) data_[i] += o.data_[i];
        return *this;
    }
    SquareMatrix& operator-=(const SquareMatrix& o) noexcept {
        for (std::size_t i = 0; i < N * N; ++i) data_[i] -= o.data_[i];
        return *this;
    }
    SquareMatrix& operator*=(Complex s) noexcept {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) noexcept { return a += b; }
    friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) noexcept { return a -= b; }
    friend SquareMatrix operator*(SquareMatrix a, Complex s) noexcept { return a *= s; }
    friend SquareMatrix operator*(Complex s, SquareMatrix a) noexcept { return a *= s; }
    friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) noexcept {
        return mul(a, b);
    }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::array<Complex, N * N> data_;
};

using CMat2 = SquareMatrix<2>;
using CMat4 = SquareMatrix<4>;

template <std::size_t N>
SquareMatrix<N> mul(const SquareMatrix<N>& a, const SquareMatrix<N>& b) noexcept {
    SquareMatrix<N> out;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t k = 0; k < N; ++k) {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < N; ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

/// Kronecker product in the basis ordering |00>, |01>, |10>, |11>.
inline CMat4 kron(const CMat2& a, const CMat2& b) noexcept {
    CMat4 out;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return out;
}

template <std::size_t N>
Complex trace(const SquareMatrix<N>& a) noexcept {
    Complex t{};
    for (std::size_t i = 0; i < N; ++i) t += a(i, i);
    return t;
}

template <std::size_t N>
SquareMatrix<N> adjoint(const SquareMatrix<N>& a) noexcept {
    SquareMatrix<N> out;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) out(i, j) = std::conj(a(j, i));
    return out;
}

template <std::size_t N>
SquareMatrix<N> conj(const SquareMatrix<N>& a) noexcept {
    SquareMatrix<N> out = a;
    for (auto& v : out.entries()) v = std::conj(v);
    return out;
}

template <std::size_t N>
SquareMatrix<N> transpose(const SquareMatrix<N>& a) noexcept {
    SquareMatrix<N> out;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) out(i, j) = a(j, i);
    return out;
}

template <std::size_t N>
double frobenius_norm(const SquareMatrix<N>& a) noexcept {
    double s = 0.0;
    for (const auto& v : a.entries()) s += std::norm(v);
    return std::sqrt(s);
}

/// Frobenius distance ||a - b||_F.
template <std::size_t N>
double frobenius(const SquareMatrix<N>& a, const SquareMatrix<N>& b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < N * N; ++i) s += std::norm(a.entries()[i] - b.entries()[i]);
    return std::sqrt(s);
}

template <std::size_t N>
bool all_finite(const SquareMatrix<N>& a) noexcept {
    return std::all_of(a.entries().begin(), a.entries().end(), [](const Complex& v) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
}

template <std::size_t N>
double hermiticity_defect(const SquareMatrix<N>& a) noexcept {
    return frobenius(a, adjoint(a));
}

template <std::size_t N>
bool is_hermitian(const SquareMatrix<N>& a, double rel_tol = tol::kHermitian) noexcept {
    return hermiticity_defect(a) <= rel_tol * std::max(1.0, frobenius_norm(a));
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// the matching orthonormal eigenvectors stored as columns.
template <std::size_t N>
struct HermEigN {
    std::array<double, N> eigenvalues{};
    SquareMatrix<N> eigenvectors;

    /// V diag(f(lambda)) V^dagger.
    template <class F>
    SquareMatrix<N> apply(F&& f) const {
        SquareMatrix<N> out;
        for (std::size_t k = 0; k < N; ++k) {
            const double w = f(eigenvalues[k]);
            if (w == 0.0) continue;
            for (std::size_t i = 0; i < N; ++i) {
                const Complex vik = eigenvectors(i, k) * w;
                for (std::size_t j = 0; j < N; ++j) out(i, j) += vik * std::conj(eigenvectors(j, k));
            }
        }
        return out;
    }

    SquareMatrix<N> reconstruct() const {
        return apply([](double x) { return x; });
    }
};

using HermEig = HermEigN<4>;

namespace detail {

template <std::size_t N>
double off_diagonal_mass(const SquareMatrix<N>& a) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One complex Jacobi rotation zeroing a(p, q). The rotation is the real
// Givens rotation of the phase-aligned pair: J = D * P with D = diag(..,e^{-i phi},..).
template <std::size_t N>
void jacobi_rotate(SquareMatrix<N>& a, SquareMatrix<N>& v, std::size_t p, std::size_t q) noexcept {
    const Complex apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    const Complex phase = apq / mag;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double theta = (aqq - app) / (2.0 * mag);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    // J entries (rows/cols p and q only).
    const Complex jpp = c;
    const Complex jpq = s;
    const Complex jqp = -s * std::conj(phase);
    const Complex jqq = c * std::conj(phase);

    for (std::size_t k = 0; k < N; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = akp * jpp + akq * jqp;
        a(k, q) = akp * jpq + akq * jqq;
    }
    for (std::size_t k = 0; k < N; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
        a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();

    for (std::size_t k = 0; k < N; ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = vkp * jpp + vkq * jqp;
        v(k, q) = vkp * jpq + vkq * jqq;
    }
}

} // namespace detail

/// Cyclic complex Jacobi eigensolver. Throws NotHermitian when the input is
/// not Hermitian within tol::kHermitian (relative).
template <std::size_t N>
HermEigN<N> hermitian_eig(const SquareMatrix<N>& h) {
    const double norm = frobenius_norm(h);
    const double defect = hermiticity_defect(h);
    if (!(defect <= tol::kHermitian * std::max(1.0, norm))) {
        std::ostringstream msg;
        msg << "||H - H^dagger||_F = " << defect << " exceeds " << tol::kHermitian << " * max(1, ||H||_F)";
        throw Error(ErrorKind::NotHermitian, msg.str());
    }

    SquareMatrix<N> a = 0.5 * (h + adjoint(h));
    SquareMatrix<N> v = SquareMatrix<N>::identity();
    const double stop = tol::kJacobiStop * norm;

    for (int sweep = 0; sweep < tol::kJacobiMaxSweeps; ++sweep) {
        if (detail::off_diagonal_mass(a) <= stop) break;
        for (std::size_t p = 0; p + 1 < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) detail::jacobi_rotate(a, v, p, q);
    }

    std::array<std::size_t, N> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    HermEigN<N> out;
    for (std::size_t k = 0; k < N; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < N; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

/// Principal square root of a positive semi-definite Hermitian matrix.
/// Eigenvalues in [-tol::kPsdClamp, 0) are treated as zero.
template <std::size_t N>
SquareMatrix<N> psd_sqrt(const SquareMatrix<N>& h) {
    const auto eig = hermitian_eig(h);
    if (eig.eigenvalues.front() < -tol::kPsdClamp) {
        std::ostringstream msg;
        msg << "minimum eigenvalue " << eig.eigenvalues.front() << " is below -" << tol::kPsdClamp;
        throw Error(ErrorKind::NotPSD, msg.str());
    }
    return eig.apply([](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

/// Pauli matrices and other fixed 2x2 operators.
namespace pauli {
inline CMat2 identity() { return CMat2::identity(); }
inline CMat2 x() { return CMat2::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
inline CMat2 y() { return CMat2::from_rows({{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}); }
inline CMat2 z() { return CMat2::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }
} // namespace pauli

} // namespace memslab
