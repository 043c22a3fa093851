// Validated two-qubit density matrices and the named state families:
// Bell states, Werner states, the diagonal-plus-coherence ansatz and the
// maximally entangled mixed states (MEMS).

#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "memslab/error.hpp"
#include "memslab/numerics.hpp"

namespace memslab {

namespace tol {
inline constexpr double kTrace = 1e-10;
inline constexpr double kNormalization = 1e-12;
} // namespace tol

/// A 4x4 matrix known to be Hermitian, unit-trace and positive semi-definite
/// (all within 1e-10). Only obtainable through make_density or the named
/// constructors below, so holding one is proof of validity.
class DensityMatrix {
public:
    const CMat4& matrix() const noexcept { return mat_; }
    const Complex& operator()(std::size_t r, std::size_t c) const noexcept { return mat_(r, c); }

    friend bool operator==(const DensityMatrix&, const DensityMatrix&) = default;

private:
    explicit DensityMatrix(const CMat4& m) : mat_(m) {}
    CMat4 mat_;

    friend DensityMatrix make_density(const CMat4& raw);
};

/// Validates without repairing. Throws NotHermitian, TraceNotOne or NotPSD
/// naming the size of the violation.
inline DensityMatrix make_density(const CMat4& raw) {
    if (!all_finite(raw)) throw Error(ErrorKind::NotHermitian, "matrix has non-finite entries");

    const double defect = hermiticity_defect(raw);
    if (defect > tol::kHermitian) {
        std::ostringstream msg;
        msg << "||rho - rho^dagger||_F = " << defect << " > " << tol::kHermitian;
        throw Error(ErrorKind::NotHermitian, msg.str());
    }
    const Complex tr = trace(raw);
    const double trace_err = std::abs(tr - Complex(1.0));
    if (trace_err > tol::kTrace) {
        std::ostringstream msg;
        msg << "|Tr rho - 1| = " << trace_err << " > " << tol::kTrace << " (Tr rho = " << tr.real() << ")";
        throw Error(ErrorKind::TraceNotOne, msg.str());
    }
    const auto eig = hermitian_eig(raw);
    if (eig.eigenvalues.front() < -tol::kPsdClamp) {
        std::ostringstream msg;
        msg << "minimum eigenvalue " << eig.eigenvalues.front() << " < -" << tol::kPsdClamp;
        throw Error(ErrorKind::NotPSD, msg.str());
    }
    return DensityMatrix(raw);
}

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

/// Populations x, y, a, b and coherence gamma of
///   [[x + g/2, 0, 0, g/2], [0, a, 0, 0], [0, 0, b, 0], [g/2, 0, 0, y + g/2]].
struct AnsatzParams {
    double x = 0.0;
    double y = 0.0;
    double a = 0.0;
    double b = 0.0;
    double gamma = 0.0;
};

/// Projector |psi><psi| / <psi|psi>. Throws ZeroVector for psi = 0.
inline DensityMatrix pure_from_vector(const std::array<Complex, 4>& psi) {
    double norm2 = 0.0;
    for (const auto& v : psi) norm2 += std::norm(v);
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw Error(ErrorKind::ZeroVector, "state vector has zero norm");
    CMat4 m;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m(i, j) = psi[i] * std::conj(psi[j]) / norm2;
    return make_density(m);
}

inline DensityMatrix bell(BellKind kind) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (kind) {
    case BellKind::PhiPlus: return pure_from_vector({r, 0.0, 0.0, r});
    case BellKind::PhiMinus: return pure_from_vector({r, 0.0, 0.0, -r});
    case BellKind::PsiPlus: return pure_from_vector({0.0, r, r, 0.0});
    case BellKind::PsiMinus: return pure_from_vector({0.0, r, -r, 0.0});
    }
    throw Error(ErrorKind::OutOfRange, "unknown Bell kind");
}

inline DensityMatrix maximally_mixed() { return make_density(CMat4::identity() * 0.25); }

namespace detail {
inline void require_unit_interval(double gamma, const char* what) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        std::ostringstream msg;
        msg << what << " gamma = " << gamma << " is outside [0, 1]";
        throw Error(ErrorKind::OutOfRange, msg.str());
    }
}
} // namespace detail

/// ((1 - gamma)/4) I + gamma |Phi+><Phi+|, gamma in [0, 1].
inline DensityMatrix werner(double gamma) {
    detail::require_unit_interval(gamma, "werner:");
    CMat4 m = CMat4::identity() * ((1.0 - gamma) / 4.0);
    m(0, 0) += gamma / 2.0;
    m(3, 3) += gamma / 2.0;
    m(0, 3) += gamma / 2.0;
    m(3, 0) += gamma / 2.0;
    return make_density(m);
}

/// Diagonal population g(gamma) of the MEMS family: gamma/2 above 2/3, 1/3 below.
inline double mems_g(double gamma) noexcept { return gamma >= 2.0 / 3.0 ? gamma / 2.0 : 1.0 / 3.0; }

/// Maximally entangled mixed state: diag(g, 1 - 2g, 0, g) with corners gamma/2.
inline DensityMatrix mems(double gamma) {
    detail::require_unit_interval(gamma, "mems:");
    const double g = mems_g(gamma);
    CMat4 m;
    m(0, 0) = g;
    m(1, 1) = 1.0 - 2.0 * g;
    m(3, 3) = g;
    m(0, 3) = gamma / 2.0;
    m(3, 0) = gamma / 2.0;
    return make_density(m);
}

inline DensityMatrix ansatz(const AnsatzParams& p) {
    for (double v : {p.x, p.y, p.a, p.b, p.gamma}) {
        if (!(v >= 0.0 && v <= 1.0)) {
            std::ostringstream msg;
            msg << "ansatz parameter " << v << " is outside [0, 1]";
            throw Error(ErrorKind::OutOfRange, msg.str());
        }
    }
    const double total = p.x + p.y + p.a + p.b + p.gamma;
    if (std::abs(total - 1.0) > tol::kNormalization) {
        std::ostringstream msg;
        msg << "x + y + a + b + gamma = " << total << " (must be 1 within " << tol::kNormalization << ")";
        throw Error(ErrorKind::NormalizationViolated, msg.str());
    }
    CMat4 m;
    m(0, 0) = p.x + p.gamma / 2.0;
    m(1, 1) = p.a;
    m(2, 2) = p.b;
    m(3, 3) = p.y + p.gamma / 2.0;
    m(0, 3) = p.gamma / 2.0;
    m(3, 0) = p.gamma / 2.0;
    return make_density(m);
}

// ---------------------------------------------------------------------------
// Text matrix format: 4 rows of 4 whitespace-separated `re,im` entries,
// row-major. Blank lines and `#` comments are ignored.

inline CMat4 parse_matrix_text(std::istream& in) {
    CMat4 m;
    std::size_t row = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream tokens(line);
        std::string tok;
        std::size_t col = 0;
        while (tokens >> tok) {
            if (row >= 4) throw Error(ErrorKind::Parse, "more than 4 matrix rows (line " + std::to_string(line_no) + ")");
            if (col >= 4) throw Error(ErrorKind::Parse, "more than 4 entries on line " + std::to_string(line_no));
            const auto comma = tok.find(',');
            if (comma == std::string::npos)
                throw Error(ErrorKind::Parse, "entry '" + tok + "' is not of the form re,im (line " + std::to_string(line_no) + ")");
            try {
                std::size_t used_re = 0;
                std::size_t used_im = 0;
                const std::string re_s = tok.substr(0, comma);
                const std::string im_s = tok.substr(comma + 1);
                const double re = std::stod(re_s, &used_re);
                const double im = std::stod(im_s, &used_im);
                if (used_re != re_s.size() || used_im != im_s.size()) throw std::invalid_argument("trailing");
                m(row, col) = Complex(re, im);
            } catch (const std::logic_error&) {
                throw Error(ErrorKind::Parse, "cannot parse entry '" + tok + "' on line " + std::to_string(line_no));
            }
            ++col;
        }
        if (col == 0) continue;
        if (col != 4) throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + " has " + std::to_string(col) + " entries, expected 4");
        ++row;
    }
    if (row != 4) throw Error(ErrorKind::Parse, "expected 4 matrix rows, found " + std::to_string(row));
    return m;
}

inline CMat4 parse_matrix_text(const std::string& text) {
    std::istringstream in(text);
    return parse_matrix_text(in);
}

/// Writes entries with 17 significant digits so parsing reproduces them exactly.
inline void write_matrix_text(std::ostream& out, const CMat4& m) {
    char buf[64];
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", m(r, c).real(), m(r, c).imag());
            out << (c ? " " : "") << buf;
        }
        out << '\n';
    }
}

} // namespace memslab
