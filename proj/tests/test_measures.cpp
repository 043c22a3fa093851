#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

#include "memslab/measures.hpp"
#include "memslab/sampling.hpp"
#include "test_helpers.hpp"

using namespace memslab;
using memslab::testing::rotate_locally;
using memslab::testing::to_eigen;

namespace {

// Wootters lambdas straight from the non-Hermitian product rho * rho~,
// diagonalised with Eigen's general complex solver. Independent of the
// sqrt(rho) rho~ sqrt(rho) route used by the library.
std::array<double, 4> oracle_lambdas(const DensityMatrix& rho) {
    const Eigen::Matrix4cd yy = to_eigen(kron(pauli::y(), pauli::y()));
    const Eigen::Matrix4cd r = to_eigen(rho.matrix());
    const Eigen::Matrix4cd prod = r * yy * r.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(prod, false);
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) out[i] = std::sqrt(std::max(es.eigenvalues()(i).real(), 0.0));
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

} // namespace

TEST(SpinFlip, FixedPoints) {
    const auto phi = bell(BellKind::PhiPlus);
    EXPECT_LT(frobenius(spin_flip(phi), phi.matrix()), 1e-15);
    EXPECT_LT(frobenius(spin_flip(maximally_mixed()), maximally_mixed().matrix()), 1e-15);
}

TEST(SpinFlip, DoubleFlipIsIdentityAndSpectrumPreserved) {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const DensityMatrix rho = ginibre_state(rng, 1 + i % 4);
        const DensityMatrix flipped = make_density(spin_flip(rho));
        EXPECT_LT(frobenius(spin_flip(flipped), rho.matrix()), 1e-14);
        const auto a = hermitian_eig(rho.matrix()).eigenvalues;
        const auto b = hermitian_eig(flipped.matrix()).eigenvalues;
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(a[k], b[k], 1e-13);
    }
}

TEST(Wootters, KnownSpectra) {
    const auto bell_l = wootters_lambdas(bell(BellKind::PhiPlus)).lambdas;
    EXPECT_NEAR(bell_l[0], 1.0, 1e-12);
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(bell_l[i], 0.0, 1e-8);

    for (double l : wootters_lambdas(maximally_mixed()).lambdas) EXPECT_NEAR(l, 0.25, 1e-14);
}

TEST(Wootters, WernerAgainstProductOracle) {
    for (int i = 0; i <= 20; ++i) {
        const double g = i / 20.0;
        const auto rho = werner(g);
        const auto l = wootters_lambdas(rho).lambdas;
        const auto ref = oracle_lambdas(rho);
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(l[k], ref[k], 1e-7);
        EXPECT_NEAR(l[0] - l[1] - l[2] - l[3], (3.0 * g - 1.0) / 2.0, 1e-12) << "gamma=" << g;
    }
}

TEST(Wootters, RandomStatesAgainstProductOracle) {
    Rng rng(101);
    for (int i = 0; i < 300; ++i) {
        const auto rho = ginibre_state(rng, 4);
        const auto l = wootters_lambdas(rho).lambdas;
        const auto ref = oracle_lambdas(rho);
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(l[k], ref[k], 1e-9);
    }
}

TEST(Wootters, SpectrumInvariants) {
    Rng rng(12);
    for (int i = 0; i < 400; ++i) {
        const int rank = 1 + i % 4;
        const auto rho = ginibre_state(rng, rank);
        const auto l = wootters_lambdas(rho).lambdas;
        for (int k = 0; k < 3; ++k) EXPECT_GE(l[k], l[k + 1]);
        EXPECT_GE(l[3], 0.0);

        double sum_sq = 0.0;
        for (double x : l) sum_sq += x * x;
        EXPECT_NEAR(sum_sq, trace(rho.matrix() * spin_flip(rho)).real(), 1e-10);

        if (rank == 1) {
            for (int k = 1; k < 4; ++k) EXPECT_LE(l[k], 1e-8);
        }
    }
}

TEST(Concurrence, PaperValues) {
    EXPECT_NEAR(concurrence(bell(BellKind::PhiPlus)), 1.0, 1e-12);
    EXPECT_NEAR(tangle(bell(BellKind::PhiPlus)), 1.0, 1e-12);
    EXPECT_LE(concurrence(werner(1.0 / 3.0)), 1e-12);
    for (int i = 0; i <= 100; ++i) {
        const double g = i / 100.0;
        EXPECT_NEAR(concurrence(mems(g)), g, 1e-12);
        EXPECT_NEAR(tangle(mems(g)), g * g, 1e-12);
    }
}

TEST(Eof, Values) {
    EXPECT_NEAR(eof(bell(BellKind::PsiMinus)), 1.0, 1e-12);
    EXPECT_EQ(eof(maximally_mixed()), 0.0);
    // h((1 + sqrt(1 - 0.64)) / 2) = h(0.8)
    EXPECT_NEAR(eof(mems(0.8)), 0.7219280948873623, 1e-12);
    EXPECT_EQ(binary_entropy(0.0), 0.0);
    EXPECT_EQ(binary_entropy(1.0), 0.0);
}

TEST(Eof, StrictlyIncreasingInTangle) {
    double prev = eof_from_tangle(0.0);
    for (int i = 1; i <= 1000; ++i) {
        const double e = eof_from_tangle(i / 1000.0);
        EXPECT_GT(e, prev) << "tau=" << i / 1000.0;
        prev = e;
    }
}

TEST(LinearEntropy, Values) {
    EXPECT_NEAR(linear_entropy(bell(BellKind::PhiMinus)), 0.0, 1e-14);
    EXPECT_NEAR(linear_entropy(pure_from_vector({1.0, Complex(0.0, 2.0), 0.5, -1.0})), 0.0, 1e-14);
    EXPECT_DOUBLE_EQ(linear_entropy(maximally_mixed()), 1.0);
    for (int i = 0; i <= 50; ++i) {
        const double g = i / 50.0;
        EXPECT_NEAR(purity(werner(g)), (1.0 + 3.0 * g * g) / 4.0, 1e-14);
        EXPECT_NEAR(linear_entropy(werner(g)), 1.0 - g * g, 1e-14);
    }
}

TEST(VonNeumann, Values) {
    EXPECT_NEAR(von_neumann_entropy(bell(BellKind::PhiPlus)), 0.0, 1e-12);
    EXPECT_NEAR(von_neumann_entropy(maximally_mixed()), std::log(4.0), 1e-14);
    EXPECT_NEAR(von_neumann_entropy(werner(1.0 / 3.0)), 1.2424533248940002, 1e-12);
    EXPECT_NEAR(von_neumann_normalized(maximally_mixed()), 1.0, 1e-14);
}

TEST(Negativity, Values) {
    EXPECT_NEAR(negativity(bell(BellKind::PhiPlus)), 0.5, 1e-14);
    EXPECT_EQ(negativity(maximally_mixed()), 0.0);
    for (int i = 0; i <= 30; ++i) {
        const double g = i / 30.0;
        EXPECT_NEAR(negativity(werner(g)), std::max(0.0, (3.0 * g - 1.0) / 4.0), 1e-13);
    }
}

TEST(MeasureReport, Examples) {
    const auto w = measure_report(werner(1.0));
    EXPECT_NEAR(w.purity, 1.0, 1e-14);
    EXPECT_NEAR(w.linear_entropy, 0.0, 1e-14);
    EXPECT_NEAR(w.tangle, 1.0, 1e-12);
    EXPECT_NEAR(w.eof, 1.0, 1e-12);

    const auto m = measure_report(mems(0.0));
    EXPECT_NEAR(m.tangle, 0.0, 1e-15);
    EXPECT_NEAR(m.linear_entropy, 8.0 / 9.0, 1e-14);

    const auto mm = measure_report(maximally_mixed());
    EXPECT_DOUBLE_EQ(mm.purity, 0.25);
    EXPECT_DOUBLE_EQ(mm.linear_entropy, 1.0);
    EXPECT_EQ(mm.tangle, 0.0);
    EXPECT_EQ(mm.eof, 0.0);
}

TEST(MeasureReport, InternalConsistencyAndRanges) {
    Rng rng(4);
    for (int i = 0; i < 500; ++i) {
        const auto r = measure_report(ginibre_state(rng, 1 + i % 4));
        EXPECT_NEAR(r.linear_entropy, 4.0 / 3.0 * (1.0 - r.purity), 1e-12);
        EXPECT_NEAR(r.tangle, r.concurrence * r.concurrence, 1e-12);
        EXPECT_GE(r.purity, 0.25 - 1e-12);
        EXPECT_LE(r.purity, 1.0 + 1e-12);
        EXPECT_LE(r.von_neumann, std::log(4.0) + 1e-12);
        EXPECT_LE(r.negativity, 0.5 + 1e-12);
        EXPECT_LE(r.eof, 1.0 + 1e-12);
    }
}

TEST(Properties, LocalUnitaryInvariance) {
    Rng rng(31);
    for (int i = 0; i < 300; ++i) {
        const auto rho = ginibre_state(rng, 4);
        const auto rotated = rotate_locally(rho, haar_unitary2(rng), haar_unitary2(rng));
        const auto a = measure_report(rho);
        const auto b = measure_report(rotated);
        EXPECT_NEAR(a.tangle, b.tangle, 1e-9);
        EXPECT_NEAR(a.concurrence, b.concurrence, 1e-9);
        EXPECT_NEAR(a.eof, b.eof, 1e-9);
        EXPECT_NEAR(a.purity, b.purity, 1e-9);
        EXPECT_NEAR(a.linear_entropy, b.linear_entropy, 1e-9);
        EXPECT_NEAR(a.von_neumann, b.von_neumann, 1e-9);
        EXPECT_NEAR(a.negativity, b.negativity, 1e-9);
    }
}

TEST(Properties, ConcurrenceAndNegativityAgreeOnSeparability) {
    Rng rng(8);
    int entangled = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto rho = ginibre_state(rng, 4);
        const double c = concurrence(rho);
        const double n = negativity(rho);
        if (c <= 1e-7 && n <= 1e-7) continue;
        EXPECT_TRUE(c > 1e-7 && n > 1e-7) << "C=" << c << " N=" << n;
        ++entangled;
    }
    EXPECT_GT(entangled, 0);
}

TEST(Properties, AnsatzClosedForms) {
    Rng rng(55);
    std::exponential_distribution<double> expo(1.0);
    for (int i = 0; i < 1000; ++i) {
        std::array<double, 5> w{};
        double total = 0.0;
        for (auto& v : w) total += (v = expo(rng));
        AnsatzParams p{w[0] / total, w[1] / total, w[2] / total, w[3] / total, 0.0};
        p.gamma = 1.0 - (p.x + p.y + p.a + p.b);
        if (i % 5 == 0) { // boundary b = 0 family
            p.gamma += p.b;
            p.b = 0.0;
        }
        const auto rho = ansatz(p);
        const double c_closed = std::max(p.gamma - 2.0 * std::sqrt(p.a * p.b), 0.0);
        const double s_closed = 4.0 / 3.0 *
            (1.0 - p.a * p.a - p.b * p.b - p.x * p.x - p.y * p.y - p.gamma * (p.x + p.y) - p.gamma * p.gamma);
        EXPECT_NEAR(concurrence(rho), c_closed, 1e-10);
        EXPECT_NEAR(linear_entropy(rho), s_closed, 1e-10);
    }
}

TEST(Properties, MatchesBinaryEntropyClosedForm) {
    for (double t : {0.1, 0.3, 0.5, 0.9}) {
        const double p = (1.0 + std::sqrt(1.0 - t)) / 2.0;
        EXPECT_NEAR(eof_from_tangle(t), h2(p), 1e-15);
    }
}
