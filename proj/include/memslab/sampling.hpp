// Seeded random two-qubit states.
//
// Streams: a batch of `count` samples is cut into fixed chunks of
// kChunkSize. Chunk c draws from its own std::mt19937_64 seeded with
// seed ^ splitmix64(c), so output depends only on (kind, count, seed) and
// never on the number of workers.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <variant>
#include <vector>

#include "memslab/error.hpp"
#include "memslab/measures.hpp"
#include "memslab/numerics.hpp"
#include "memslab/parallel.hpp"
#include "memslab/states.hpp"

namespace memslab {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline Rng chunk_rng(std::uint64_t seed, std::uint64_t chunk) { return Rng(seed ^ splitmix64(chunk)); }

inline Complex complex_gaussian(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

/// G G^dagger / Tr(G G^dagger) with G a 4 x rank matrix of standard complex
/// Gaussians. rank = 4 gives the Hilbert-Schmidt ensemble.
inline DensityMatrix ginibre_state(Rng& rng, int rank) {
    if (rank < 1 || rank > 4) throw Error(ErrorKind::OutOfRange, "ginibre rank must be in 1..4, got " + std::to_string(rank));
    for (;;) {
        std::array<std::array<Complex, 4>, 4> g{};
        for (int col = 0; col < rank; ++col)
            for (std::size_t row = 0; row < 4; ++row) g[row][col] = complex_gaussian(rng);
        CMat4 m;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i; j < 4; ++j) {
                Complex s{};
                for (int k = 0; k < rank; ++k) s += g[i][k] * std::conj(g[j][k]);
                m(i, j) = s;
                m(j, i) = std::conj(s);
            }
        const double tr = trace(m).real();
        if (!(tr > 0.0)) continue;
        for (std::size_t i = 0; i < 4; ++i) m(i, i) = m(i, i).real();
        return make_density(m * (1.0 / tr));
    }
}

inline std::array<Complex, 4> haar_vector(Rng& rng) {
    std::array<Complex, 4> psi{};
    for (auto& v : psi) v = complex_gaussian(rng);
    return psi;
}

/// Haar-random 2x2 unitary (Gram-Schmidt on a complex Gaussian matrix).
inline CMat2 haar_unitary2(Rng& rng) {
    for (;;) {
        Complex a = complex_gaussian(rng), b = complex_gaussian(rng);
        Complex c = complex_gaussian(rng), d = complex_gaussian(rng);
        const double n1 = std::sqrt(std::norm(a) + std::norm(c));
        if (!(n1 > 1e-12)) continue;
        a /= n1;
        c /= n1;
        const Complex proj = std::conj(a) * b + std::conj(c) * d;
        b -= proj * a;
        d -= proj * c;
        const double n2 = std::sqrt(std::norm(b) + std::norm(d));
        if (!(n2 > 1e-12)) continue;
        b /= n2;
        d /= n2;
        return CMat2::from_rows({{a, b}, {c, d}});
    }
}

/// Convex mixture of m Haar-random pure states with flat Dirichlet weights.
inline DensityMatrix pure_mixture_state(Rng& rng, int m) {
    if (m < 1 || m > 6) throw Error(ErrorKind::OutOfRange, "mixture size must be in 1..6, got " + std::to_string(m));
    std::exponential_distribution<double> expo(1.0);
    std::array<double, 6> w{};
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        w[i] = expo(rng);
        total += w[i];
    }
    CMat4 acc;
    for (int i = 0; i < m; ++i) acc += pure_from_vector(haar_vector(rng)).matrix() * (w[i] / total);
    return make_density(acc);
}

/// (1 - w) base + w * sample, the result stays physical by convexity.
inline DensityMatrix mix(const DensityMatrix& base, const DensityMatrix& other, double w) {
    return make_density(base.matrix() * (1.0 - w) + other.matrix() * w);
}

inline double uniform_weight(Rng& rng, double eps) {
    // w ~ U(0, eps]
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return eps * (1.0 - u(rng));
}

/// (1 - w) base + w * ginibre_state(rng, 4), w uniform on (0, eps].
inline DensityMatrix perturb_about(const DensityMatrix& base, double eps, Rng& rng) {
    if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorKind::OutOfRange, "perturbation eps must be in (0, 1]");
    const double w = uniform_weight(rng, eps);
    return mix(base, ginibre_state(rng, 4), w);
}

// ---------------------------------------------------------------------------
// Ensembles

namespace ensemble {
struct GinibreFull {};
struct GinibreRank {
    int rank = 4;
};
struct PureMixture {
    int components = 1;
};
struct PerturbAbout {
    DensityMatrix base;
    double eps = 0.05;
};
/// Perturbations about mems(gamma) with gamma drawn uniformly from [0, 1] per sample.
struct PerturbMemsFamily {
    double eps = 0.02;
};
} // namespace ensemble

using EnsembleKind = std::variant<ensemble::GinibreFull, ensemble::GinibreRank, ensemble::PureMixture,
                                  ensemble::PerturbAbout, ensemble::PerturbMemsFamily>;

class EnsembleSpec {
public:
    EnsembleSpec(EnsembleKind kind, std::size_t count, std::uint64_t seed)
        : kind_(std::move(kind)), count_(count), seed_(seed) {
        if (count_ < 1) throw Error(ErrorKind::OutOfRange, "ensemble count must be >= 1");
        std::visit(
            [](const auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, ensemble::GinibreRank>) {
                    if (k.rank < 1 || k.rank > 4) throw Error(ErrorKind::OutOfRange, "rank must be in 1..4");
                } else if constexpr (std::is_same_v<K, ensemble::PureMixture>) {
                    if (k.components < 1 || k.components > 6) throw Error(ErrorKind::OutOfRange, "mixture size must be in 1..6");
                } else if constexpr (std::is_same_v<K, ensemble::PerturbAbout> ||
                                     std::is_same_v<K, ensemble::PerturbMemsFamily>) {
                    if (!(k.eps > 0.0 && k.eps <= 1.0)) throw Error(ErrorKind::OutOfRange, "eps must be in (0, 1]");
                }
            },
            kind_);
    }

    const EnsembleKind& kind() const noexcept { return kind_; }
    std::size_t count() const noexcept { return count_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    EnsembleKind kind_;
    std::size_t count_;
    std::uint64_t seed_;
};

inline DensityMatrix draw(const EnsembleKind& kind, Rng& rng) {
    return std::visit(
        [&](const auto& k) -> DensityMatrix {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, ensemble::GinibreFull>) {
                return ginibre_state(rng, 4);
            } else if constexpr (std::is_same_v<K, ensemble::GinibreRank>) {
                return ginibre_state(rng, k.rank);
            } else if constexpr (std::is_same_v<K, ensemble::PureMixture>) {
                return pure_mixture_state(rng, k.components);
            } else if constexpr (std::is_same_v<K, ensemble::PerturbAbout>) {
                return perturb_about(k.base, k.eps, rng);
            } else {
                std::uniform_real_distribution<double> u(0.0, 1.0);
                return perturb_about(mems(u(rng)), k.eps, rng);
            }
        },
        kind);
}

inline constexpr std::size_t kChunkSize = 1024;

inline std::size_t chunk_count(const EnsembleSpec& spec) noexcept {
    return (spec.count() + kChunkSize - 1) / kChunkSize;
}

/// Calls fn(index, rho) for every sample of chunk c in index order.
template <class Fn>
void for_each_in_chunk(const EnsembleSpec& spec, std::size_t c, Fn&& fn) {
    Rng rng = chunk_rng(spec.seed(), c);
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(spec.count(), begin + kChunkSize);
    for (std::size_t i = begin; i < end; ++i) fn(i, draw(spec.kind(), rng));
}

struct Sample {
    DensityMatrix state;
    MeasureReport report;
};

/// Exactly spec.count() samples with full measure reports, in index order.
inline std::vector<Sample> sample_batch(const EnsembleSpec& spec, std::size_t threads = default_threads()) {
    const std::size_t chunks = chunk_count(spec);
    std::vector<std::vector<Sample>> parts(chunks);
    run_chunks(chunks, threads, [&](std::size_t c) {
        auto& part = parts[c];
        part.reserve(kChunkSize);
        for_each_in_chunk(spec, c, [&](std::size_t, const DensityMatrix& rho) {
            part.push_back(Sample{rho, measure_report(rho)});
        });
    });
    std::vector<Sample> out;
    out.reserve(spec.count());
    for (auto& part : parts)
        for (auto& s : part) out.push_back(std::move(s));
    return out;
}

} // namespace memslab
