// The tangle / mixedness plane: analytic Werner and MEMS curves, the MEMS
// envelope as a function of linear entropy, Monte Carlo scans and
// certification against that envelope, and a greedy boundary probe.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "memslab/error.hpp"
#include "memslab/measures.hpp"
#include "memslab/parallel.hpp"
#include "memslab/sampling.hpp"
#include "memslab/states.hpp"

namespace memslab {

enum class MixednessMetric { Linear, VonNeumannNormalized };

inline double mixedness(MixednessMetric metric, const DensityMatrix& rho) {
    return metric == MixednessMetric::Linear ? linear_entropy(rho) : von_neumann_normalized(rho);
}

struct CurvePoint {
    double gamma = 0.0;
    double tangle = 0.0;
    double s_linear = 0.0;
};

/// Linear entropy of mems(gamma): (2/3)[4 g (2 - 3 g) - gamma^2].
inline double mems_linear_entropy(double gamma) noexcept {
    const double g = mems_g(gamma);
    return 2.0 / 3.0 * (4.0 * g * (2.0 - 3.0 * g) - gamma * gamma);
}

namespace detail {
inline void require_points(std::size_t n) {
    if (n < 2) throw Error(ErrorKind::OutOfRange, "curve needs at least 2 points");
}
inline double grid(std::size_t i, std::size_t n) noexcept {
    return i + 1 == n ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
}
} // namespace detail

/// n closed-form MEMS points with gamma uniform on [0, 1].
inline std::vector<CurvePoint> mems_curve(std::size_t n) {
    detail::require_points(n);
    std::vector<CurvePoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double gamma = detail::grid(i, n);
        out.push_back({gamma, gamma * gamma, mems_linear_entropy(gamma)});
    }
    return out;
}

/// n Werner points, each obtained by building werner(gamma) and measuring it.
inline std::vector<CurvePoint> werner_curve(std::size_t n) {
    detail::require_points(n);
    std::vector<CurvePoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double gamma = detail::grid(i, n);
        const DensityMatrix rho = werner(gamma);
        out.push_back({gamma, tangle(rho), linear_entropy(rho)});
    }
    return out;
}

inline constexpr double kMemsBranchEntropy = 16.0 / 27.0;
inline constexpr double kMemsMaxEntropy = 8.0 / 9.0;

/// Largest tangle reachable at linear entropy s: the MEMS curve inverted.
/// Zero for s > 8/9. Only the linear metric has an analytic envelope.
inline double envelope_tangle(MixednessMetric metric, double s) {
    if (metric != MixednessMetric::Linear)
        throw Error(ErrorKind::UnsupportedMetric, "no analytic envelope for the von Neumann metric");
    if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::OutOfRange, "mixedness " + std::to_string(s) + " outside [0, 1]");
    if (s > kMemsMaxEntropy) return 0.0;
    if (s <= kMemsBranchEntropy) {
        // (8/3) gamma (1 - gamma) = s on gamma >= 2/3
        const double gamma = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - 1.5 * s)));
        return gamma * gamma;
    }
    // 8/9 - (2/3) gamma^2 = s on gamma < 2/3
    return std::max(0.0, 1.5 * (kMemsMaxEntropy - s));
}

/// Stable 64-bit FNV-1a digest of the matrix entries, as 16 hex digits.
inline std::string state_digest(const DensityMatrix& rho) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& v : rho.matrix().entries()) {
        for (double part : {v.real(), v.imag()}) {
            unsigned char bytes[sizeof(double)];
            std::memcpy(bytes, &part, sizeof(double));
            for (unsigned char b : bytes) {
                h ^= b;
                h *= 0x100000001b3ULL;
            }
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct EnvelopeBin {
    double lo = 0.0;
    double hi = 0.0;
    std::optional<double> max_tangle; // empty when no sample landed in the bin
    std::string witness_digest;
    std::size_t witness_index = 0;
};

struct FrontierEnvelope {
    MixednessMetric metric = MixednessMetric::Linear;
    std::vector<EnvelopeBin> bins;
    std::size_t samples_total = 0;

    std::size_t occupied() const noexcept {
        std::size_t n = 0;
        for (const auto& b : bins) n += b.max_tangle.has_value();
        return n;
    }
};

struct PlanePoint {
    double tangle = 0.0;
    double mixedness = 0.0;
};

inline std::size_t bin_index(double m, std::size_t bins) noexcept {
    const double c = std::clamp(m, 0.0, 1.0);
    return std::min(bins - 1, static_cast<std::size_t>(c * static_cast<double>(bins)));
}

/// Per-bin running maximum of the tangle over the ensemble. When `points`
/// is non-null it receives every (tangle, mixedness) pair in sample order.
inline FrontierEnvelope scan(const EnsembleSpec& spec, MixednessMetric metric, std::size_t bins,
                             std::vector<PlanePoint>* points = nullptr, std::size_t threads = default_threads()) {
    if (bins < 10) throw Error(ErrorKind::OutOfRange, "scan needs at least 10 bins");

    struct Best {
        double tangle = -1.0;
        std::size_t index = 0;
        std::optional<DensityMatrix> state;
    };
    const std::size_t chunks = chunk_count(spec);
    std::vector<std::vector<Best>> partial(chunks);
    std::vector<std::vector<PlanePoint>> chunk_points(points ? chunks : 0);

    run_chunks(chunks, threads, [&](std::size_t c) {
        auto& local = partial[c];
        local.assign(bins, Best{});
        for_each_in_chunk(spec, c, [&](std::size_t i, const DensityMatrix& rho) {
            const double t = tangle(rho);
            const double m = mixedness(metric, rho);
            if (points) chunk_points[c].push_back({t, m});
            auto& b = local[bin_index(m, bins)];
            if (t > b.tangle) b = Best{t, i, rho};
        });
    });

    FrontierEnvelope env;
    env.metric = metric;
    env.samples_total = spec.count();
    env.bins.resize(bins);
    std::vector<Best> merged(bins);
    for (const auto& local : partial)
        for (std::size_t k = 0; k < bins; ++k)
            if (local[k].tangle > merged[k].tangle) merged[k] = local[k];
    for (std::size_t k = 0; k < bins; ++k) {
        auto& out = env.bins[k];
        out.lo = static_cast<double>(k) / static_cast<double>(bins);
        out.hi = k + 1 == bins ? 1.0 : static_cast<double>(k + 1) / static_cast<double>(bins);
        if (merged[k].state) {
            out.max_tangle = merged[k].tangle;
            out.witness_index = merged[k].index;
            out.witness_digest = state_digest(*merged[k].state);
        }
    }
    if (points) {
        points->clear();
        points->reserve(spec.count());
        for (const auto& cp : chunk_points) points->insert(points->end(), cp.begin(), cp.end());
    }
    return env;
}

struct CertificationReport {
    double max_violation = -std::numeric_limits<double>::infinity();
    std::optional<DensityMatrix> violating_state; // set only when the verdict is FAIL
    std::size_t samples_total = 0;
    double tolerance = 0.0;

    bool passed() const noexcept { return max_violation <= tolerance; }

    /// Folds another report over a disjoint sample set into this one.
    void merge(const CertificationReport& other) {
        if (other.max_violation > max_violation) {
            max_violation = other.max_violation;
            violating_state = other.violating_state;
        }
        samples_total += other.samples_total;
    }
};

/// Signed excess of the state's tangle over the linear-entropy envelope.
inline double envelope_violation(const DensityMatrix& rho) {
    return tangle(rho) - envelope_tangle(MixednessMetric::Linear, linear_entropy(rho));
}

namespace detail {
inline void require_tolerance(double tolerance) {
    if (!(tolerance > 0.0)) throw Error(ErrorKind::OutOfRange, "certification tolerance must be > 0");
}
} // namespace detail

inline CertificationReport certify_states(std::span<const DensityMatrix> states, double tolerance) {
    detail::require_tolerance(tolerance);
    CertificationReport rep;
    rep.tolerance = tolerance;
    rep.samples_total = states.size();
    std::optional<DensityMatrix> worst;
    for (const auto& rho : states) {
        const double v = envelope_violation(rho);
        if (v > rep.max_violation) {
            rep.max_violation = v;
            worst = rho;
        }
    }
    if (!rep.passed()) rep.violating_state = worst;
    return rep;
}

/// Largest envelope violation over the ensemble (linear-entropy metric).
inline CertificationReport certify(const EnsembleSpec& spec, double tolerance, std::size_t threads = default_threads()) {
    detail::require_tolerance(tolerance);
    struct Worst {
        double violation = -std::numeric_limits<double>::infinity();
        std::optional<DensityMatrix> state;
    };
    const std::size_t chunks = chunk_count(spec);
    std::vector<Worst> partial(chunks);
    run_chunks(chunks, threads, [&](std::size_t c) {
        auto& w = partial[c];
        for_each_in_chunk(spec, c, [&](std::size_t, const DensityMatrix& rho) {
            const double v = envelope_violation(rho);
            if (v > w.violation) w = Worst{v, rho};
        });
    });
    CertificationReport rep;
    rep.tolerance = tolerance;
    rep.samples_total = spec.count();
    std::optional<DensityMatrix> worst;
    for (const auto& w : partial) {
        if (w.violation > rep.max_violation) {
            rep.max_violation = w.violation;
            worst = w.state;
        }
    }
    if (!rep.passed()) rep.violating_state = worst;
    return rep;
}

// ---------------------------------------------------------------------------
// Greedy boundary probe

struct HillClimbOptions {
    MixednessMetric metric = MixednessMetric::Linear;
    double band = 1e-3;      // allowed |mixedness - start mixedness|
    double eps_start = 0.1;  // perturbation weight bound, first step
    double eps_end = 1e-4;   // geometric schedule down to this at the last step
};

namespace detail {

// Projector onto the eigenvectors of rho with eigenvalue above 1e-9.
inline CMat4 support_projector(const DensityMatrix& rho) {
    const auto eig = hermitian_eig(rho.matrix());
    return eig.apply([](double x) { return x > 1e-9 ? 1.0 : 0.0; });
}

} // namespace detail

/// Greedy ascent in tangle inside the band |mixedness - mixedness(start)| <= band.
/// Each step mixes the current best with weight w ~ U(0, eps] into a random
/// state restricted to the current support (Ginibre rank cycling 1..4), and
/// keeps the candidate only if it stays in the band and raises the tangle.
/// On full-rank states this is exactly perturb_about with a rank-k sample.
inline DensityMatrix hill_climb(const DensityMatrix& start, std::size_t steps, Rng& rng,
                                const HillClimbOptions& opt = {}) {
    if (steps < 1) throw Error(ErrorKind::OutOfRange, "hill_climb needs at least one step");
    const double target = mixedness(opt.metric, start);
    DensityMatrix best = start;
    double best_tangle = tangle(start);
    CMat4 support = detail::support_projector(best);

    for (std::size_t i = 0; i < steps; ++i) {
        const double frac = steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(steps - 1);
        const double eps = opt.eps_start * std::pow(opt.eps_end / opt.eps_start, frac);
        const int rank = 1 + static_cast<int>(i % 4);

        CMat4 sigma = support * ginibre_state(rng, rank).matrix() * support;
        const double tr = trace(sigma).real();
        const double w = uniform_weight(rng, eps);
        if (!(tr > 1e-12)) continue;
        sigma = 0.5 * (sigma + adjoint(sigma)) * (1.0 / tr);

        const DensityMatrix candidate = make_density(best.matrix() * (1.0 - w) + sigma * w);
        if (std::abs(mixedness(opt.metric, candidate) - target) > opt.band) continue;
        const double t = tangle(candidate);
        if (t > best_tangle) {
            best = candidate;
            best_tangle = t;
            support = detail::support_projector(best);
        }
    }
    return best;
}

} // namespace memslab
