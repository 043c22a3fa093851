// Local diagonal filters (A x B with A = diag(a0, a1), B = diag(b0, b1))
// and the concentration trajectories they generate.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <tuple>
#include <vector>

#include "memslab/error.hpp"
#include "memslab/measures.hpp"
#include "memslab/parallel.hpp"
#include "memslab/states.hpp"

namespace memslab {

namespace tol {
inline constexpr double kVanishingSuccess = 1e-14;
inline constexpr double kTangleTie = 1e-12;
} // namespace tol

class LocalFilter {
public:
    /// Every entry must lie in (0, 1]; throws OutOfRange otherwise.
    LocalFilter(double a0, double a1, double b0, double b1) : d_{a0, a1, b0, b1} {
        for (double v : d_) {
            if (!(v > 0.0 && v <= 1.0)) {
                std::ostringstream msg;
                msg << "filter entry " << v << " is outside (0, 1]";
                throw Error(ErrorKind::OutOfRange, msg.str());
            }
        }
    }

    static LocalFilter identity() { return {1.0, 1.0, 1.0, 1.0}; }

    /// A = diag(kappa, 1), B = diag(1, kappa): damps |01> twice as hard as |00>, |11>.
    static LocalFilter symmetric(double kappa) { return {kappa, 1.0, 1.0, kappa}; }

    /// A = diag(kappa, 1), B = I.
    static LocalFilter one_sided(double kappa) { return {kappa, 1.0, 1.0, 1.0}; }

    double a0() const noexcept { return d_[0]; }
    double a1() const noexcept { return d_[1]; }
    double b0() const noexcept { return d_[2]; }
    double b1() const noexcept { return d_[3]; }
    const std::array<double, 4>& entries() const noexcept { return d_; }

    /// Diagonal of A x B in the |00>, |01>, |10>, |11> basis.
    std::array<double, 4> kron_diagonal() const noexcept {
        return {d_[0] * d_[2], d_[0] * d_[3], d_[1] * d_[2], d_[1] * d_[3]};
    }

    /// Applying `this` then `next` equals applying the entrywise product.
    LocalFilter then(const LocalFilter& next) const {
        return {d_[0] * next.d_[0], d_[1] * next.d_[1], d_[2] * next.d_[2], d_[3] * next.d_[3]};
    }

    friend bool operator==(const LocalFilter&, const LocalFilter&) = default;
    friend auto operator<=>(const LocalFilter&, const LocalFilter&) = default;

private:
    std::array<double, 4> d_;
};

struct FilterOutcome {
    DensityMatrix state;
    double success_prob = 1.0;
};

/// rho' = K rho K / p with K = A x B and p = Tr[K rho K].
/// Throws VanishingSuccess when p <= 1e-14.
inline FilterOutcome apply_filter(const DensityMatrix& rho, const LocalFilter& f) {
    const auto k = f.kron_diagonal();
    CMat4 m;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m(i, j) = k[i] * k[j] * rho(i, j);
    double p = 0.0;
    for (std::size_t i = 0; i < 4; ++i) p += m(i, i).real();
    if (!(p > tol::kVanishingSuccess)) {
        std::ostringstream msg;
        msg << "filter success probability " << p << " <= " << tol::kVanishingSuccess;
        throw Error(ErrorKind::VanishingSuccess, msg.str());
    }
    return {make_density(m * (1.0 / p)), std::min(p, 1.0)};
}

struct TrajectoryPoint {
    std::size_t step = 0; // position in the schedule
    double s_linear = 0.0;
    double tangle = 0.0;
    double success_prob = 0.0;
};

/// Measures apply_filter(start, f) for each f of the schedule, in order.
/// Filters with vanishing success probability are skipped.
inline std::vector<TrajectoryPoint> trajectory(const DensityMatrix& start, std::span<const LocalFilter> schedule) {
    if (schedule.empty()) throw Error(ErrorKind::OutOfRange, "trajectory needs a non-empty schedule");
    std::vector<TrajectoryPoint> out;
    out.reserve(schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        try {
            const auto res = apply_filter(start, schedule[i]);
            out.push_back({i, linear_entropy(res.state), tangle(res.state), res.success_prob});
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::VanishingSuccess) throw;
        }
    }
    return out;
}

enum class FilterMode { TwoSided, OneSided };

/// kappa_i = 1e-3^(i / steps), i = 0..steps: steps + 1 values from 1 down to 1e-3.
inline std::vector<double> kappa_schedule(std::size_t steps, double kappa_end = 1e-3) {
    if (steps < 1) throw Error(ErrorKind::OutOfRange, "schedule needs at least one step");
    std::vector<double> out(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        out[i] = i == steps ? kappa_end : std::pow(kappa_end, static_cast<double>(i) / static_cast<double>(steps));
    return out;
}

inline std::vector<LocalFilter> filter_schedule(std::span<const double> kappas, FilterMode mode) {
    std::vector<LocalFilter> out;
    out.reserve(kappas.size());
    for (double k : kappas) out.push_back(mode == FilterMode::TwoSided ? LocalFilter::symmetric(k) : LocalFilter::one_sided(k));
    return out;
}

/// The default concentration sweep: symmetric two-sided filters, 100 geometric steps.
inline std::vector<LocalFilter> default_schedule() {
    const auto k = kappa_schedule(100);
    return filter_schedule(k, FilterMode::TwoSided);
}

struct BestFilter {
    LocalFilter filter;
    FilterOutcome outcome;
};

/// Exhaustive search over (a0, a1, b0, b1) in {1/g, 2/g, ..., 1}^4 for the
/// largest output tangle. Ties (within 1e-12) go to the higher success
/// probability, then to the lexicographically smaller filter.
inline BestFilter best_filter(const DensityMatrix& start, std::size_t grid_resolution,
                              std::size_t threads = default_threads()) {
    if (grid_resolution < 2) throw Error(ErrorKind::OutOfRange, "grid resolution must be >= 2");
    const std::size_t g = grid_resolution;
    auto level = [g](std::size_t i) { return i + 1 == g ? 1.0 : static_cast<double>(i + 1) / static_cast<double>(g); };

    struct Candidate {
        LocalFilter filter;
        FilterOutcome outcome;
        double tangle;
    };
    auto better = [](const Candidate& a, const Candidate& b) {
        if (a.tangle > b.tangle + tol::kTangleTie) return true;
        if (b.tangle > a.tangle + tol::kTangleTie) return false;
        if (a.outcome.success_prob != b.outcome.success_prob) return a.outcome.success_prob > b.outcome.success_prob;
        return a.filter < b.filter;
    };

    std::vector<std::optional<Candidate>> per_a0(g);
    run_chunks(g, threads, [&](std::size_t i0) {
        std::optional<Candidate> best;
        for (std::size_t i1 = 0; i1 < g; ++i1)
            for (std::size_t j0 = 0; j0 < g; ++j0)
                for (std::size_t j1 = 0; j1 < g; ++j1) {
                    const LocalFilter f(level(i0), level(i1), level(j0), level(j1));
                    try {
                        auto res = apply_filter(start, f);
                        Candidate c{f, res, tangle(res.state)};
                        if (!best || better(c, *best)) best = std::move(c);
                    } catch (const Error& e) {
                        if (e.kind() != ErrorKind::VanishingSuccess) throw;
                    }
                }
        per_a0[i0] = std::move(best);
    });

    std::optional<Candidate> best;
    for (auto& c : per_a0)
        if (c && (!best || better(*c, *best))) best = std::move(c);
    if (!best) throw Error(ErrorKind::VanishingSuccess, "every filter on the grid annihilates the state");
    return {best->filter, best->outcome};
}

} // namespace memslab
