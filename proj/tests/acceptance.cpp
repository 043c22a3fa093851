// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "memslab/memslab.hpp"

using namespace memslab;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool ok = true;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double werner_tangle(double g) {
    const double c = std::max(0.0, (3.0 * g - 1.0) / 2.0);
    return c * c;
}

double mems_s_linear(double g) {
    const double gg = mems_g(g);
    return 2.0 / 3.0 * (4.0 * gg * (2.0 - 3.0 * gg) - g * g);
}

// 1. Both analytic curves pass through the fixed points of the plane.
Verdict curve_endpoints() {
    const auto t0 = std::chrono::steady_clock::now();
    double err = 0.0;
    auto at = [&](const CurvePoint& p, double tau, double s) {
        err = std::max({err, std::abs(p.tangle - tau), std::abs(p.s_linear - s)});
    };
    const auto m = mems_curve(101);
    at(m.back(), 1.0, 0.0);
    at(m.front(), 0.0, 8.0 / 9.0);
    const auto w = werner_curve(4); // 0, 1/3, 2/3, 1
    at(w.back(), 1.0, 0.0);
    at(w[1], 0.0, 8.0 / 9.0);
    const double dt = seconds_since(t0);
    return {err <= 1e-12 && dt < 1.0, fmt("max deviation %.3g, %.3f s", err, dt)};
}

// 2. Measured tangle and linear entropy against the closed forms.
Verdict closed_form_regression() {
    const auto t0 = std::chrono::steady_clock::now();
    double err = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double g = i / 100.0;
        const auto m = mems(g);
        err = std::max({err, std::abs(tangle(m) - g * g), std::abs(linear_entropy(m) - mems_s_linear(g))});
        const auto w = werner(g);
        err = std::max({err, std::abs(tangle(w) - werner_tangle(g)), std::abs(linear_entropy(w) - (1.0 - g * g))});
    }
    const double dt = seconds_since(t0);
    return {err <= 1e-12 && dt < 1.0, fmt("max deviation %.3g, %.3f s", err, dt)};
}

// 3. No sampled state rises above the linear-entropy envelope.
Verdict certification() {
    const auto t0 = std::chrono::steady_clock::now();
    const double tol = 1e-9;
    CertificationReport total;
    total.tolerance = tol;
    for (int k = 1; k <= 4; ++k)
        total.merge(certify(EnsembleSpec(ensemble::GinibreRank{k}, 25000, 100 + k), tol, 1));
    for (int i = 1; i <= 9; ++i) {
        const EnsembleSpec spec(ensemble::PerturbAbout{mems(i / 10.0), 0.02}, 10000, 200 + i);
        total.merge(certify(spec, tol, 1));
    }
    const double dt = seconds_since(t0);
    return {total.passed() && total.samples_total == 190000 && dt < 60.0,
            fmt("%.0f samples, max_violation %.3g, %.1f s single-threaded", double(total.samples_total),
                total.max_violation, dt)};
}

// 4. The envelope lies strictly above the Werner curve between the endpoints.
Verdict dominance() {
    const int n = 1000;
    double min_gap = 1.0, min_core = 1.0;
    for (int i = 1; i <= n; ++i) {
        const double gw = 1.0 / 3.0 + (2.0 / 3.0) * i / (n + 1.0);
        const double gap = envelope_tangle(MixednessMetric::Linear, 1.0 - gw * gw) - werner_tangle(gw);
        min_gap = std::min(min_gap, gap);
        if (gw >= 0.35 && gw <= 0.99) min_core = std::min(min_core, gap);
    }
    return {min_gap > 0.0 && min_core > 1e-3, fmt("min gap %.3g, min gap on [0.35, 0.99] %.3g", min_gap, min_core)};
}

// 5. Filtering concentrates MEMS towards a Bell state and improves every member.
Verdict concentration() {
    const double kappa = 1e-3, g = 0.8;
    const auto out = apply_filter(mems(g), LocalFilter::symmetric(kappa));
    const double gp = g / (g + (1.0 - g) * kappa * kappa);
    const double tau = tangle(out.state), s = linear_entropy(out.state);
    bool ok = tau >= 0.999 && s <= 1e-3 && std::abs(tau - gp * gp) <= 1e-12;
    int improved = 0;
    const auto schedule = default_schedule();
    for (int i = 1; i <= 9; ++i) {
        const double gi = i / 10.0;
        bool any = false;
        for (const auto& p : trajectory(mems(gi), schedule)) any |= p.tangle > gi * gi;
        improved += any;
    }
    ok = ok && improved == 9;
    return {ok, fmt("tangle %.9f, S_L %.3g, %.0f/9 gammas improved", tau, s, improved)};
}

// 6. Concurrence and negativity agree on which states are entangled.
Verdict cross_oracle() {
    const double band = 1e-7;
    Rng rng(606);
    int disagreements = 0, entangled = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto rho = ginibre_state(rng, 4);
        const bool c = concurrence(rho) > band, n = negativity(rho) > band;
        disagreements += c != n;
        entangled += c;
    }
    return {disagreements == 0, fmt("%.0f disagreements, %.0f/10000 entangled", disagreements, entangled)};
}

// 7. All reported quantities are invariant under local unitaries.
Verdict lu_invariance() {
    Rng rng(707);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto rho = ginibre_state(rng, 1 + i % 4);
        const CMat4 u = kron(haar_unitary2(rng), haar_unitary2(rng));
        CMat4 m = u * rho.matrix() * adjoint(u);
        m = (m + adjoint(m)) * 0.5;
        const auto a = measure_report(rho), b = measure_report(make_density(m));
        for (auto f : {&MeasureReport::purity, &MeasureReport::linear_entropy, &MeasureReport::von_neumann,
                       &MeasureReport::concurrence, &MeasureReport::tangle, &MeasureReport::eof,
                       &MeasureReport::negativity})
            worst = std::max(worst, std::abs(a.*f - b.*f));
    }
    return {worst <= 1e-9, fmt("max deviation %.3g over 1000 pairs", worst)};
}

// gamma' with von_neumann_normalized(mems(gamma')) == s; the entropy falls monotonically in gamma.
double mems_gamma_at_vn(double s) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (von_neumann_normalized(mems(mid)) > s ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// 8. Under von Neumann entropy some MEMS member is beaten at fixed mixedness.
Verdict vn_witness() {
    HillClimbOptions opt;
    opt.metric = MixednessMetric::VonNeumannNormalized;
    opt.band = 1e-3;
    for (int i = 3; i <= 6; ++i) {
        const double g = i / 10.0;
        const auto start = mems(g);
        Rng rng(800 + i);
        const auto end = hill_climb(start, 5000, rng, opt);
        const double gain = tangle(end) - tangle(start);
        if (!(gain > 1e-4) || std::abs(von_neumann_normalized(end) - von_neumann_normalized(start)) > opt.band)
            continue;

        const fs::path file = fs::current_path() / "mems_vn_witness.txt";
        {
            std::ofstream out(file);
            out << "# hill-climb witness from mems(" << g << "), normalized von Neumann entropy band 1e-3\n";
            write_matrix_text(out, end.matrix());
        }
        std::ifstream in(file);
        const auto back = make_density(parse_matrix_text(in));
        const double tau = tangle(back), s = von_neumann_normalized(back);
        const double gm = mems_gamma_at_vn(s);
        const bool reverified = back == end && std::abs(tau - tangle(start)) > 1e-4 && tau > gm * gm;
        char buf[320];
        std::snprintf(buf, sizeof buf,
                      "gamma %.1f: tangle %.6f -> %.6f (gain %.3g); MEMS at same entropy has %.6f; witness %s",
                      g, tangle(start), tau, tau - tangle(start), gm * gm, file.string().c_str());
        return {reverified, buf};
    }
    return {false, "no gamma in {0.3,...,0.6} yielded a gain above 1e-4"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// 9. scan output is byte-identical across runs and thread counts.
Verdict determinism() {
    const fs::path dir = fs::temp_directory_path() / "mems_lab_acceptance";
    fs::create_directories(dir);
    const std::string flags = " scan --ensemble ginibre --count 30000 --seed 7 --bins 100 --out ";
    std::vector<std::string> outputs;
    int failures = 0;
    for (const char* env : {"", "", "MEMS_LAB_THREADS=1 ", "MEMS_LAB_THREADS=4 "}) {
        const fs::path out = dir / ("run" + std::to_string(outputs.size()) + ".csv");
        const std::string cmd = std::string(env) + "\"" MEMS_LAB_BIN "\"" + flags + out.string() + " 2>/dev/null";
        const int status = std::system(cmd.c_str());
        failures += !(WIFEXITED(status) && WEXITSTATUS(status) == 0);
        fs::path env_out = out;
        env_out.replace_extension(".envelope.csv");
        outputs.push_back(slurp(out) + "\n--\n" + slurp(env_out));
    }
    fs::remove_all(dir);
    bool same = true;
    for (const auto& o : outputs) same = same && o == outputs.front();
    return {failures == 0 && same && outputs.front().size() > 30000,
            fmt("4 runs, %.0f failed, outputs ", failures) + (same ? "identical" : "DIFFER")};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"curve endpoints", curve_endpoints},
        {"closed-form regression", closed_form_regression},
        {"envelope certification", certification},
        {"dominance over Werner", dominance},
        {"concentration limit", concentration},
        {"concurrence/negativity agreement", cross_oracle},
        {"local-unitary invariance", lu_invariance},
        {"von Neumann non-optimality witness", vn_witness},
        {"scan determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.ok;
        std::printf("[%s] %zu. %s: %s\n", v.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
