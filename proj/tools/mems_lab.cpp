// mems_lab: command-line front end emitting CSV / key=value data for the
// tangle vs. mixedness plane and local-filter concentration.
//
// Exit codes: 0 success / PASS, 2 usage or input error, 3 certification FAIL.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "memslab/memslab.hpp"

namespace {

using namespace memslab;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCertifyFail = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    if (v == 0.0) v = 0.0; // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Writes to the named file, or stdout when the path is empty.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw UsageError("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

DensityMatrix family_state(const std::string& family, const std::optional<double>& gamma) {
    auto need_gamma = [&]() {
        if (!gamma) throw UsageError("--family " + family + " requires --gamma");
        return *gamma;
    };
    if (family == "werner") return werner(need_gamma());
    if (family == "mems") return mems(need_gamma());
    if (family == "bell-phi+") return bell(BellKind::PhiPlus);
    if (family == "bell-phi-") return bell(BellKind::PhiMinus);
    if (family == "bell-psi+") return bell(BellKind::PsiPlus);
    if (family == "bell-psi-") return bell(BellKind::PsiMinus);
    if (family == "mixed") return maximally_mixed();
    throw UsageError("unknown family '" + family + "'");
}

DensityMatrix read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    return make_density(parse_matrix_text(in));
}

// ---------------------------------------------------------------------------

struct EnsembleOptions {
    std::string ensemble = "ginibre";
    int rank = 4;
    int mixture = 2;
    std::optional<double> gamma;
    double eps = 0.02;
    std::size_t count = 30000;
    std::uint64_t seed = 0;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--ensemble", ensemble, "ginibre | ginibre-rank | pure-mixture | perturb-mems")
            ->check(CLI::IsMember({"ginibre", "ginibre-rank", "pure-mixture", "perturb-mems"}));
        cmd.add_option("--rank", rank, "Ginibre rank for ginibre-rank (1..4)");
        cmd.add_option("--mixture", mixture, "number of pure states for pure-mixture (1..6)");
        cmd.add_option("--gamma", gamma, "perturb-mems base gamma; omitted = gamma uniform on [0,1] per sample");
        cmd.add_option("--eps", eps, "perturbation weight bound in (0, 1]");
        cmd.add_option("--count", count, "number of samples");
        cmd.add_option("--seed", seed, "64-bit seed");
    }

    EnsembleSpec spec() const {
        EnsembleKind kind = ensemble::GinibreFull{};
        if (ensemble == "ginibre-rank") {
            kind = ensemble::GinibreRank{rank};
        } else if (ensemble == "pure-mixture") {
            kind = ensemble::PureMixture{mixture};
        } else if (ensemble == "perturb-mems") {
            if (gamma)
                kind = ensemble::PerturbAbout{mems(*gamma), eps};
            else
                kind = ensemble::PerturbMemsFamily{eps};
        }
        return EnsembleSpec(std::move(kind), count, seed);
    }
};

int cmd_measure(const std::string& input, const std::string& family, const std::optional<double>& gamma) {
    if (input.empty() == family.empty()) throw UsageError("measure needs exactly one of an input file or --family");
    const DensityMatrix rho = input.empty() ? family_state(family, gamma) : read_state_file(input);
    const MeasureReport r = measure_report(rho);
    std::cout << "purity=" << num(r.purity) << '\n'
              << "linear_entropy=" << num(r.linear_entropy) << '\n'
              << "von_neumann=" << num(r.von_neumann) << '\n'
              << "concurrence=" << num(r.concurrence) << '\n'
              << "tangle=" << num(r.tangle) << '\n'
              << "eof=" << num(r.eof) << '\n'
              << "negativity=" << num(r.negativity) << '\n';
    return kExitOk;
}

int cmd_curve(const std::string& family, std::size_t points, const std::string& out_path) {
    if (points < 2) throw UsageError("--points must be >= 2");
    std::vector<CurvePoint> curve;
    if (family == "mems")
        curve = mems_curve(points);
    else if (family == "werner")
        curve = werner_curve(points);
    else
        throw UsageError("curve family must be werner or mems");
    Output out(out_path);
    auto& os = out.stream();
    os << "gamma,tangle,linear_entropy\n";
    for (const auto& p : curve) os << num(p.gamma) << ',' << num(p.tangle) << ',' << num(p.s_linear) << '\n';
    return kExitOk;
}

MixednessMetric parse_metric(const std::string& m) {
    if (m == "linear") return MixednessMetric::Linear;
    if (m == "vn") return MixednessMetric::VonNeumannNormalized;
    throw UsageError("unknown metric '" + m + "'");
}

std::string default_envelope_path(const std::string& points_path) {
    const std::string ext = ".csv";
    if (points_path.size() > ext.size() && points_path.compare(points_path.size() - ext.size(), ext.size(), ext) == 0)
        return points_path.substr(0, points_path.size() - ext.size()) + ".envelope.csv";
    return points_path + ".envelope.csv";
}

int cmd_scan(const EnsembleOptions& ens, std::size_t bins, const std::string& metric_name, const std::string& out_path,
             std::string envelope_path) {
    if (out_path.empty()) throw UsageError("scan requires --out");
    if (bins < 10) throw UsageError("--bins must be >= 10");
    const MixednessMetric metric = parse_metric(metric_name);
    const EnsembleSpec spec = ens.spec();

    std::vector<PlanePoint> points;
    const FrontierEnvelope env = scan(spec, metric, bins, &points);

    {
        Output out(out_path);
        auto& os = out.stream();
        os << "tangle,mixedness\n";
        for (const auto& p : points) os << num(p.tangle) << ',' << num(p.mixedness) << '\n';
    }
    if (envelope_path.empty()) envelope_path = default_envelope_path(out_path);
    {
        Output out(envelope_path);
        auto& os = out.stream();
        os << "bin_lo,bin_hi,max_tangle\n";
        for (const auto& b : env.bins)
            if (b.max_tangle) os << num(b.lo) << ',' << num(b.hi) << ',' << num(*b.max_tangle) << '\n';
    }
    std::cerr << "scan: " << env.samples_total << " samples, " << env.occupied() << " occupied bins\n";
    return kExitOk;
}

int cmd_certify(const EnsembleOptions& ens, double tolerance, const std::string& family, const std::string& input) {
    if (!(tolerance > 0.0)) throw UsageError("--tolerance must be > 0");
    CertificationReport rep;
    if (!family.empty() || !input.empty()) {
        if (!family.empty() && !input.empty()) throw UsageError("use either --family or --input, not both");
        const DensityMatrix rho = input.empty() ? family_state(family, ens.gamma) : read_state_file(input);
        const std::vector<DensityMatrix> states(ens.count, rho);
        rep = certify_states(states, tolerance);
    } else {
        rep = certify(ens.spec(), tolerance);
    }
    std::cout << "samples=" << rep.samples_total << '\n'
              << "tolerance=" << num(rep.tolerance) << '\n'
              << "max_violation=" << num(rep.max_violation) << '\n'
              << "verdict=" << (rep.passed() ? "PASS" : "FAIL") << '\n';
    if (rep.violating_state) {
        std::cout << "# violating state\n";
        write_matrix_text(std::cout, rep.violating_state->matrix());
    }
    return rep.passed() ? kExitOk : kExitCertifyFail;
}

int cmd_concentrate(double gamma, std::size_t steps, const std::string& mode_name, const std::string& out_path) {
    if (steps < 1) throw UsageError("--steps must be >= 1");
    FilterMode mode;
    if (mode_name == "two-sided")
        mode = FilterMode::TwoSided;
    else if (mode_name == "one-sided")
        mode = FilterMode::OneSided;
    else
        throw UsageError("unknown mode '" + mode_name + "'");

    const DensityMatrix start = mems(gamma);
    const auto kappas = kappa_schedule(steps);
    const auto schedule = filter_schedule(kappas, mode);
    const auto traj = trajectory(start, schedule);

    Output out(out_path);
    auto& os = out.stream();
    os << "kappa,tangle,linear_entropy,success_prob\n";
    for (const auto& p : traj)
        os << num(kappas[p.step]) << ',' << num(p.tangle) << ',' << num(p.s_linear) << ',' << num(p.success_prob) << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mems_lab: two-qubit entanglement vs. mixedness toolkit"};
    app.require_subcommand(1);

    // measure
    std::string m_input, m_family;
    std::optional<double> m_gamma;
    auto* measure = app.add_subcommand("measure", "print all measures of one state as key=value lines");
    measure->add_option("input", m_input, "text matrix file (4 rows of 4 re,im entries)");
    measure->add_option("--family", m_family, "werner | mems | bell-phi+ | bell-phi- | bell-psi+ | bell-psi- | mixed");
    measure->add_option("--gamma", m_gamma, "family parameter in [0, 1]");

    // curve
    std::string c_family, c_out;
    std::size_t c_points = 101;
    auto* curve = app.add_subcommand("curve", "analytic Werner or MEMS curve as CSV");
    curve->add_option("--family", c_family, "werner | mems")->required();
    curve->add_option("--points", c_points, "number of gamma points (>= 2)");
    curve->add_option("--out", c_out, "output CSV (default stdout)");

    // scan
    EnsembleOptions s_ens;
    std::size_t s_bins = 100;
    std::string s_metric = "linear", s_out, s_env_out;
    auto* scan_cmd = app.add_subcommand("scan", "sample an ensemble: raw points and binned envelope CSVs");
    s_ens.add_to(*scan_cmd);
    scan_cmd->add_option("--bins", s_bins, "envelope bins over [0, 1] (>= 10)");
    scan_cmd->add_option("--metric", s_metric, "linear | vn (von Neumann / ln 4)");
    scan_cmd->add_option("--out", s_out, "points CSV path")->required();
    scan_cmd->add_option("--envelope-out", s_env_out, "envelope CSV path (default <out>.envelope.csv)");

    // certify
    EnsembleOptions v_ens;
    v_ens.count = 100000;
    v_ens.seed = 1;
    double v_tol = 1e-9;
    std::string v_family, v_input;
    auto* certify_cmd = app.add_subcommand("certify", "check sampled states against the MEMS envelope");
    v_ens.add_to(*certify_cmd);
    certify_cmd->add_option("--tolerance", v_tol, "allowed violation (> 0)");
    certify_cmd->add_option("--family", v_family, "certify a single named state instead of an ensemble");
    certify_cmd->add_option("--input", v_input, "certify a single state from a text matrix file");

    // concentrate
    double k_gamma = 0.0;
    std::size_t k_steps = 100;
    std::string k_mode = "two-sided", k_out;
    auto* conc = app.add_subcommand("concentrate", "local-filter concentration trajectory from mems(gamma)");
    conc->add_option("--gamma", k_gamma, "MEMS parameter in [0, 1]")->required();
    conc->add_option("--steps", k_steps, "geometric kappa steps from 1 to 1e-3 (>= 1)");
    conc->add_option("--mode", k_mode, "two-sided | one-sided");
    conc->add_option("--out", k_out, "output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*measure) return cmd_measure(m_input, m_family, m_gamma);
        if (*curve) return cmd_curve(c_family, c_points, c_out);
        if (*scan_cmd) return cmd_scan(s_ens, s_bins, s_metric, s_out, s_env_out);
        if (*certify_cmd) return cmd_certify(v_ens, v_tol, v_family, v_input);
        if (*conc) return cmd_concentrate(k_gamma, k_steps, k_mode, k_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
