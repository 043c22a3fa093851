// Compares the Werner and MEMS families at equal linear entropy and then
// concentrates mems(0.8) with a strong symmetric filter.

#include <cstdio>

#include "memslab/memslab.hpp"

int main() {
    using namespace memslab;

    std::printf("%8s %10s %12s %12s\n", "gamma_w", "S_L", "tau_werner", "tau_envelope");
    for (double gw : {0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
        const DensityMatrix w = werner(gw);
        const double s = linear_entropy(w);
        std::printf("%8.2f %10.6f %12.6f %12.6f\n", gw, s, tangle(w), envelope_tangle(MixednessMetric::Linear, s));
    }

    const auto out = apply_filter(mems(0.8), LocalFilter::symmetric(1e-3));
    std::printf("\nmems(0.8) filtered with kappa = 1e-3: tangle %.6f, S_L %.3g, success %.3g\n", tangle(out.state),
                linear_entropy(out.state), out.success_prob);
}
