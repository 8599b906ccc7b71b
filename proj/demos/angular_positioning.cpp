// Synthesizes a robust gain for the angular positioning system from two
// short experiments (one per vertex) and simulates it on a vertex mixture.

#include "ddmpc/ddmpc.hpp"

#include <iostream>

using namespace ddmpc;

int main() {
    const presets::Example e = presets::example_one();
    const std::vector<Dataset> data = generate_datasets(e);
    for (const auto& d : data) std::cout << d.provenance << ": regressor rank " << regressor_rank(d) << "\n";

    SynthesisSettings s;
    s.verify.plant = e.truth;
    const SynthesisResult r = synthesize_polytopic(data, make_weights(e.Q, e.R), e.rows(), e.x0, s);
    if (!r.controller) {
        std::cout << "informativity not established: " << r.solution.message << "\n";
        return 1;
    }
    const Controller& c = *r.controller;
    std::cout << "K = " << c.K << "\nalpha = " << c.alpha << "\n";
    for (double rho : true_closed_loop_radii(e.truth, c.K)) std::cout << "vertex radius " << rho << "\n";

    for (double lambda : {0.0, 0.3, 0.85, 1.0}) {
        PolytopicPlant mix = std::get<PolytopicPlant>(e.truth);
        mix.mixing_weights << lambda, 1.0 - lambda;
        const SimResult sr = simulate(mix, c.K, e.x0, 2000, make_weights(e.Q, e.R), e.rows(), c.P);
        std::cout << "lambda " << lambda << ": J " << sr.total_cost << " <= " << c.alpha << ", max |u| "
                  << sr.inputs.cwiseAbs().maxCoeff() << ", converged at " << sr.convergence_step.value_or(0) << "\n";
    }
    return r.established() ? 0 : 1;
}
