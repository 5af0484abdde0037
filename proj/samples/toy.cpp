// Three-node walk-through: solve each model kind, then simulate both policies.
#include <iostream>

#include "opsw/opsw.hpp"

int main() {
    using namespace opsw;
    Instance inst;
    inst.length_limit = 20.0;
    inst.nodes = {{0, 0, 0}, {10, 0, 10}, {3, 0, 5}};
    const auto w = apply_deviation(euclidean_weights(inst), 0.2);

    for (double theta : {0.0, 0.5, 1.0}) {
        const BoxUncertainty u(w, theta);
        for (auto f : {Formulation::OneStageRO, Formulation::StaticConcurrent}) {
            const auto sol = branch_and_bound(inst, u, f);
            std::cout << format_solution(sol) << "\n";
            for (auto policy : {Policy::Sequential, Policy::Concurrent}) {
                const auto s = simulate(inst, sol.path, w, 1000, 42, policy);
                std::cout << "  " << to_string(policy) << " mean=" << format_number(s.mean)
                          << " std=" << format_number(s.std) << "\n";
            }
        }
    }

    const auto model = build_static_concurrent(inst, w, 1.0);
    const auto r = enumerate_milp(model);
    std::cout << "static-conc MILP at theta=1: " << format_number(r.objective) << " (" << model.variable_count()
              << " variables, " << model.constraint_count() << " rows)\n";
}
