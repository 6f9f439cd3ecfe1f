#pragma once

#include "qlv/adversary.hpp"

// Compile feasible solutions into query algorithms: the catalyst
// construction (approximate), the positive-definite exact construction, and
// the full exact chain.

namespace qlv {

struct ApproxCompilation {
    QueryAlgorithm algo;
    std::vector<Vector> xi_plus;  // label order, in the algorithm workspace
    std::vector<Vector> tau_plus; // gram-equal to xi_plus
};

// The catalyst algorithm: T queries on workspace 𝒦⊗𝒥 ⊕ 𝒱 with 𝒥 a
// T-register and 𝒱 ≅ M ⊗ W holding v_x/√T throughout. Transforms
// ξ⁺ = ξ ⊕ v/√T ↦ τ⁺ = τ ⊕ v/√T exactly; the state processed by each
// query is v_x/√T, so las_vegas(x) = dnorm_sq(v_x) independently of T and
// ‖ξ⁺ − ξ‖ = ‖v_x‖/√T.
ApproxCompilation compile_approx(StateConversionProblem const &p,
                                 FeasibleSolution const &sol, Index T,
                                 double tol = Tol::unitary);

struct PlainRun {
    QueryAlgorithm algo;
    std::vector<double> errors; // per label, ‖𝒜(O_x)ξ_x − τ_x(padded)‖
    Index T = 0;
};

// Run the catalyst algorithm on the plain (catalyst-free) inputs with
// T = ⌈4L/ε²⌉, L = max_x Σ_i dnorm_sq(v_x)[i]; for contraction oracles the
// final error is at most ε per label. v = 0 yields an exact 0-query
// rotation.
PlainRun run_plain(StateConversionProblem const &p,
                   FeasibleSolution const &sol, double eps,
                   double tol = Tol::unitary);

// Exact conversion when both G_ξ and G_τ are positive definite
// (min_eig ≥ posdef_margin): pick the smallest T with
// G_ξ − G_v/T and G_τ − G_v/T ⪰ posdef_margin/2, run the catalyst on the
// shifted abstract states, and wrap with Gram-matched rotations. Las Vegas
// complexity is dnorm_sq(v_x) exactly.
QueryAlgorithm compile_exact_posdef(StateConversionProblem const &p,
                                    FeasibleSolution const &sol,
                                    double tol = Tol::unitary);

// Exact conversion for unitary oracles with no positivity assumption:
// route G_ξ and G_τ into the positive-definite cone near the reference
// matrix M (diagonal for distinct oracles, block-diagonal per oracle class
// otherwise) and chain
//   G_ξ ↦ (1−ε)G_ξ+εM′ ↦ (1−ε)G_ξ+εM″ ↦ (1−ε)G_τ+εM″ ↦ G_τ
// with ε halved from 1/4 until the overhead fits under delta;
// |L_x[i] − dnorm_sq(v_x)[i]| ≤ delta. Raises IndependenceViolation when a
// class block of M is singular and BudgetExceeded when the ε schedule (or
// an internal query budget) runs out.
QueryAlgorithm compile_exact(StateConversionProblem const &p,
                             FeasibleSolution const &sol, double delta,
                             double tol = Tol::unitary,
                             Index max_queries = 50000);

} // namespace qlv
