#pragma once

#include <functional>

#include "qlv/sim.hpp"

// The unidirectional relative gamma_2 machinery: feasible solutions and
// their residuals, extraction from algorithms, dual lower-bound
// certificates, bidirectional conversions, linear consistency, and
// subspace-conversion constraints.

namespace qlv {

// Per-label vectors v_x in M ⊗ W witnessing
// <xi_x, xi_y> - <tau_x, tau_y> = <v_x, ((I - O_x*O_y) ⊗ I_W) v_y>.
struct FeasibleSolution {
    Index w_dim = 0;
    std::vector<BlockVector> vectors; // label order

    void validate(std::vector<Index> const &block_dims) const;
};

// Per-label linear maps V_x from a subspace basis into M ⊗ W; column a is
// the image of basis column a.
struct OperatorSolution {
    Index w_dim = 0;
    std::vector<std::vector<BlockVector>> columns; // [label][basis column]
};

struct DualCertificate {
    Matrix gamma; // Hermitian on D

    explicit DualCertificate(Matrix g);
};

// Max over (x, y) of |<xi_x,xi_y> - <tau_x,tau_y> - <v_x, Delta_xy v_y>|.
double residual(FeasibleSolution const &sol, StateConversionProblem const &p);

// Row x = dnorm_sq(v_x).
ComplexityProfile objective_profile(FeasibleSolution const &sol);

// v_x = total_query(algo, O_x, xi_x). Requires algo to solve p within tol.
FeasibleSolution extract(QueryAlgorithm const &algo,
                         StateConversionProblem const &p,
                         double tol = Tol::unitary);

// Certificate evaluation: lam_E = λ_max(Γ∘E) with
// E[x,y] = <xi_x,xi_y> - <tau_x,tau_y>, lam_delta[i] = λ_max(Γ∘Δ^(i)) with
// Δ^(i)_xy = I - O_x^(i)*O_y^(i).
struct DualBound {
    double lam_E = 0.0;
    std::vector<double> lam_delta;
    // lam_E / Σ_i lam_delta[i]; +inf when the denominator is below eps_div.
    double bound_singleoracle = 0.0;

    // λ_max(Γ∘E) ≤ Σ_i λ_max(Γ∘Δ^(i)) · max_x P[x][i] + slack.
    bool tradeoff_ok(ComplexityProfile const &profile,
                     double slack = 1e-8) const;
};

DualBound dual_bound(DualCertificate const &cert,
                     StateConversionProblem const &p);

// Replace every oracle block O^(i) by O^(i) ⊕ O^(i)*; states unchanged.
// Unidirectional access to the lifted family simulates bidirectional access
// to the original one.
StateConversionProblem lift_bidirectional(StateConversionProblem const &p);

// Pair (u_x, v_x) witnessing the bidirectional constraints
// e_xy = <u_x, (Delta_xy ⊗ I_W) v_y>.
struct BidirectionalSolution {
    Index w_dim = 0;
    std::vector<BlockVector> u; // label order
    std::vector<BlockVector> v;
};

// From a bidirectional pair for p to a feasible solution of
// lift_bidirectional(p): block i of the result is
// ((u+v)^(i) over (O_x^(i)(u-v)^(i))) / 2, so
// dnorm_sq = (dnorm_sq(u) + dnorm_sq(v)) / 2.
FeasibleSolution bidir_to_unidir(BidirectionalSolution const &bi,
                                 StateConversionProblem const &p,
                                 double tol = Tol::unitary);

// Inverse direction: split each lifted block into its O- and O*-halves
// v', v'' and return u_x = v' ⊕ O_x* v'', v_x = v' ⊕ [-O_x* v''] (W
// doubles); dnorm_sq(u_x) = dnorm_sq(v_x) = dnorm_sq(lifted v_x).
BidirectionalSolution unidir_to_bidir(FeasibleSolution const &sol,
                                      StateConversionProblem const &p,
                                      double tol = Tol::unitary);

// Feasible solution for an abstract instance given by the gap matrix e
// (Hermitian, zero diagonal) and the constraint family deltas[x][y]
// (deltas[x][x] = 0): one fresh W coordinate per nonzero unordered pair,
// filled from the rescaled top singular triple of deltas[x][y]. The result
// is a single-block solution on the deltas' space.
FeasibleSolution feasible_from_offdiagonal(
    Matrix const &e, std::vector<std::vector<Matrix>> const &deltas,
    double tol = Tol::rank);

// Labels whose oracles agree within class_tol, grouped in label order.
std::vector<std::vector<Index>> oracle_classes(OracleFamily const &fam,
                                               double class_tol =
                                                   Tol::class_tol);

// True iff within every oracle class there is a linear map V_O with
// v_x = V_O xi_x (least-squares fit residual ≤ tol).
bool consistency_check(FeasibleSolution const &sol,
                       StateConversionProblem const &p,
                       double tol = Tol::class_tol);

// Project each v_x (x in an oracle class D_O) onto the span of the
// constraint directions ((I - O*O_y) ⊗ I_W) v_y (y outside the class) and
// the range of ((I - O*O) ⊗ I_W)^{1/2}. The output is feasible, linearly
// consistent per class, and dominates the input entrywise.
FeasibleSolution pareto_project(FeasibleSolution const &sol,
                                StateConversionProblem const &p,
                                double tol = Tol::unitary);

// Max over (x, y) of ||K_x*K_y - T_x*T_y - V_x* (Delta_xy ⊗ I_W) V_y||_max.
double subspace_residual(OperatorSolution const &vsol,
                         SubspaceConversionProblem const &sp);

// V_x xi for xi expressed in the K_x basis; xi outside the subspace beyond
// tol raises SubspaceError.
BlockVector restrict_to_state(OperatorSolution const &vsol,
                              SubspaceConversionProblem const &sp,
                              std::string const &x, Vector const &xi,
                              double tol = Tol::unitary);

} // namespace qlv
