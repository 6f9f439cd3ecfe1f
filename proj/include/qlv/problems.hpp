#pragma once

#include "qlv/adversary.hpp"

// Worked problem generators with their certificates: the two-label state
// conversion instance, phase-oracle Boolean function evaluation, and unitary
// permutation inversion.

namespace qlv {

// Two labels, one oracle block, states in a two-dimensional 𝒦 with
// <ξ₀,ξ₁> = a and <τ₀,τ₁> = b. The optimal objectives (w₀, w₁) form the
// epigraph of the hyperbola √(w₀w₁) ≥ |a−b| / ‖O₀−O₁‖.
struct TwoLabelInstance {
    StateConversionProblem problem;
    double bound; // |a−b| / ‖O₀−O₁‖

    // Boundary point with ‖v₀‖² = w0 and ‖v₁‖² = bound²/w0, built on the
    // top singular pair of I − O₀*O₁ over a one-dimensional W.
    FeasibleSolution boundary_solution(double w0) const;

    cxd a, b;
    double sigma;    // ‖O₀−O₁‖ = ‖I−O₀*O₁‖
    Vector left;     // top singular pair of I − O₀*O₁
    Vector right;
};

TwoLabelInstance two_label(cxd a, cxd b, Matrix const &o0, Matrix const &o1);

// Boolean function evaluated in the phase, exactly and coherently: labels
// are the bitstrings of `domain` (bit i of x is the i-th character of the
// label), oracle block i is the 1x1 phase (−1)^{x_i}, and the task is
// |0⟩ ↦ (−1)^{f(x)}|0⟩ in a one-dimensional 𝒦. The Gram gap entry for a
// differing pair is 2·1_{f(x)≠f(y)} and Δ⁽ⁱ⁾ = 2·1_{x_i≠y_i}; both carry
// the same factor 2, so every λ-ratio already agrees with the halved
// convention in which gap and Δ entries are indicators.
StateConversionProblem boolean_problem(Index n, std::vector<Index> const &domain,
                                       std::vector<int> const &values);

// Permutations are stored 0-indexed as i ↦ π(i); the conventional cycles
// start at element 1, which is coordinate 0 here.
using Permutation = std::vector<Index>;

// True iff σ's cycle word starting at element 0 is π's word with the block
// W[k..ℓ−1] moved to the end (1 ≤ k < ℓ < n): the suffix cyclically
// shifted. Symmetric, never reflexive. Throws NotACycle unless both inputs
// are single n-cycles.
bool relation_check(Permutation const &pi, Permutation const &sigma);

// Spectral quantities of the adversary certificate for permutation
// inversion on C_n (m = (n−1)! single n-cycles, block matrices on C_n×[n]).
struct PermReport {
    double lam_gamma = 0;       // λmax(Γ) = (n−1)(n−2)/2
    double lam_minus_gamma = 0; // λmax(−Γ) ≤ n−2
    double norm_prime = 0;      // ‖Γ∘Δ′‖
    double lam_dblprime = 0;    // λmax(Γ∘Δ″) = λmax(−Γ)
    double lam_delta = 0;       // λmax(Γ∘Δ)
    double spalek = 0;          // row/column-count bound on ‖Γ∘Δ′‖
    double lam_exact = 0;       // λmax(Γ∘E) for exact outputs |π⁻¹(1)⟩
    double ratio = 0;           // lam_exact / lam_delta
};

struct PermInversion {
    Index n = 0;
    std::vector<Permutation> cycles; // all single n-cycles
    Matrix gamma;                    // Γ[π,σ] = 1_{π↭σ}, m×m
    // Block matrices on C_n×[n]; block (π,σ) is n×n.
    Matrix deltas;         // I − O_π*O_σ for every pair
    Matrix delta_prime;    // Δ minus its (π⁻¹(1), σ⁻¹(1)) entry, related pairs
    Matrix delta_dblprime; // −e_{π⁻¹(1)} e_{σ⁻¹(1)}ᵀ on related pairs
    Matrix e_exact;        // E[π,σ] = 1 − 1_{π⁻¹(1)=σ⁻¹(1)}, m×m
    PermReport report;
};

PermInversion perm_inversion(Index n); // 3 ≤ n ≤ 7

// For a matrix with entries in {0, ±1}: max over nonzero (i,j) of √(R_i C_j)
// with R_i, C_j the nonzero counts of row i and column j. Upper-bounds the
// spectral norm; 0 on the all-zero matrix. Other entries: EntryDomainError.
double spalek_bound(Matrix const &a);

} // namespace qlv
