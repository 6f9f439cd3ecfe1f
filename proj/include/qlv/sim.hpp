#pragma once

#include "qlv/model.hpp"

// Query algorithm representation and execution. An algorithm is the
// alternating product U_T Õ U_{T-1} Õ ... U_1 Õ U_0 where Õ embeds the
// input oracle as (O ⊗ I^•) ⊕ I^∘ into the workspace 𝓗.
//
// Each inter-query unitary U_t is stored as a product of structured steps
// rather than a dense h x h matrix. The compilers emit algorithms whose
// workspace dimension grows with the query count T while every individual
// step touches only a small subspace; storing T dense unitaries would need
// O(T^3) memory.

namespace qlv {

// How (M ⊗ B) ⊕ C sits inside 𝓗. layout is a permutation of [0, h):
// the first m*b_dim entries give the coordinate of (M ⊗ B) basis state
// (i_m, i_b) at position i_m*b_dim + i_b (M major), the remaining c_dim
// entries the coordinates of C.
struct QueryEmbedding {
    Index b_dim = 1;
    Index c_dim = 0;
    std::vector<Index> layout;

    Index h_dim() const { return static_cast<Index>(layout.size()); }
    Index m_dim() const
    {
        return b_dim == 0 ? 0 : (h_dim() - c_dim) / b_dim;
    }
    Index mb_coord(Index i_m, Index i_b) const
    {
        return layout[i_m * b_dim + i_b];
    }
    Index c_coord(Index j) const { return layout[m_dim() * b_dim + j]; }

    void validate(Index h, Index m) const;

    // b_dim = 1, M at coordinates [0, m), C at [m, h), identity layout.
    static QueryEmbedding canonical_sliced(Index h, Index m);
    // b_dim = 0-equivalent: every query is skipped (c_dim = h).
    static QueryEmbedding all_skip(Index h);
};

// One structured unitary factor on 𝓗.
//   block: identity outside `coords`, the dense `mat` on them.
//   rotation: I + (qd - qs) qs^*, where qs and qd are h x r matrices with
//   orthonormal columns spanning the same subspace; maps column i of qs to
//   column i of qd and acts as the identity on the orthogonal complement.
struct Step {
    enum class Kind { block, rotation };
    Kind kind = Kind::block;
    std::vector<Index> coords; // block only
    Matrix mat;                // block: |coords| square unitary
    Matrix qs, qd;             // rotation: h x r

    static Step dense_block(std::vector<Index> coords, Matrix mat);
    static Step span_rotation(Matrix qs, Matrix qd);
    // Rotation mapping src_x to dst_x for Gram-matched collections,
    // identity on the orthogonal complement of their joint span.
    static Step matched_rotation(std::vector<Vector> const &src,
                                 std::vector<Vector> const &dst, double tol);

    Step adjoint() const;
    // Conjugate by a coordinate permutation: coordinate i becomes perm[i].
    Step relabeled(std::vector<Index> const &perm) const;
    Step extended(Index new_h, Index offset) const;

    void apply_in_place(Vector &state) const;
    Matrix dense(Index h) const;
};

using StepList = std::vector<Step>;

void apply_steps(StepList const &steps, Vector &state);
Matrix steps_dense(StepList const &steps, Index h);
StepList steps_adjoint(StepList const &steps);

struct QueryAlgorithm {
    Index h_dim = 0;
    QueryEmbedding embedding;
    std::vector<Index> oracle_block_dims;
    std::vector<StepList> stages; // size T+1; stages[t] is U_t

    Index T() const { return static_cast<Index>(stages.size()) - 1; }
    Index m_dim() const
    {
        Index m = 0;
        for (Index b : oracle_block_dims)
            m += b;
        return m;
    }

    void validate() const;

    // Algorithm from a dense unitary list (the JSON document form).
    static QueryAlgorithm from_unitaries(std::vector<Matrix> const &unitaries,
                                         QueryEmbedding embedding,
                                         std::vector<Index> block_dims);

    // U_t as a dense matrix (desk scale only).
    Matrix stage_dense(Index t) const;
};

// Apply the embedded oracle Õ = (O_x ⊗ I^•) ⊕ I^∘ to a state in place.
void apply_embedded_oracle(OracleFamily const &fam, Index x,
                           QueryEmbedding const &emb, Vector &state);

// Zero-pad a k-dim vector into 𝓗 (𝒦 is by convention the leading
// coordinates); passes h-dim vectors through unchanged.
Vector pad_to_workspace(Vector const &xi, Index h_dim);

// Full operator 𝒜(O_x) as an h_dim-square matrix.
Matrix apply(QueryAlgorithm const &algo, OracleFamily const &fam,
             std::string const &x);

// 𝒜(O_x) ξ by state-vector simulation.
Vector run(QueryAlgorithm const &algo, OracleFamily const &fam,
           std::string const &x, Vector const &xi);

// S_t(𝒜, O) ξ, the state just before the t-th query; t ranges over
// [1, T+1] with S_{T+1} = 𝒜(O) ξ.
Vector state_before_query(QueryAlgorithm const &algo, OracleFamily const &fam,
                          std::string const &x, Index t, Vector const &xi);

// Q_t(𝒜, O) ξ: the (M ⊗ B)-part of S_t ξ as a BlockVector, w_dim = b_dim.
BlockVector query_input(QueryAlgorithm const &algo, OracleFamily const &fam,
                        std::string const &x, Index t, Vector const &xi);

// Las Vegas complexity profile row: Σ_t dnorm_sq(Q_t ξ), one entry per
// oracle block.
std::vector<double> las_vegas(QueryAlgorithm const &algo,
                              OracleFamily const &fam, std::string const &x,
                              Vector const &xi);

// ⊕_t Q_t(𝒜, O) ξ: all processed query inputs concatenated along W.
BlockVector total_query(QueryAlgorithm const &algo, OracleFamily const &fam,
                        std::string const &x, Vector const &xi);

struct ConversionReport {
    std::vector<double> errors; // per label, ||𝒜(O_x)ξ_x - τ_x||
    bool pass = false;
    double max_error = 0.0;
};

// Per-label error of the state conversion 𝒜(O_x)ξ_x = τ_x with ξ, τ
// zero-padded into the leading k_dim coordinates of 𝓗.
ConversionReport check_state_conversion(QueryAlgorithm const &algo,
                                        StateConversionProblem const &p,
                                        double tol);

// Full Las Vegas profile over all labels, ξ_x taken from the problem.
ComplexityProfile las_vegas_profile(QueryAlgorithm const &algo,
                                    StateConversionProblem const &p);

} // namespace qlv
