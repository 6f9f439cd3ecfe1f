#pragma once

#include <map>
#include <string>
#include <vector>

#include "qlv/numlin.hpp"

// Data model for oracles, problems, and complexity profiles, including the
// multi-oracle block structure and the blockwise squared norm.

namespace qlv {

enum class OracleKind { unitary, contraction, general };

std::string to_string(OracleKind k);
OracleKind oracle_kind_from_string(std::string const &s);

// A finite family of block-diagonal input operators O_x on M = ⊕_i M^(i),
// one per label x. Labels carry a fixed total order (declaration order);
// every matrix indexed by labels uses it.
class OracleFamily {
  public:
    OracleFamily(std::vector<std::string> labels, std::vector<Index> block_dims,
                 std::map<std::string, std::vector<Matrix>> operators,
                 OracleKind kind);

    std::vector<std::string> const &labels() const { return labels_; }
    std::vector<Index> const &block_dims() const { return block_dims_; }
    OracleKind kind() const { return kind_; }
    Index s() const { return static_cast<Index>(block_dims_.size()); }
    Index m_dim() const { return m_dim_; } // dim M = sum of block dims

    Index label_index(std::string const &x) const;
    std::vector<Matrix> const &blocks(std::string const &x) const;
    std::vector<Matrix> const &blocks_at(Index xi) const;

    // The full operator O_x = ⊕_i O_x^(i) as an m_dim-square matrix.
    Matrix full_operator(std::string const &x) const;

    // Family with every block adjointed (oracle access to O* instead of O).
    OracleFamily adjoint_family() const;

  private:
    std::vector<std::string> labels_;
    std::vector<Index> block_dims_;
    std::vector<std::vector<Matrix>> ops_; // label order
    OracleKind kind_;
    Index m_dim_;
};

// An element of M ⊗ W with the imposed decomposition v^(1) ⊕ ... ⊕ v^(s).
// Block i is stored as a block_dims[i] x w_dim matrix: rows index M^(i),
// columns index W.
struct BlockVector {
    std::vector<Matrix> blocks;

    Index w_dim() const { return blocks.empty() ? 0 : blocks[0].cols(); }
    Index s() const { return static_cast<Index>(blocks.size()); }

    static BlockVector zero(std::vector<Index> const &block_dims, Index w_dim);

    // Concatenation along the W axis (the ⊕ of Eq-style block norms).
    BlockVector concat_w(BlockVector const &other) const;
    // Zero-pad the W axis to a larger dimension.
    BlockVector pad_w(Index new_w) const;

    BlockVector scaled(cxd c) const;

    // Flatten to a single vector of dimension (dim M) * w_dim, blocks in
    // order, each block row-major (M index major, W index minor).
    Vector flatten() const;
    static BlockVector unflatten(Vector const &v,
                                 std::vector<Index> const &block_dims,
                                 Index w_dim);

    // Full inner product <this, other> over M ⊗ W.
    cxd inner(BlockVector const &other) const;
};

// Blockwise squared norm: entry i is the squared Euclidean norm of block i.
std::vector<double> dnorm_sq(BlockVector const &v);

// (O_x^(i) ⊗ I_W) applied blockwise.
BlockVector apply_oracle(OracleFamily const &fam, std::string const &x,
                         BlockVector const &v);

// State conversion ξ_x ↦ τ_x on input oracle O_x, all states in a k_dim
// output space 𝒦.
struct StateConversionProblem {
    OracleFamily oracles;
    Index k_dim;
    std::vector<Vector> xi;  // label order
    std::vector<Vector> tau; // label order

    StateConversionProblem(OracleFamily fam, Index k,
                           std::vector<Vector> xi_in,
                           std::vector<Vector> tau_in);

    Index d() const { return static_cast<Index>(xi.size()); }
};

enum class SubspaceKind { isometric, contraction };

// Implement a linear map T_x on a subspace 𝒦_x ⊆ 𝒦, specified by an
// orthonormal basis K_x (columns) and the matrix T_x on that basis.
struct SubspaceConversionProblem {
    OracleFamily oracles;
    Index k_dim;
    std::vector<Matrix> basis; // K_x: k_dim x dim(𝒦_x), orthonormal columns
    std::vector<Matrix> maps;  // T_x: k_dim x dim(𝒦_x)
    SubspaceKind kind;

    SubspaceConversionProblem(OracleFamily fam, Index k,
                              std::vector<Matrix> basis_in,
                              std::vector<Matrix> maps_in, SubspaceKind kind);
};

// D x s table of per-label, per-oracle Las Vegas complexities.
struct ComplexityProfile {
    std::vector<std::vector<double>> values; // [label][oracle block]

    ComplexityProfile() = default;
    explicit ComplexityProfile(std::vector<std::vector<double>> v);

    double total(Index x) const;
    double max_total() const;
};

// G_ξ - G_τ, the left side of the adversary constraint.
Matrix problem_gram_gap(StateConversionProblem const &p);

} // namespace qlv
