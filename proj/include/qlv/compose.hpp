#pragma once

#include "qlv/sim.hpp"

// Composition calculus: build new algorithms from old with exact complexity
// bookkeeping (inversion, slicing, workspace/input extension, sequential and
// direct-sum composition, functional composition, tensor products).

namespace qlv {

// Inverse algorithm: U_0^* Õ U_1^* Õ ... U_T^*. For unitary oracles,
// apply(invert(a), O^*) = apply(a, O)^{-1} and the Las Vegas complexity of
// the inverse on tau = A(O)xi equals that of a on xi.
QueryAlgorithm invert(QueryAlgorithm const &algo);

// Re-express the algorithm with a different layout of (M ⊗ B) ⊕ C inside
// 𝓗 (same b_dim and c_dim): queries are conjugated by the coordinate
// permutation, the action is unchanged for every oracle.
QueryAlgorithm reembed(QueryAlgorithm const &algo,
                       std::vector<Index> const &new_layout);

// Sliced form: b_dim = 1 and T' = b_dim * T, realising
// O ⊗ I^• = (O⊕I⊕...)(I⊕O⊕...)... . Action and complexity profile are
// preserved for every oracle and input. Algorithms that never query
// (b_dim = 0) are collapsed to a 0-query stage list.
QueryAlgorithm slice(QueryAlgorithm const &algo);

// 𝒜 ⊕ I on 𝓗 ⊕ C^extra; appended coordinates join the skip part.
QueryAlgorithm extend_workspace(QueryAlgorithm const &algo, Index extra_dim);

// Oracle-space extension: the result expects oracles O' = O ⊕ O'' whose
// block i extends block i of the original (new_block_dims[i] >= old, extra
// trailing blocks allowed) and acts as the original on the original
// workspace, never touching the extension rows.
QueryAlgorithm extend_input(QueryAlgorithm const &algo,
                            std::vector<Index> const &new_block_dims);

// 𝓑 applied after 𝒜 (same workspace, same oracle space):
// apply = B(O) A(O), complexities add along the trajectory.
QueryAlgorithm sequential(QueryAlgorithm const &b, QueryAlgorithm const &a);

// 𝒜(O) ⊕ 𝓑(O) on 𝓗 ⊕ 𝓗', built as (I ⊕ 𝓑)(𝒜 ⊕ I).
QueryAlgorithm direct_sum(QueryAlgorithm const &a, QueryAlgorithm const &b);

// Functional composition 𝒜(𝓑(O)): every query of the sliced outer
// algorithm a is replaced by the inner algorithm b, whose workspace must be
// exactly a's oracle space.
QueryAlgorithm functional_compose(QueryAlgorithm const &a,
                                  QueryAlgorithm const &b);

// 𝒜(O) ⊗ 𝓑(O) on 𝓗 ⊗ 𝓗', built as (I ⊗ 𝓑)(𝒜 ⊗ I). Dense
// construction, desk scale only.
QueryAlgorithm tensor(QueryAlgorithm const &a, QueryAlgorithm const &b);

// A T=0 algorithm applying the given steps (helper for identity wrappers).
QueryAlgorithm trivial_algorithm(Index h_dim, StepList steps,
                                 std::vector<Index> block_dims);

} // namespace qlv
