#include "qlv/compose.hpp"

#include <numeric>

namespace qlv {

namespace {

// Permutation step: coordinate i goes to perm[i]. Returns an empty list for
// the identity.
StepList permutation_steps(std::vector<Index> const &perm)
{
    std::vector<Index> moved;
    for (Index i = 0; i < static_cast<Index>(perm.size()); ++i)
        if (perm[static_cast<size_t>(i)] != i)
            moved.push_back(i);
    if (moved.empty())
        return {};
    Index n = static_cast<Index>(moved.size());
    Matrix mat = Matrix::Zero(n, n);
    for (Index a = 0; a < n; ++a) {
        Index target = perm[static_cast<size_t>(moved[static_cast<size_t>(a)])];
        Index row = -1;
        for (Index b = 0; b < n; ++b)
            if (moved[static_cast<size_t>(b)] == target)
                row = b;
        if (row < 0)
            throw ShapeError("permutation step: not a permutation");
        mat(row, a) = 1.0;
    }
    return {Step::dense_block(std::move(moved), std::move(mat))};
}

std::vector<Index> inverse_perm(std::vector<Index> const &perm)
{
    std::vector<Index> inv(perm.size());
    for (size_t i = 0; i < perm.size(); ++i)
        inv[static_cast<size_t>(perm[i])] = static_cast<Index>(i);
    return inv;
}

StepList concat(StepList a, StepList const &b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Matrix kron(Matrix const &a, Matrix const &b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

// Swap two disjoint coordinate sets of equal size.
StepList swap_steps(std::vector<Index> const &a, std::vector<Index> const &b)
{
    if (a.size() != b.size())
        throw ShapeError("swap: coordinate sets of differing size");
    std::vector<Index> coords;
    coords.insert(coords.end(), a.begin(), a.end());
    coords.insert(coords.end(), b.begin(), b.end());
    Index n = static_cast<Index>(a.size());
    if (n == 0)
        return {};
    Matrix mat = Matrix::Zero(2 * n, 2 * n);
    for (Index i = 0; i < n; ++i) {
        mat(i, n + i) = 1.0;
        mat(n + i, i) = 1.0;
    }
    return {Step::dense_block(std::move(coords), std::move(mat))};
}

} // namespace

QueryAlgorithm trivial_algorithm(Index h_dim, StepList steps,
                                 std::vector<Index> block_dims)
{
    QueryAlgorithm algo;
    algo.h_dim = h_dim;
    algo.embedding = QueryEmbedding::all_skip(h_dim);
    algo.oracle_block_dims = std::move(block_dims);
    algo.stages.push_back(std::move(steps));
    algo.validate();
    return algo;
}

QueryAlgorithm invert(QueryAlgorithm const &algo)
{
    QueryAlgorithm out = algo;
    out.stages.clear();
    for (auto it = algo.stages.rbegin(); it != algo.stages.rend(); ++it)
        out.stages.push_back(steps_adjoint(*it));
    return out;
}

QueryAlgorithm reembed(QueryAlgorithm const &algo,
                       std::vector<Index> const &new_layout)
{
    if (new_layout.size() != algo.embedding.layout.size())
        throw ShapeError("reembed: layout size mismatch");
    QueryAlgorithm out = algo;
    out.embedding.layout = new_layout;
    out.embedding.validate(algo.h_dim, algo.m_dim());
    if (algo.T() == 0 || algo.embedding.b_dim == 0)
        return out;

    // rho maps the coordinate of role j under the old layout to its
    // coordinate under the new layout; the embedded oracles then satisfy
    // Õ_old = P^* Õ_new P with P the permutation matrix of rho.
    std::vector<Index> rho(algo.embedding.layout.size());
    for (size_t j = 0; j < rho.size(); ++j)
        rho[static_cast<size_t>(algo.embedding.layout[j])] = new_layout[j];
    StepList p = permutation_steps(rho);
    StepList p_inv = permutation_steps(inverse_perm(rho));

    out.stages[0] = concat(algo.stages[0], p);
    for (Index t = 1; t < algo.T(); ++t) {
        StepList relabeled;
        for (auto const &s : algo.stages[static_cast<size_t>(t)])
            relabeled.push_back(s.relabeled(rho));
        out.stages[static_cast<size_t>(t)] = std::move(relabeled);
    }
    out.stages[static_cast<size_t>(algo.T())] =
        concat(p_inv, algo.stages[static_cast<size_t>(algo.T())]);
    return out;
}

QueryAlgorithm slice(QueryAlgorithm const &algo)
{
    if (algo.embedding.b_dim == 0) {
        // no genuine queries: collapse to a 0-query algorithm
        StepList all;
        for (auto const &stage : algo.stages)
            all = concat(std::move(all), stage);
        return trivial_algorithm(algo.h_dim, std::move(all),
                                 algo.oracle_block_dims);
    }
    if (algo.embedding.b_dim == 1)
        return algo;

    Index d = algo.embedding.b_dim;
    Index m = algo.m_dim();
    auto const &emb = algo.embedding;

    auto slice_coords = [&](Index j) {
        std::vector<Index> c(static_cast<size_t>(m));
        for (Index i = 0; i < m; ++i)
            c[static_cast<size_t>(i)] = emb.mb_coord(i, j);
        return c;
    };
    std::vector<Index> slice0 = slice_coords(0);

    QueryAlgorithm out;
    out.h_dim = algo.h_dim;
    out.oracle_block_dims = algo.oracle_block_dims;
    out.embedding.b_dim = 1;
    out.embedding.c_dim = algo.h_dim - m;
    out.embedding.layout = slice0;
    for (Index j = 1; j < d; ++j)
        for (Index c : slice_coords(j))
            out.embedding.layout.push_back(c);
    for (Index j = 0; j < emb.c_dim; ++j)
        out.embedding.layout.push_back(emb.c_coord(j));
    out.embedding.validate(algo.h_dim, m);

    // O ⊗ I_d = S_{d-1} Õ S_{d-1} ... S_1 Õ S_1 Õ where Õ = O ⊕ I acts
    // on slice 0 and S_j swaps slice j with slice 0.
    out.stages.push_back(algo.stages[0]);
    for (Index t = 1; t <= algo.T(); ++t) {
        for (Index j = 1; j < d; ++j) {
            StepList between = swap_steps(slice0, slice_coords(j));
            if (j > 1)
                between = concat(swap_steps(slice0, slice_coords(j - 1)),
                                 std::move(between));
            out.stages.push_back(std::move(between));
        }
        StepList last;
        if (d > 1)
            last = swap_steps(slice0, slice_coords(d - 1));
        out.stages.push_back(
            concat(std::move(last), algo.stages[static_cast<size_t>(t)]));
    }
    out.validate();
    return out;
}

QueryAlgorithm extend_workspace(QueryAlgorithm const &algo, Index extra_dim)
{
    if (extra_dim < 0)
        throw ShapeError("extend_workspace: negative extension");
    if (extra_dim == 0)
        return algo;
    QueryAlgorithm out;
    out.h_dim = algo.h_dim + extra_dim;
    out.oracle_block_dims = algo.oracle_block_dims;
    out.embedding = algo.embedding;
    out.embedding.c_dim += extra_dim;
    for (Index j = 0; j < extra_dim; ++j)
        out.embedding.layout.push_back(algo.h_dim + j);
    for (auto const &stage : algo.stages) {
        StepList steps;
        for (auto const &s : stage)
            steps.push_back(s.extended(out.h_dim, 0));
        out.stages.push_back(std::move(steps));
    }
    out.validate();
    return out;
}

QueryAlgorithm extend_input(QueryAlgorithm const &algo,
                            std::vector<Index> const &new_block_dims)
{
    QueryAlgorithm base = slice(algo);
    auto const &old_dims = base.oracle_block_dims;
    if (new_block_dims.size() < old_dims.size())
        throw ShapeError("extend_input: fewer blocks than before");
    for (size_t i = 0; i < new_block_dims.size(); ++i) {
        Index old_b = i < old_dims.size() ? old_dims[i] : 0;
        if (new_block_dims[i] < old_b)
            throw ShapeError("extend_input: block shrunk");
    }
    Index m_old = base.m_dim();
    Index m_new = 0;
    for (Index b : new_block_dims)
        m_new += b;
    if (m_new == m_old && new_block_dims.size() == old_dims.size())
        return base;

    QueryAlgorithm out;
    out.h_dim = base.h_dim + (m_new - m_old);
    out.oracle_block_dims = new_block_dims;
    out.embedding.b_dim = base.embedding.b_dim; // 1, or 0 for query-free
    out.embedding.c_dim = out.h_dim - m_new * out.embedding.b_dim;

    // new M layout: per block, the old rows keep their coordinates and the
    // extension rows take fresh trailing coordinates
    std::vector<Index> mpart;
    Index fresh = base.h_dim;
    Index old_row = 0;
    for (size_t i = 0; i < new_block_dims.size(); ++i) {
        Index old_b = i < old_dims.size() ? old_dims[i] : 0;
        for (Index r = 0; r < old_b; ++r, ++old_row)
            mpart.push_back(base.embedding.b_dim == 0
                                ? -1
                                : base.embedding.mb_coord(old_row, 0));
        for (Index r = old_b; r < new_block_dims[i]; ++r, ++fresh)
            mpart.push_back(fresh);
    }
    if (base.embedding.b_dim == 0) {
        // query-free algorithms keep skipping; extension is pure workspace
        out.embedding = QueryEmbedding::all_skip(out.h_dim);
    } else {
        out.embedding.layout = mpart;
        for (Index j = 0; j < base.embedding.c_dim; ++j)
            out.embedding.layout.push_back(base.embedding.c_coord(j));
    }
    for (auto const &stage : base.stages) {
        StepList steps;
        for (auto const &s : stage)
            steps.push_back(s.extended(out.h_dim, 0));
        out.stages.push_back(std::move(steps));
    }
    out.validate();
    return out;
}

QueryAlgorithm sequential(QueryAlgorithm const &b, QueryAlgorithm const &a)
{
    if (a.h_dim != b.h_dim)
        throw ShapeError("sequential: workspaces differ");
    QueryAlgorithm sa = slice(a);
    QueryAlgorithm sb = slice(b);
    bool qa = sa.embedding.b_dim != 0 && sa.T() > 0;
    bool qb = sb.embedding.b_dim != 0 && sb.T() > 0;
    if (qa && qb) {
        if (sa.oracle_block_dims != sb.oracle_block_dims)
            throw ShapeError("sequential: oracle spaces differ");
        sb = reembed(sb, sa.embedding.layout);
    }
    QueryAlgorithm out;
    out.h_dim = sa.h_dim;
    out.oracle_block_dims =
        qa || !qb ? sa.oracle_block_dims : sb.oracle_block_dims;
    out.embedding = qa ? sa.embedding
                       : (qb ? sb.embedding : sa.embedding);
    out.stages = sa.stages;
    out.stages.back() = concat(out.stages.back(), sb.stages[0]);
    for (Index t = 1; t <= sb.T(); ++t)
        out.stages.push_back(sb.stages[static_cast<size_t>(t)]);
    out.validate();
    return out;
}

QueryAlgorithm direct_sum(QueryAlgorithm const &a, QueryAlgorithm const &b)
{
    if (a.oracle_block_dims != b.oracle_block_dims)
        throw ShapeError("direct_sum: oracle spaces differ");
    Index h = a.h_dim + b.h_dim;
    QueryAlgorithm a2 = extend_workspace(slice(a), b.h_dim);

    QueryAlgorithm sb = slice(b);
    QueryAlgorithm b2;
    b2.h_dim = h;
    b2.oracle_block_dims = sb.oracle_block_dims;
    b2.embedding.b_dim = sb.embedding.b_dim;
    b2.embedding.c_dim = h - sb.m_dim() * sb.embedding.b_dim;
    b2.embedding.layout.clear();
    if (sb.embedding.b_dim == 0) {
        b2.embedding.c_dim = h;
        b2.embedding.layout.resize(static_cast<size_t>(h));
        std::iota(b2.embedding.layout.begin(), b2.embedding.layout.end(),
                  Index{0});
    } else {
        // b's roles shifted by a.h_dim, then a's coordinates as extra skips
        for (Index i = 0; i < sb.m_dim(); ++i)
            b2.embedding.layout.push_back(sb.embedding.mb_coord(i, 0) +
                                          a.h_dim);
        for (Index j = 0; j < sb.embedding.c_dim; ++j)
            b2.embedding.layout.push_back(sb.embedding.c_coord(j) + a.h_dim);
        for (Index j = 0; j < a.h_dim; ++j)
            b2.embedding.layout.push_back(j);
    }
    for (auto const &stage : sb.stages) {
        StepList steps;
        for (auto const &s : stage)
            steps.push_back(s.extended(h, a.h_dim));
        b2.stages.push_back(std::move(steps));
    }
    b2.validate();
    return sequential(b2, a2);
}

QueryAlgorithm functional_compose(QueryAlgorithm const &a,
                                  QueryAlgorithm const &b)
{
    if (a.embedding.b_dim != 1)
        throw NotSliced("functional composition needs a sliced outer "
                        "algorithm");
    if (b.h_dim != a.m_dim())
        throw ShapeError(
            "inner algorithm workspace must equal the outer oracle space");
    QueryAlgorithm sb = slice(b);

    // relabel the inner algorithm onto the outer oracle coordinates
    std::vector<Index> rel(static_cast<size_t>(b.h_dim));
    for (Index i = 0; i < b.h_dim; ++i)
        rel[static_cast<size_t>(i)] = a.embedding.mb_coord(i, 0);
    auto lift_stage = [&](StepList const &stage) {
        StepList lifted;
        for (auto const &s : stage) {
            Step t = s;
            if (t.kind == Step::Kind::block) {
                for (auto &c : t.coords)
                    c = rel[static_cast<size_t>(c)];
            } else {
                Matrix qs = Matrix::Zero(a.h_dim, t.qs.cols());
                Matrix qd = Matrix::Zero(a.h_dim, t.qd.cols());
                for (Index i = 0; i < b.h_dim; ++i) {
                    qs.row(rel[static_cast<size_t>(i)]) = t.qs.row(i);
                    qd.row(rel[static_cast<size_t>(i)]) = t.qd.row(i);
                }
                t.qs = std::move(qs);
                t.qd = std::move(qd);
            }
            lifted.push_back(std::move(t));
        }
        return lifted;
    };

    QueryAlgorithm out;
    out.h_dim = a.h_dim;
    out.oracle_block_dims = sb.oracle_block_dims;
    bool inner_queries = sb.embedding.b_dim != 0 && sb.T() > 0;
    if (inner_queries) {
        out.embedding.b_dim = 1;
        out.embedding.c_dim = a.h_dim - sb.m_dim();
        out.embedding.layout.clear();
        std::vector<bool> used(static_cast<size_t>(a.h_dim), false);
        for (Index i = 0; i < sb.m_dim(); ++i) {
            Index c = rel[static_cast<size_t>(sb.embedding.mb_coord(i, 0))];
            out.embedding.layout.push_back(c);
            used[static_cast<size_t>(c)] = true;
        }
        for (Index j = 0; j < a.h_dim; ++j)
            if (!used[static_cast<size_t>(j)])
                out.embedding.layout.push_back(j);
    } else {
        out.embedding = QueryEmbedding::all_skip(a.h_dim);
    }

    out.stages.push_back(a.stages[0]);
    for (Index t = 1; t <= a.T(); ++t) {
        // expand one outer query into the full inner algorithm
        out.stages.back() = concat(out.stages.back(), lift_stage(sb.stages[0]));
        for (Index j = 1; j <= sb.T(); ++j)
            out.stages.push_back(
                lift_stage(sb.stages[static_cast<size_t>(j)]));
        out.stages.back() =
            concat(out.stages.back(), a.stages[static_cast<size_t>(t)]);
    }
    out.validate();
    return out;
}

QueryAlgorithm tensor(QueryAlgorithm const &a, QueryAlgorithm const &b)
{
    if (a.oracle_block_dims != b.oracle_block_dims)
        throw ShapeError("tensor: oracle spaces differ");
    Index ha = a.h_dim, hb = b.h_dim;
    Index h = ha * hb;
    Index m = a.m_dim();

    std::vector<Index> all(static_cast<size_t>(h));
    std::iota(all.begin(), all.end(), Index{0});
    auto kron_algo = [&](QueryAlgorithm const &src, bool left) {
        QueryAlgorithm out;
        out.h_dim = h;
        out.oracle_block_dims = src.oracle_block_dims;
        Index sb = src.embedding.b_dim;
        out.embedding.b_dim = left ? sb * hb : ha * sb;
        out.embedding.c_dim = h - m * out.embedding.b_dim;
        out.embedding.layout.clear();
        if (left) {
            // (O ⊗ I^b ⊕ I^c) ⊗ I_hb: B' = B ⊗ 𝓗_b
            for (Index im = 0; im < m; ++im)
                for (Index ib = 0; ib < sb; ++ib)
                    for (Index j = 0; j < hb; ++j)
                        out.embedding.layout.push_back(
                            src.embedding.mb_coord(im, ib) * hb + j);
            for (Index jc = 0; jc < src.embedding.c_dim; ++jc)
                for (Index j = 0; j < hb; ++j)
                    out.embedding.layout.push_back(
                        src.embedding.c_coord(jc) * hb + j);
        } else {
            // I_ha ⊗ (O ⊗ I^b ⊕ I^c): B' = 𝓗_a ⊗ B
            for (Index im = 0; im < m; ++im)
                for (Index ia = 0; ia < ha; ++ia)
                    for (Index ib = 0; ib < sb; ++ib)
                        out.embedding.layout.push_back(
                            ia * hb + src.embedding.mb_coord(im, ib));
            for (Index ia = 0; ia < ha; ++ia)
                for (Index jc = 0; jc < src.embedding.c_dim; ++jc)
                    out.embedding.layout.push_back(
                        ia * hb + src.embedding.c_coord(jc));
        }
        if (out.embedding.b_dim == 0)
            out.embedding = QueryEmbedding::all_skip(h);
        for (auto const &stage : src.stages) {
            Matrix u = steps_dense(stage, src.h_dim);
            Matrix big = left ? kron(u, Matrix::Identity(hb, hb))
                              : kron(Matrix::Identity(ha, ha), u);
            out.stages.push_back({Step::dense_block(all, std::move(big))});
        }
        out.validate();
        return out;
    };

    QueryAlgorithm a_big = slice(kron_algo(a, true));
    QueryAlgorithm b_big = slice(kron_algo(b, false));
    return sequential(b_big, a_big);
}

} // namespace qlv
