#include "qlv/sim.hpp"

#include <algorithm>
#include <numeric>

namespace qlv {

void QueryEmbedding::validate(Index h, Index m) const
{
    if (b_dim < 0 || c_dim < 0)
        throw ShapeError("embedding: negative dimensions");
    if (m * b_dim + c_dim != h)
        throw ShapeError("embedding: m*b + c != h");
    if (static_cast<Index>(layout.size()) != h)
        throw ShapeError("embedding: layout size != h");
    std::vector<bool> seen(static_cast<size_t>(h), false);
    for (Index p : layout) {
        if (p < 0 || p >= h || seen[static_cast<size_t>(p)])
            throw ShapeError("embedding: layout is not a permutation");
        seen[static_cast<size_t>(p)] = true;
    }
}

QueryEmbedding QueryEmbedding::canonical_sliced(Index h, Index m)
{
    QueryEmbedding e;
    e.b_dim = 1;
    e.c_dim = h - m;
    e.layout.resize(static_cast<size_t>(h));
    std::iota(e.layout.begin(), e.layout.end(), Index{0});
    e.validate(h, m);
    return e;
}

QueryEmbedding QueryEmbedding::all_skip(Index h)
{
    QueryEmbedding e;
    e.b_dim = 0;
    e.c_dim = h;
    e.layout.resize(static_cast<size_t>(h));
    std::iota(e.layout.begin(), e.layout.end(), Index{0});
    return e;
}

Step Step::dense_block(std::vector<Index> coords, Matrix mat)
{
    if (mat.rows() != mat.cols() ||
        mat.rows() != static_cast<Index>(coords.size()))
        throw ShapeError("step: block size does not match coordinate count");
    require_unitary(mat);
    Step s;
    s.kind = Kind::block;
    s.coords = std::move(coords);
    s.mat = std::move(mat);
    return s;
}

Step Step::span_rotation(Matrix qs, Matrix qd)
{
    if (qs.rows() != qd.rows() || qs.cols() != qd.cols())
        throw ShapeError("step: rotation bases must share shape");
    Matrix gs = qs.adjoint() * qs - Matrix::Identity(qs.cols(), qs.cols());
    Matrix gd = qd.adjoint() * qd - Matrix::Identity(qd.cols(), qd.cols());
    if (max_norm(gs) > Tol::unitary || max_norm(gd) > Tol::unitary)
        throw InvariantViolation("step: rotation bases not orthonormal");
    // qd must lie in span(qs), else I + (qd-qs)qs^* is not unitary
    Matrix resid = qd - qs * (qs.adjoint() * qd);
    if (max_norm(resid) > Tol::unitary)
        throw InvariantViolation("step: rotation bases span different spaces");
    Step s;
    s.kind = Kind::rotation;
    s.qs = std::move(qs);
    s.qd = std::move(qd);
    return s;
}

Step Step::matched_rotation(std::vector<Vector> const &src,
                            std::vector<Vector> const &dst, double tol)
{
    Matrix qs, qd;
    gram_match_bases(src, dst, tol, qs, qd);
    return span_rotation(std::move(qs), std::move(qd));
}

Step Step::adjoint() const
{
    Step s(*this);
    if (kind == Kind::block)
        s.mat = mat.adjoint();
    else
        std::swap(s.qs, s.qd);
    return s;
}

Step Step::relabeled(std::vector<Index> const &perm) const
{
    Step s(*this);
    if (kind == Kind::block) {
        for (auto &c : s.coords)
            c = perm[static_cast<size_t>(c)];
    } else {
        Index h = static_cast<Index>(perm.size());
        if (qs.rows() != h)
            throw ShapeError("step relabel: permutation size mismatch");
        s.qs.setZero(h, qs.cols());
        s.qd.setZero(h, qd.cols());
        for (Index i = 0; i < h; ++i) {
            s.qs.row(perm[static_cast<size_t>(i)]) = qs.row(i);
            s.qd.row(perm[static_cast<size_t>(i)]) = qd.row(i);
        }
    }
    return s;
}

Step Step::extended(Index new_h, Index offset) const
{
    Step s(*this);
    if (kind == Kind::block) {
        for (auto &c : s.coords) {
            c += offset;
            if (c >= new_h)
                throw ShapeError("step extend: coordinate out of range");
        }
    } else {
        if (offset + qs.rows() > new_h)
            throw ShapeError("step extend: coordinate out of range");
        s.qs = Matrix::Zero(new_h, qs.cols());
        s.qd = Matrix::Zero(new_h, qd.cols());
        s.qs.middleRows(offset, qs.rows()) = qs;
        s.qd.middleRows(offset, qd.rows()) = qd;
    }
    return s;
}

void Step::apply_in_place(Vector &state) const
{
    if (kind == Kind::block) {
        Index n = static_cast<Index>(coords.size());
        Vector part(n);
        for (Index i = 0; i < n; ++i)
            part(i) = state(coords[static_cast<size_t>(i)]);
        part = mat * part;
        for (Index i = 0; i < n; ++i)
            state(coords[static_cast<size_t>(i)]) = part(i);
    } else {
        if (qs.rows() != state.size())
            throw ShapeError("step apply: dimension mismatch");
        state += (qd - qs) * (qs.adjoint() * state);
    }
}

Matrix Step::dense(Index h) const
{
    Matrix u = Matrix::Identity(h, h);
    if (kind == Kind::block) {
        Index n = static_cast<Index>(coords.size());
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                u(coords[static_cast<size_t>(i)],
                  coords[static_cast<size_t>(j)]) = mat(i, j);
        // off-diagonal identity entries between coords must be cleared
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (i != j && coords[static_cast<size_t>(i)] ==
                                  coords[static_cast<size_t>(j)])
                    throw ShapeError("step dense: repeated coordinate");
    } else {
        if (qs.rows() != h)
            throw ShapeError("step dense: dimension mismatch");
        u += (qd - qs) * qs.adjoint();
    }
    return u;
}

void apply_steps(StepList const &steps, Vector &state)
{
    for (auto const &s : steps)
        s.apply_in_place(state);
}

Matrix steps_dense(StepList const &steps, Index h)
{
    Matrix u = Matrix::Identity(h, h);
    for (auto const &s : steps)
        u = s.dense(h) * u;
    return u;
}

StepList steps_adjoint(StepList const &steps)
{
    StepList out;
    out.reserve(steps.size());
    for (auto it = steps.rbegin(); it != steps.rend(); ++it)
        out.push_back(it->adjoint());
    return out;
}

void QueryAlgorithm::validate() const
{
    if (stages.empty())
        throw ShapeError("algorithm needs at least U_0");
    embedding.validate(h_dim, m_dim());
    for (auto const &stage : stages)
        for (auto const &s : stage) {
            if (s.kind == Step::Kind::block) {
                for (Index c : s.coords)
                    if (c < 0 || c >= h_dim)
                        throw ShapeError("step coordinate out of range");
            } else if (s.qs.rows() != h_dim) {
                throw ShapeError("rotation step dimension mismatch");
            }
        }
}

QueryAlgorithm
QueryAlgorithm::from_unitaries(std::vector<Matrix> const &unitaries,
                               QueryEmbedding embedding,
                               std::vector<Index> block_dims)
{
    if (unitaries.empty())
        throw ShapeError("algorithm needs at least U_0");
    QueryAlgorithm algo;
    algo.h_dim = unitaries[0].rows();
    algo.embedding = std::move(embedding);
    algo.oracle_block_dims = std::move(block_dims);
    std::vector<Index> all(static_cast<size_t>(algo.h_dim));
    std::iota(all.begin(), all.end(), Index{0});
    for (auto const &u : unitaries) {
        if (u.rows() != algo.h_dim || u.cols() != algo.h_dim)
            throw ShapeError("algorithm unitaries of differing dimension");
        algo.stages.push_back({Step::dense_block(all, u)});
    }
    algo.validate();
    return algo;
}

Matrix QueryAlgorithm::stage_dense(Index t) const
{
    if (t < 0 || t > T())
        throw RangeError("stage index out of range");
    return steps_dense(stages[static_cast<size_t>(t)], h_dim);
}

void apply_embedded_oracle(OracleFamily const &fam, Index x,
                           QueryEmbedding const &emb, Vector &state)
{
    if (emb.b_dim == 0)
        return;
    auto const &blocks = fam.blocks_at(x);
    Index m = fam.m_dim();
    if (emb.m_dim() != m)
        throw ShapeError("oracle dimension does not match embedding");
    Vector part(m);
    for (Index ib = 0; ib < emb.b_dim; ++ib) {
        for (Index im = 0; im < m; ++im)
            part(im) = state(emb.mb_coord(im, ib));
        Index off = 0;
        for (size_t i = 0; i < blocks.size(); ++i) {
            Index bd = fam.block_dims()[i];
            part.segment(off, bd) = blocks[i] * part.segment(off, bd);
            off += bd;
        }
        for (Index im = 0; im < m; ++im)
            state(emb.mb_coord(im, ib)) = part(im);
    }
}

Vector pad_to_workspace(Vector const &xi, Index h_dim)
{
    if (xi.size() == h_dim)
        return xi;
    if (xi.size() > h_dim)
        throw ShapeError("state larger than workspace");
    Vector v = Vector::Zero(h_dim);
    v.head(xi.size()) = xi;
    return v;
}

Vector run(QueryAlgorithm const &algo, OracleFamily const &fam,
           std::string const &x, Vector const &xi)
{
    Index xi_idx = fam.label_index(x);
    Vector state = pad_to_workspace(xi, algo.h_dim);
    apply_steps(algo.stages[0], state);
    for (Index t = 1; t <= algo.T(); ++t) {
        apply_embedded_oracle(fam, xi_idx, algo.embedding, state);
        apply_steps(algo.stages[static_cast<size_t>(t)], state);
    }
    return state;
}

Matrix apply(QueryAlgorithm const &algo, OracleFamily const &fam,
             std::string const &x)
{
    if (algo.embedding.b_dim > 0 && fam.m_dim() != algo.m_dim())
        throw ShapeError("oracle dimension does not match algorithm");
    Matrix out(algo.h_dim, algo.h_dim);
    for (Index j = 0; j < algo.h_dim; ++j) {
        Vector e = Vector::Zero(algo.h_dim);
        e(j) = 1.0;
        out.col(j) = run(algo, fam, x, e);
    }
    return out;
}

Vector state_before_query(QueryAlgorithm const &algo, OracleFamily const &fam,
                          std::string const &x, Index t, Vector const &xi)
{
    if (t < 1 || t > algo.T() + 1)
        throw RangeError("query index out of range");
    Index xi_idx = fam.label_index(x);
    Vector state = pad_to_workspace(xi, algo.h_dim);
    apply_steps(algo.stages[0], state);
    for (Index i = 1; i < t; ++i) {
        apply_embedded_oracle(fam, xi_idx, algo.embedding, state);
        apply_steps(algo.stages[static_cast<size_t>(i)], state);
    }
    return state;
}

static BlockVector gather_query_part(QueryAlgorithm const &algo,
                                     Vector const &state)
{
    BlockVector v =
        BlockVector::zero(algo.oracle_block_dims, algo.embedding.b_dim);
    if (algo.embedding.b_dim == 0)
        return v;
    Index im = 0;
    for (size_t i = 0; i < algo.oracle_block_dims.size(); ++i) {
        for (Index r = 0; r < algo.oracle_block_dims[i]; ++r, ++im)
            for (Index ib = 0; ib < algo.embedding.b_dim; ++ib)
                v.blocks[i](r, ib) = state(algo.embedding.mb_coord(im, ib));
    }
    return v;
}

BlockVector query_input(QueryAlgorithm const &algo, OracleFamily const &fam,
                        std::string const &x, Index t, Vector const &xi)
{
    return gather_query_part(algo, state_before_query(algo, fam, x, t, xi));
}

std::vector<double> las_vegas(QueryAlgorithm const &algo,
                              OracleFamily const &fam, std::string const &x,
                              Vector const &xi)
{
    Index xi_idx = fam.label_index(x);
    std::vector<double> acc(algo.oracle_block_dims.size(), 0.0);
    Vector state = pad_to_workspace(xi, algo.h_dim);
    apply_steps(algo.stages[0], state);
    for (Index t = 1; t <= algo.T(); ++t) {
        BlockVector q = gather_query_part(algo, state);
        auto d = dnorm_sq(q);
        for (size_t i = 0; i < acc.size(); ++i)
            acc[i] += d[i];
        apply_embedded_oracle(fam, xi_idx, algo.embedding, state);
        apply_steps(algo.stages[static_cast<size_t>(t)], state);
    }
    return acc;
}

BlockVector total_query(QueryAlgorithm const &algo, OracleFamily const &fam,
                        std::string const &x, Vector const &xi)
{
    Index xi_idx = fam.label_index(x);
    BlockVector out = BlockVector::zero(algo.oracle_block_dims, 0);
    Vector state = pad_to_workspace(xi, algo.h_dim);
    apply_steps(algo.stages[0], state);
    for (Index t = 1; t <= algo.T(); ++t) {
        out = out.concat_w(gather_query_part(algo, state));
        apply_embedded_oracle(fam, xi_idx, algo.embedding, state);
        apply_steps(algo.stages[static_cast<size_t>(t)], state);
    }
    return out;
}

ConversionReport check_state_conversion(QueryAlgorithm const &algo,
                                        StateConversionProblem const &p,
                                        double tol)
{
    if (p.k_dim > algo.h_dim)
        throw ShapeError("problem output space larger than workspace");
    ConversionReport rep;
    for (Index x = 0; x < p.d(); ++x) {
        Vector final_state =
            run(algo, p.oracles, p.oracles.labels()[static_cast<size_t>(x)],
                p.xi[static_cast<size_t>(x)]);
        Vector target =
            pad_to_workspace(p.tau[static_cast<size_t>(x)], algo.h_dim);
        double err = (final_state - target).norm();
        rep.errors.push_back(err);
        rep.max_error = std::max(rep.max_error, err);
    }
    rep.pass = rep.max_error <= tol;
    return rep;
}

ComplexityProfile las_vegas_profile(QueryAlgorithm const &algo,
                                    StateConversionProblem const &p)
{
    std::vector<std::vector<double>> rows;
    for (Index x = 0; x < p.d(); ++x)
        rows.push_back(las_vegas(algo, p.oracles,
                                 p.oracles.labels()[static_cast<size_t>(x)],
                                 p.xi[static_cast<size_t>(x)]));
    return ComplexityProfile(std::move(rows));
}

} // namespace qlv
