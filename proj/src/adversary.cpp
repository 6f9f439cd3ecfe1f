#include "qlv/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qlv {

namespace {

// <v_x, ((I - O_x*O_y) ⊗ I_W) v_y> = <v_x, v_y> - <O_x v_x, O_y v_y>.
cxd constraint_value(OracleFamily const &fam, std::string const &x,
                     std::string const &y, BlockVector const &vx,
                     BlockVector const &vy)
{
    return vx.inner(vy) -
           apply_oracle(fam, x, vx).inner(apply_oracle(fam, y, vy));
}

// ((I - O*O_y) ⊗ I_W) v_y for a class representative O given blockwise.
BlockVector delta_apply(std::vector<Matrix> const &o_blocks,
                        OracleFamily const &fam, std::string const &y,
                        BlockVector const &vy)
{
    BlockVector oy = apply_oracle(fam, y, vy);
    BlockVector out;
    for (Index i = 0; i < vy.s(); ++i)
        out.blocks.push_back(vy.blocks[static_cast<size_t>(i)] -
                             o_blocks[static_cast<size_t>(i)].adjoint() *
                                 oy.blocks[static_cast<size_t>(i)]);
    return out;
}

// Orthonormal basis of the column space, singular values below tol dropped.
Matrix column_space_basis(Matrix const &a, double tol)
{
    if (a.cols() == 0)
        return Matrix::Zero(a.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
    double scale = std::max(1.0, svd.singularValues()(0));
    Index r = 0;
    while (r < svd.singularValues().size() &&
           svd.singularValues()(r) > tol * scale)
        ++r;
    return svd.matrixU().leftCols(r);
}

} // namespace

void FeasibleSolution::validate(std::vector<Index> const &block_dims) const
{
    for (auto const &v : vectors) {
        if (v.s() != static_cast<Index>(block_dims.size()))
            throw ShapeError("feasible solution: block count mismatch");
        if (v.w_dim() != w_dim)
            throw ShapeError("feasible solution: inconsistent w_dim");
        for (Index i = 0; i < v.s(); ++i)
            if (v.blocks[static_cast<size_t>(i)].rows() !=
                block_dims[static_cast<size_t>(i)])
                throw ShapeError("feasible solution: block dim mismatch");
    }
}

DualCertificate::DualCertificate(Matrix g) : gamma(std::move(g))
{
    require_hermitian(gamma);
}

double residual(FeasibleSolution const &sol, StateConversionProblem const &p)
{
    if (static_cast<Index>(sol.vectors.size()) != p.d())
        throw ShapeError("residual: label count mismatch");
    sol.validate(p.oracles.block_dims());
    Matrix e = problem_gram_gap(p);
    auto const &labels = p.oracles.labels();
    double worst = 0.0;
    for (Index x = 0; x < p.d(); ++x)
        for (Index y = 0; y < p.d(); ++y) {
            cxd got = constraint_value(
                p.oracles, labels[static_cast<size_t>(x)],
                labels[static_cast<size_t>(y)],
                sol.vectors[static_cast<size_t>(x)],
                sol.vectors[static_cast<size_t>(y)]);
            worst = std::max(worst, std::abs(got - e(x, y)));
        }
    return worst;
}

ComplexityProfile objective_profile(FeasibleSolution const &sol)
{
    std::vector<std::vector<double>> rows;
    for (auto const &v : sol.vectors)
        rows.push_back(dnorm_sq(v));
    return ComplexityProfile(std::move(rows));
}

FeasibleSolution extract(QueryAlgorithm const &algo,
                         StateConversionProblem const &p, double tol)
{
    auto report = check_state_conversion(algo, p, tol);
    if (!report.pass)
        throw NotASolution("algorithm does not solve the problem (error " +
                           std::to_string(report.max_error) + ")");
    FeasibleSolution sol;
    for (Index x = 0; x < p.d(); ++x)
        sol.vectors.push_back(total_query(
            algo, p.oracles, p.oracles.labels()[static_cast<size_t>(x)],
            pad_to_workspace(p.xi[static_cast<size_t>(x)], algo.h_dim)));
    sol.w_dim = sol.vectors.empty() ? 0 : sol.vectors[0].w_dim();
    return sol;
}

bool DualBound::tradeoff_ok(ComplexityProfile const &profile,
                            double slack) const
{
    double rhs = 0.0;
    for (size_t i = 0; i < lam_delta.size(); ++i) {
        double col_max = 0.0;
        for (auto const &row : profile.values)
            col_max = std::max(col_max, row[i]);
        rhs += lam_delta[i] * col_max;
    }
    return lam_E <= rhs + slack;
}

DualBound dual_bound(DualCertificate const &cert,
                     StateConversionProblem const &p)
{
    Index d = p.d();
    if (cert.gamma.rows() != d)
        throw ShapeError("dual certificate dimension mismatch");
    DualBound out;
    Matrix e = problem_gram_gap(p);
    out.lam_E = lambda_max(cert.gamma.cwiseProduct(e));

    auto const &labels = p.oracles.labels();
    for (Index i = 0; i < p.oracles.s(); ++i) {
        Index b = p.oracles.block_dims()[static_cast<size_t>(i)];
        std::vector<std::vector<Matrix>> delta(
            static_cast<size_t>(d),
            std::vector<Matrix>(static_cast<size_t>(d)));
        for (Index x = 0; x < d; ++x)
            for (Index y = 0; y < d; ++y) {
                Matrix const &ox =
                    p.oracles.blocks(labels[static_cast<size_t>(x)])
                        [static_cast<size_t>(i)];
                Matrix const &oy =
                    p.oracles.blocks(labels[static_cast<size_t>(y)])
                        [static_cast<size_t>(i)];
                delta[static_cast<size_t>(x)][static_cast<size_t>(y)] =
                    Matrix::Identity(b, b) - ox.adjoint() * oy;
            }
        out.lam_delta.push_back(lambda_max(block_hadamard(cert.gamma, delta)));
    }

    double denom = 0.0;
    for (double l : out.lam_delta)
        denom += l;
    out.bound_singleoracle =
        denom > Tol::eps_div ? out.lam_E / denom
                             : std::numeric_limits<double>::infinity();
    return out;
}

StateConversionProblem lift_bidirectional(StateConversionProblem const &p)
{
    if (p.oracles.kind() != OracleKind::unitary)
        throw KindError("bidirectional lift requires unitary oracles");
    std::vector<Index> dims;
    for (Index b : p.oracles.block_dims())
        dims.push_back(2 * b);
    std::map<std::string, std::vector<Matrix>> ops;
    for (auto const &x : p.oracles.labels()) {
        std::vector<Matrix> blocks;
        for (auto const &o : p.oracles.blocks(x)) {
            Matrix big = Matrix::Zero(2 * o.rows(), 2 * o.cols());
            big.topLeftCorner(o.rows(), o.cols()) = o;
            big.bottomRightCorner(o.rows(), o.cols()) = o.adjoint();
            blocks.push_back(std::move(big));
        }
        ops[x] = std::move(blocks);
    }
    OracleFamily lifted(p.oracles.labels(), dims, std::move(ops),
                        OracleKind::unitary);
    return StateConversionProblem(std::move(lifted), p.k_dim, p.xi, p.tau);
}

FeasibleSolution bidir_to_unidir(BidirectionalSolution const &bi,
                                 StateConversionProblem const &p,
                                 double tol)
{
    Matrix e = problem_gram_gap(p);
    auto const &labels = p.oracles.labels();
    for (Index x = 0; x < p.d(); ++x)
        for (Index y = 0; y < p.d(); ++y) {
            cxd got = constraint_value(
                p.oracles, labels[static_cast<size_t>(x)],
                labels[static_cast<size_t>(y)],
                bi.u[static_cast<size_t>(x)], bi.v[static_cast<size_t>(y)]);
            if (std::abs(got - e(x, y)) > tol)
                throw NotFeasible("bidirectional pair violates constraints");
        }

    FeasibleSolution out;
    out.w_dim = bi.w_dim;
    for (Index x = 0; x < p.d(); ++x) {
        auto const &u = bi.u[static_cast<size_t>(x)];
        auto const &v = bi.v[static_cast<size_t>(x)];
        auto const &ob = p.oracles.blocks(labels[static_cast<size_t>(x)]);
        BlockVector w;
        for (Index i = 0; i < u.s(); ++i) {
            Matrix const &ub = u.blocks[static_cast<size_t>(i)];
            Matrix const &vb = v.blocks[static_cast<size_t>(i)];
            Matrix big(2 * ub.rows(), ub.cols());
            big.topRows(ub.rows()) = (ub + vb) / 2.0;
            big.bottomRows(ub.rows()) =
                ob[static_cast<size_t>(i)] * (ub - vb) / 2.0;
            w.blocks.push_back(std::move(big));
        }
        out.vectors.push_back(std::move(w));
    }
    return out;
}

BidirectionalSolution unidir_to_bidir(FeasibleSolution const &sol,
                                      StateConversionProblem const &p,
                                      double tol)
{
    auto lifted = lift_bidirectional(p);
    if (residual(sol, lifted) > tol)
        throw NotFeasible("solution infeasible for the lifted problem");

    auto const &labels = p.oracles.labels();
    BidirectionalSolution out;
    out.w_dim = 2 * sol.w_dim;
    for (Index x = 0; x < p.d(); ++x) {
        auto const &vt = sol.vectors[static_cast<size_t>(x)];
        auto const &ob = p.oracles.blocks(labels[static_cast<size_t>(x)]);
        BlockVector u, v;
        for (Index i = 0; i < vt.s(); ++i) {
            Matrix const &big = vt.blocks[static_cast<size_t>(i)];
            Index m = big.rows() / 2;
            Matrix prime = big.topRows(m);
            Matrix second =
                ob[static_cast<size_t>(i)].adjoint() * big.bottomRows(m);
            Matrix ub(m, 2 * big.cols()), vb(m, 2 * big.cols());
            ub << prime, second;
            vb << prime, -second;
            u.blocks.push_back(std::move(ub));
            v.blocks.push_back(std::move(vb));
        }
        out.u.push_back(std::move(u));
        out.v.push_back(std::move(v));
    }
    return out;
}

FeasibleSolution feasible_from_offdiagonal(
    Matrix const &e, std::vector<std::vector<Matrix>> const &deltas,
    double tol)
{
    Index d = e.rows();
    require_hermitian(e);
    if (static_cast<Index>(deltas.size()) != d)
        throw ShapeError("offdiagonal: delta family size mismatch");
    Index m = d > 1 ? deltas[0][1].rows() : (d == 1 ? 0 : 0);
    if (d == 1)
        m = deltas[0][0].rows();

    struct Pair {
        Index x, y;
        Vector u, v;
    };
    std::vector<Pair> pairs;
    for (Index x = 0; x < d; ++x) {
        if (std::abs(e(x, x)) > tol)
            throw Inconsistent("offdiagonal: nonzero diagonal entry");
        for (Index y = x + 1; y < d; ++y) {
            Matrix const &dl =
                deltas[static_cast<size_t>(x)][static_cast<size_t>(y)];
            m = dl.rows();
            if (std::abs(e(x, y)) <= tol)
                continue;
            if (max_norm(dl) <= tol)
                throw Inconsistent(
                    "offdiagonal: gap nonzero on a vanishing constraint");
            auto t = top_singular_triple(dl);
            // u* delta v = sigma; rescale so it equals 1
            pairs.push_back({x, y, Vector(t.u / std::sqrt(t.sigma)),
                             Vector(t.v / std::sqrt(t.sigma))});
        }
    }

    Index w = std::max<Index>(1, static_cast<Index>(pairs.size()));
    FeasibleSolution sol;
    sol.w_dim = w;
    for (Index x = 0; x < d; ++x)
        sol.vectors.push_back(BlockVector::zero({m}, w));
    for (size_t c = 0; c < pairs.size(); ++c) {
        auto const &pr = pairs[c];
        sol.vectors[static_cast<size_t>(pr.x)].blocks[0].col(
            static_cast<Index>(c)) = pr.u;
        sol.vectors[static_cast<size_t>(pr.y)].blocks[0].col(
            static_cast<Index>(c)) = e(pr.x, pr.y) * pr.v;
    }
    return sol;
}

std::vector<std::vector<Index>> oracle_classes(OracleFamily const &fam,
                                               double class_tol)
{
    Index d = static_cast<Index>(fam.labels().size());
    std::vector<std::vector<Index>> classes;
    std::vector<Index> rep; // class representative label index
    for (Index x = 0; x < d; ++x) {
        bool placed = false;
        for (size_t c = 0; c < classes.size(); ++c) {
            auto const &a = fam.blocks_at(rep[c]);
            auto const &b = fam.blocks_at(x);
            double dist = 0.0;
            for (size_t i = 0; i < a.size(); ++i)
                dist = std::max(dist, max_norm(a[i] - b[i]));
            if (dist <= class_tol) {
                classes[c].push_back(x);
                placed = true;
                break;
            }
        }
        if (!placed) {
            classes.push_back({x});
            rep.push_back(x);
        }
    }
    return classes;
}

bool consistency_check(FeasibleSolution const &sol,
                       StateConversionProblem const &p, double tol)
{
    auto classes = oracle_classes(p.oracles, tol);
    for (auto const &cls : classes) {
        if (cls.size() < 2)
            continue;
        Index n = static_cast<Index>(cls.size());
        Matrix xs(p.k_dim, n);
        Matrix vs(sol.vectors[static_cast<size_t>(cls[0])].flatten().size(),
                  n);
        for (Index j = 0; j < n; ++j) {
            xs.col(j) = p.xi[static_cast<size_t>(cls[static_cast<size_t>(j)])];
            vs.col(j) = sol.vectors[static_cast<size_t>(
                                        cls[static_cast<size_t>(j)])]
                            .flatten();
        }
        // least-squares V_O = vs * pinv(xs); fit residual must vanish
        Eigen::JacobiSVD<Matrix> svd(xs,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
        double scale = std::max(1.0, svd.singularValues()(0));
        Vector inv = Vector::Zero(svd.singularValues().size());
        for (Index i = 0; i < inv.size(); ++i)
            if (svd.singularValues()(i) > Tol::rank * scale)
                inv(i) = 1.0 / svd.singularValues()(i);
        Matrix vo = vs * svd.matrixV() * inv.asDiagonal() *
                    svd.matrixU().adjoint();
        if (max_norm(vo * xs - vs) > tol * std::max(1.0, max_norm(vs)))
            return false;
    }
    return true;
}

FeasibleSolution pareto_project(FeasibleSolution const &sol,
                                StateConversionProblem const &p, double tol)
{
    if (p.oracles.kind() == OracleKind::general)
        throw KindError("pareto projection requires contraction oracles");
    if (residual(sol, p) > 10 * tol)
        throw NotFeasible("pareto projection: infeasible input");

    auto const &labels = p.oracles.labels();
    auto const &bdims = p.oracles.block_dims();
    Index w = sol.w_dim;
    FeasibleSolution out = sol;

    for (auto const &cls : oracle_classes(p.oracles)) {
        auto const &ob = p.oracles.blocks_at(cls[0]);
        std::vector<bool> in_class(static_cast<size_t>(p.d()), false);
        for (Index x : cls)
            in_class[static_cast<size_t>(x)] = true;

        // directions fixed by the cross-class constraints
        std::vector<Vector> dirs;
        for (Index y = 0; y < p.d(); ++y) {
            if (in_class[static_cast<size_t>(y)])
                continue;
            // classes are processed sequentially: constraint directions use
            // the already-projected vectors of earlier classes
            dirs.push_back(delta_apply(ob, p.oracles,
                                       labels[static_cast<size_t>(y)],
                                       out.vectors[static_cast<size_t>(y)])
                               .flatten());
        }

        // range of ((I - O*O) ⊗ I_W)^{1/2}, blockwise
        Index flat = 0;
        for (Index b : bdims)
            flat += b * w;
        Matrix span(flat, static_cast<Index>(dirs.size()));
        for (size_t j = 0; j < dirs.size(); ++j)
            span.col(static_cast<Index>(j)) = dirs[j];
        std::vector<Matrix> range_proj;
        Index extra = 0;
        for (size_t i = 0; i < bdims.size(); ++i) {
            Matrix gap = Matrix::Identity(bdims[i], bdims[i]) -
                         ob[i].adjoint() * ob[i];
            Matrix q = column_space_basis(gap, Tol::rank);
            range_proj.push_back(q);
            extra += q.cols() * w;
        }
        Matrix all(flat, span.cols() + extra);
        all.leftCols(span.cols()) = span;
        Index col = span.cols();
        Index row0 = 0;
        for (size_t i = 0; i < bdims.size(); ++i) {
            Matrix const &q = range_proj[i];
            for (Index a = 0; a < q.cols(); ++a)
                for (Index wc = 0; wc < w; ++wc) {
                    Vector dir = Vector::Zero(flat);
                    // block i flattening is M-major, W-minor
                    for (Index r = 0; r < q.rows(); ++r)
                        dir(row0 + r * w + wc) = q(r, a);
                    all.col(col++) = dir;
                }
            row0 += bdims[i] * w;
        }
        Matrix basis = column_space_basis(all, Tol::rank);

        for (Index x : cls) {
            Vector f = out.vectors[static_cast<size_t>(x)].flatten();
            Vector proj = basis * (basis.adjoint() * f);
            out.vectors[static_cast<size_t>(x)] =
                BlockVector::unflatten(proj, bdims, w);
        }
    }
    return out;
}

double subspace_residual(OperatorSolution const &vsol,
                         SubspaceConversionProblem const &sp)
{
    auto const &labels = sp.oracles.labels();
    Index d = static_cast<Index>(labels.size());
    double worst = 0.0;
    for (Index x = 0; x < d; ++x)
        for (Index y = 0; y < d; ++y) {
            Matrix target =
                sp.basis[static_cast<size_t>(x)].adjoint() *
                    sp.basis[static_cast<size_t>(y)] -
                sp.maps[static_cast<size_t>(x)].adjoint() *
                    sp.maps[static_cast<size_t>(y)];
            auto const &vx = vsol.columns[static_cast<size_t>(x)];
            auto const &vy = vsol.columns[static_cast<size_t>(y)];
            Matrix got(static_cast<Index>(vx.size()),
                       static_cast<Index>(vy.size()));
            for (size_t a = 0; a < vx.size(); ++a)
                for (size_t b = 0; b < vy.size(); ++b)
                    got(static_cast<Index>(a), static_cast<Index>(b)) =
                        constraint_value(sp.oracles,
                                         labels[static_cast<size_t>(x)],
                                         labels[static_cast<size_t>(y)],
                                         vx[a], vy[b]);
            worst = std::max(worst, max_norm(target - got));
        }
    return worst;
}

BlockVector restrict_to_state(OperatorSolution const &vsol,
                              SubspaceConversionProblem const &sp,
                              std::string const &x, Vector const &xi,
                              double tol)
{
    Index xi_idx = sp.oracles.label_index(x);
    Matrix const &k = sp.basis[static_cast<size_t>(xi_idx)];
    Vector coeff = k.adjoint() * xi;
    if ((k * coeff - xi).norm() > tol * std::max(1.0, xi.norm()))
        throw SubspaceError("state outside the label's subspace");
    auto const &cols = vsol.columns[static_cast<size_t>(xi_idx)];
    BlockVector out = BlockVector::zero(sp.oracles.block_dims(), vsol.w_dim);
    for (size_t a = 0; a < cols.size(); ++a)
        for (Index i = 0; i < out.s(); ++i)
            out.blocks[static_cast<size_t>(i)] +=
                coeff(static_cast<Index>(a)) *
                cols[a].blocks[static_cast<size_t>(i)];
    return out;
}

} // namespace qlv
