#include "qlv/synth.hpp"
#include "qlv/compose.hpp"

#include <algorithm>
#include <cmath>

namespace qlv {

namespace {

// forward Givens chain realising I_K ⊗ (|0> -> uniform over T slots);
// slot j of the J-register occupies coordinates [j*k, (j+1)*k)
StepList uniform_prep_steps(Index k, Index T)
{
    StepList steps;
    for (Index j = 1; j < T; ++j) {
        double s = std::sqrt(1.0 / static_cast<double>(T - j + 1));
        double c = std::sqrt(static_cast<double>(T - j) /
                             static_cast<double>(T - j + 1));
        Matrix rot(2, 2);
        rot << c, -s, s, c;
        for (Index kappa = 0; kappa < k; ++kappa)
            steps.push_back(
                Step::dense_block({kappa, j * k + kappa}, rot));
    }
    return steps;
}

// non-throwing smallest eigenvalue (psd_utilities rejects indefinite input)
double min_eigenvalue(Matrix const &h)
{
    return -lambda_max(-h);
}

Matrix solution_gram(std::vector<BlockVector> const &vs)
{
    Index d = static_cast<Index>(vs.size());
    Matrix g(d, d);
    for (Index x = 0; x < d; ++x)
        for (Index y = 0; y < d; ++y)
            g(x, y) = vs[static_cast<size_t>(x)].inner(
                vs[static_cast<size_t>(y)]);
    return g;
}

// split a single-block solution over the full input space into the
// problem's block structure
FeasibleSolution reblock(FeasibleSolution const &sol,
                         std::vector<Index> const &block_dims)
{
    FeasibleSolution out;
    out.w_dim = sol.w_dim;
    for (auto const &v : sol.vectors) {
        Matrix const &full = v.blocks[0];
        BlockVector split;
        Index row = 0;
        for (Index b : block_dims) {
            split.blocks.push_back(full.middleRows(row, b));
            row += b;
        }
        out.vectors.push_back(std::move(split));
    }
    return out;
}

std::vector<std::vector<Matrix>> delta_family(OracleFamily const &fam)
{
    Index d = static_cast<Index>(fam.labels().size());
    Index m = fam.m_dim();
    std::vector<std::vector<Matrix>> deltas(
        static_cast<size_t>(d), std::vector<Matrix>(static_cast<size_t>(d)));
    std::vector<Matrix> full;
    for (auto const &x : fam.labels())
        full.push_back(fam.full_operator(x));
    for (Index x = 0; x < d; ++x)
        for (Index y = 0; y < d; ++y)
            deltas[static_cast<size_t>(x)][static_cast<size_t>(y)] =
                Matrix::Identity(m, m) -
                full[static_cast<size_t>(x)].adjoint() *
                    full[static_cast<size_t>(y)];
    return deltas;
}

std::vector<Vector> padded_all(std::vector<Vector> const &vs, Index h)
{
    std::vector<Vector> out;
    for (auto const &v : vs)
        out.push_back(pad_to_workspace(v, h));
    return out;
}

QueryAlgorithm rotation_wrapper(Index h, std::vector<Vector> const &src,
                                std::vector<Vector> const &dst, double mtol,
                                std::vector<Index> const &block_dims)
{
    return trivial_algorithm(
        h, {Step::matched_rotation(src, dst, mtol)}, block_dims);
}

} // namespace

ApproxCompilation compile_approx(StateConversionProblem const &p,
                                 FeasibleSolution const &sol, Index T,
                                 double tol)
{
    if (T < 1)
        throw RangeError("compile_approx: T must be positive");
    double res = residual(sol, p);
    if (res > 10 * tol)
        throw NotFeasible("compile_approx: solution residual " +
                          std::to_string(res));
    double mtol = std::max(10 * res, tol);

    Index k = p.k_dim;
    Index d = p.d();
    Index w = std::max<Index>(1, sol.w_dim);
    std::vector<BlockVector> vs;
    for (auto const &v : sol.vectors)
        vs.push_back(v.w_dim() == w ? v : v.pad_w(w));
    Index m = p.oracles.m_dim();
    Index mv = m * w;
    Index h = k * T + mv;

    // the catalyst register 𝒱 sits after the T slots of 𝒦 ⊗ 𝒥; its
    // flattened (M major, W minor) order makes the query embedding identity
    QueryEmbedding emb;
    emb.b_dim = w;
    emb.c_dim = k * T;
    emb.layout.resize(static_cast<size_t>(h));
    for (Index i = 0; i < mv; ++i)
        emb.layout[static_cast<size_t>(i)] = k * T + i;
    for (Index i = 0; i < k * T; ++i)
        emb.layout[static_cast<size_t>(mv + i)] = i;

    // the per-step unitary on 𝒱 ⊕ 𝒦⊗|t>, from Gram matching
    // {v'_x ⊕ ξ_x} -> {v_x ⊕ τ_x}
    std::vector<Vector> src, dst;
    auto const &labels = p.oracles.labels();
    for (Index x = 0; x < d; ++x) {
        auto const &v = vs[static_cast<size_t>(x)];
        Vector s(mv + k), t(mv + k);
        s << apply_oracle(p.oracles, labels[static_cast<size_t>(x)], v)
                 .flatten(),
            p.xi[static_cast<size_t>(x)];
        t << v.flatten(), p.tau[static_cast<size_t>(x)];
        src.push_back(std::move(s));
        dst.push_back(std::move(t));
    }
    Matrix u = unitary_from_gram_match(src, dst, mtol);

    QueryAlgorithm algo;
    algo.h_dim = h;
    algo.embedding = emb;
    algo.oracle_block_dims = p.oracles.block_dims();
    StepList prep = uniform_prep_steps(k, T);
    algo.stages.push_back(prep);
    std::vector<Index> coords(static_cast<size_t>(mv + k));
    for (Index t = 1; t <= T; ++t) {
        Index slot = t - 1;
        for (Index i = 0; i < mv; ++i)
            coords[static_cast<size_t>(i)] = k * T + i;
        for (Index i = 0; i < k; ++i)
            coords[static_cast<size_t>(mv + i)] = slot * k + i;
        StepList stage = {Step::dense_block(coords, u)};
        if (t == T) {
            StepList unprep = steps_adjoint(prep);
            stage.insert(stage.end(), unprep.begin(), unprep.end());
        }
        algo.stages.push_back(std::move(stage));
    }
    algo.validate();

    ApproxCompilation out;
    out.algo = std::move(algo);
    double root_t = std::sqrt(static_cast<double>(T));
    for (Index x = 0; x < d; ++x) {
        Vector xp = Vector::Zero(h), tp = Vector::Zero(h);
        xp.segment(0, k) = p.xi[static_cast<size_t>(x)];
        tp.segment(0, k) = p.tau[static_cast<size_t>(x)];
        Vector vflat = vs[static_cast<size_t>(x)].flatten() / root_t;
        xp.segment(k * T, mv) = vflat;
        tp.segment(k * T, mv) = vflat;
        out.xi_plus.push_back(std::move(xp));
        out.tau_plus.push_back(std::move(tp));
    }
    return out;
}

PlainRun run_plain(StateConversionProblem const &p,
                   FeasibleSolution const &sol, double eps, double tol)
{
    if (p.oracles.kind() == OracleKind::general)
        throw KindError("run_plain requires contraction or unitary oracles");
    if (eps <= 0)
        throw RangeError("run_plain: eps must be positive");

    double big = 0.0;
    for (auto const &v : sol.vectors) {
        auto n = dnorm_sq(v);
        double t = 0;
        for (double e : n)
            t += e;
        big = std::max(big, t);
    }

    PlainRun out;
    if (big <= tol * tol) {
        // v = 0: the Grams agree, a single rotation is exact
        double res = residual(sol, p);
        if (res > 10 * tol)
            throw NotFeasible("run_plain: solution residual " +
                              std::to_string(res));
        out.algo = rotation_wrapper(p.k_dim, p.xi, p.tau,
                                    std::max(10 * res, tol),
                                    p.oracles.block_dims());
        out.T = 0;
    } else {
        out.T = static_cast<Index>(std::ceil(4.0 * big / (eps * eps)));
        out.algo = compile_approx(p, sol, out.T, tol).algo;
    }
    for (auto const &x : p.oracles.labels()) {
        Index xi_idx = p.oracles.label_index(x);
        Vector fin = run(out.algo, p.oracles, x,
                         pad_to_workspace(p.xi[static_cast<size_t>(xi_idx)],
                                          out.algo.h_dim));
        Vector want = pad_to_workspace(p.tau[static_cast<size_t>(xi_idx)],
                                       out.algo.h_dim);
        out.errors.push_back((fin - want).norm());
    }
    return out;
}

QueryAlgorithm compile_exact_posdef(StateConversionProblem const &p,
                                    FeasibleSolution const &sol, double tol)
{
    double res = residual(sol, p);
    if (res > 10 * tol)
        throw NotFeasible("compile_exact_posdef: solution residual " +
                          std::to_string(res));
    double mtol = std::max(10 * res, tol);
    double margin = Tol::posdef_margin;

    Matrix gx = gram(p.xi), gt = gram(p.tau);
    double mx = psd_utilities(gx).min_eig, mt = psd_utilities(gt).min_eig;
    if (mx < margin || mt < margin)
        throw NotPosDef("compile_exact_posdef: Gram not positive definite");

    Matrix gv = solution_gram(sol.vectors);
    double lamv = lambda_max(gv);
    auto ok = [&](Index t) {
        double td = static_cast<double>(t);
        return min_eigenvalue(gx - gv / td) >= margin / 2 &&
               min_eigenvalue(gt - gv / td) >= margin / 2;
    };
    Index lo = 1;
    if (!ok(lo)) {
        Index hi = std::max<Index>(
            2, static_cast<Index>(
                   std::ceil(lamv / (std::min(mx, mt) - margin / 2))) +
                   1);
        while (!ok(hi))
            hi *= 2;
        // smallest passing T; min_eig(G - G_v/T) is monotone in T
        while (lo + 1 < hi) {
            Index mid = lo + (hi - lo) / 2;
            (ok(mid) ? hi : lo) = mid;
        }
        lo = hi;
    }
    Index T = lo;
    double td = static_cast<double>(T);

    Index d = p.d();
    Matrix rx = psd_utilities(gx - gv / td).sqrt;
    Matrix rt = psd_utilities(gt - gv / td).sqrt;
    std::vector<Vector> xim, taum;
    for (Index x = 0; x < d; ++x) {
        xim.push_back(rx.col(x));
        taum.push_back(rt.col(x));
    }
    StateConversionProblem inner(p.oracles, d, xim, taum);
    auto ca = compile_approx(inner, sol, T, tol);

    QueryAlgorithm algo = std::move(ca.algo);
    Index h2 = std::max(algo.h_dim, p.k_dim);
    if (h2 > algo.h_dim)
        algo = extend_workspace(algo, h2 - algo.h_dim);
    std::vector<Vector> start = padded_all(p.xi, h2);
    std::vector<Vector> finish = padded_all(p.tau, h2);
    Step r_in = Step::matched_rotation(start, padded_all(ca.xi_plus, h2),
                                       mtol);
    Step r_out = Step::matched_rotation(padded_all(ca.tau_plus, h2), finish,
                                        mtol);
    algo.stages.front().insert(algo.stages.front().begin(), r_in);
    algo.stages.back().push_back(r_out);
    return algo;
}

QueryAlgorithm compile_exact(StateConversionProblem const &p,
                             FeasibleSolution const &sol, double delta,
                             double tol, Index max_queries)
{
    if (p.oracles.kind() != OracleKind::unitary)
        throw KindError("compile_exact requires unitary oracles");
    if (delta <= 0)
        throw RangeError("compile_exact: delta must be positive");
    double res = residual(sol, p);
    if (res > 10 * tol)
        throw NotFeasible("compile_exact: solution residual " +
                          std::to_string(res));
    double mtol = std::max(10 * res, tol);

    Index d = p.d();
    Index k = p.k_dim;
    auto const &labels = p.oracles.labels();
    auto const &bdims = p.oracles.block_dims();
    Matrix gx = gram(p.xi), gt = gram(p.tau);

    // reference positive-definite Gram: diagonal for pairwise-distinct
    // oracles, block-diagonal per oracle class otherwise
    auto classes = oracle_classes(p.oracles);
    Matrix mref = Matrix::Zero(d, d);
    for (auto const &cls : classes)
        for (Index x : cls)
            for (Index y : cls)
                mref(x, y) = gx(x, y);
    if (psd_utilities(mref).min_eig < 4 * Tol::posdef_margin)
        throw IndependenceViolation(
            "compile_exact: class Gram block is singular");
    double kappa = psd_utilities(mref).min_eig / 2;

    auto objective_rows = [&](FeasibleSolution const &s) {
        std::vector<std::vector<double>> rows;
        for (auto const &v : s.vectors)
            rows.push_back(dnorm_sq(v));
        return rows;
    };
    auto rows_max = [&](std::vector<std::vector<double>> const &rows) {
        double m = 0;
        for (auto const &r : rows)
            for (double e : r)
                m = std::max(m, e);
        return m;
    };
    std::vector<std::vector<double>> lv = objective_rows(sol);

    // trivial case: the Grams already agree and v is within budget
    if (max_norm(gx - gt) <= mtol && rows_max(lv) <= delta)
        return rotation_wrapper(k, p.xi, p.tau, mtol, bdims);

    Index kb = std::max(k, d);
    Matrix sqrt_m = psd_utilities(mref).sqrt;
    std::vector<Vector> chi;
    for (Index x = 0; x < d; ++x)
        chi.push_back(pad_to_workspace(sqrt_m.col(x), kb));

    auto deltas = delta_family(p.oracles);
    OracleFamily adj = p.oracles.adjoint_family();
    auto deltas_adj = delta_family(adj);

    // route a Gram g to a positive definite neighbour of mref, shrinking
    // the run accuracy until the achieved Gram clears kappa
    auto route = [&](OracleFamily const &fam,
                     std::vector<std::vector<Matrix>> const &dl,
                     std::vector<Vector> const &states, Matrix const &g,
                     QueryAlgorithm &algo_out,
                     std::vector<Vector> &outputs_out,
                     std::vector<std::vector<double>> &lv_out) {
        FeasibleSolution fs =
            reblock(feasible_from_offdiagonal(g - mref, dl), bdims);
        StateConversionProblem prob(fam, kb, padded_all(states, kb), chi);
        double big = rows_max(objective_rows(fs));
        double eps_run = 0.25;
        for (int it = 0;; ++it) {
            if (it > Tol::max_halvings ||
                4.0 * big / (eps_run * eps_run) >
                    static_cast<double>(max_queries))
                throw BudgetExceeded(
                    "compile_exact: accuracy schedule exhausted");
            PlainRun pr = run_plain(prob, fs, eps_run, tol);
            std::vector<Vector> outs;
            std::vector<std::vector<double>> lvr;
            for (Index x = 0; x < d; ++x) {
                Vector in = pad_to_workspace(
                    states[static_cast<size_t>(x)], pr.algo.h_dim);
                outs.push_back(
                    run(pr.algo, fam, labels[static_cast<size_t>(x)], in));
                lvr.push_back(las_vegas(
                    pr.algo, fam, labels[static_cast<size_t>(x)], in));
            }
            if (psd_utilities(gram(outs)).min_eig >= kappa) {
                algo_out = std::move(pr.algo);
                outputs_out = std::move(outs);
                lv_out = std::move(lvr);
                return;
            }
            eps_run /= 2;
        }
    };

    QueryAlgorithm algo_b, algo_e;
    std::vector<Vector> beta, eta;
    std::vector<std::vector<double>> lb, le;
    route(p.oracles, deltas, p.xi, gx, algo_b, beta, lb);
    route(adj, deltas_adj, p.tau, gt, algo_e, eta, le);
    Matrix m1 = gram(beta), m2 = gram(eta);

    // middle leg M' -> M'' (exact, positive definite)
    Matrix sq1 = psd_utilities(m1).sqrt, sq2 = psd_utilities(m2).sqrt;
    std::vector<Vector> cs, ds;
    for (Index x = 0; x < d; ++x) {
        cs.push_back(sq1.col(x));
        ds.push_back(sq2.col(x));
    }
    FeasibleSolution sol_c =
        reblock(feasible_from_offdiagonal(m1 - m2, deltas), bdims);
    StateConversionProblem prob_c(p.oracles, d, cs, ds);
    QueryAlgorithm algo_c = compile_exact_posdef(prob_c, sol_c, tol);
    std::vector<std::vector<double>> lc;
    std::vector<Vector> gammas;
    for (Index x = 0; x < d; ++x) {
        Vector in = pad_to_workspace(cs[static_cast<size_t>(x)],
                                     algo_c.h_dim);
        gammas.push_back(
            run(algo_c, p.oracles, labels[static_cast<size_t>(x)], in));
        lc.push_back(las_vegas(algo_c, p.oracles,
                               labels[static_cast<size_t>(x)], in));
    }

    // mixing parameter: halve until the side legs' overhead fits in delta
    double eps = 0.25;
    for (int it = 0;; ++it) {
        double worst = 0;
        for (Index x = 0; x < d; ++x)
            for (size_t i = 0; i < lv[static_cast<size_t>(x)].size(); ++i)
                worst = std::max(
                    worst, lb[static_cast<size_t>(x)][i] +
                               lc[static_cast<size_t>(x)][i] +
                               le[static_cast<size_t>(x)][i] +
                               lv[static_cast<size_t>(x)][i]);
        if (eps * worst <= 0.99 * delta)
            break;
        if (it >= Tol::max_halvings)
            throw BudgetExceeded("compile_exact: mixing schedule exhausted");
        eps /= 2;
    }
    double r1 = std::sqrt(1 - eps), re = std::sqrt(eps);

    // main leg on the mixed Grams, solution scaled by sqrt(1-eps)
    Matrix g1 = (1 - eps) * gx + eps * m2;
    Matrix g2 = (1 - eps) * gt + eps * m2;
    double mix_min =
        std::min(psd_utilities(g1).min_eig, psd_utilities(g2).min_eig);
    Matrix gv = solution_gram(sol.vectors);
    if ((1 - eps) * lambda_max(gv) /
            std::max(mix_min - Tol::posdef_margin / 2, Tol::eps_div) >
        static_cast<double>(max_queries))
        throw BudgetExceeded("compile_exact: main-leg query budget");
    Matrix sg1 = psd_utilities(g1).sqrt, sg2 = psd_utilities(g2).sqrt;
    std::vector<Vector> es, fs;
    for (Index x = 0; x < d; ++x) {
        es.push_back(sg1.col(x));
        fs.push_back(sg2.col(x));
    }
    FeasibleSolution sol_d;
    sol_d.w_dim = sol.w_dim;
    for (auto const &v : sol.vectors)
        sol_d.vectors.push_back(v.scaled(r1));
    StateConversionProblem prob_d(p.oracles, d, es, fs);
    QueryAlgorithm algo_d = compile_exact_posdef(prob_d, sol_d, tol);
    std::vector<Vector> phis;
    for (Index x = 0; x < d; ++x)
        phis.push_back(run(algo_d, p.oracles, labels[static_cast<size_t>(x)],
                           pad_to_workspace(es[static_cast<size_t>(x)],
                                            algo_d.h_dim)));

    // composite workspace: shared sub-algorithm slot, then a front register
    // carrying the untouched sqrt(1-eps) component of the direct sums
    QueryAlgorithm inv_e = invert(algo_e);
    Index hsub = std::max(std::max(algo_b.h_dim, algo_c.h_dim),
                          std::max(algo_d.h_dim, inv_e.h_dim));
    Index hstar = hsub + k;
    auto ext = [&](QueryAlgorithm const &a) {
        QueryAlgorithm s = slice(a);
        return extend_workspace(s, hstar - s.h_dim);
    };
    auto front = [&](Vector const &v) {
        Vector out = Vector::Zero(hstar);
        out.segment(hsub, v.size()) = v;
        return out;
    };
    auto sub = [&](Vector const &v) { return pad_to_workspace(v, hstar); };

    std::vector<Vector> s0, s1, s2, s3, s4, s5, s6, s7, s8, s9;
    for (Index x = 0; x < d; ++x) {
        size_t xs = static_cast<size_t>(x);
        Vector fx = front(p.xi[xs]), ft = front(p.tau[xs]);
        s0.push_back(sub(p.xi[xs]));
        s1.push_back(r1 * fx +
                     re * sub(pad_to_workspace(p.xi[xs], algo_b.h_dim)));
        s2.push_back(r1 * fx + re * sub(beta[xs]));
        s3.push_back(r1 * fx + re * sub(pad_to_workspace(cs[xs],
                                                         algo_c.h_dim)));
        s4.push_back(r1 * fx + re * sub(gammas[xs]));
        s5.push_back(sub(pad_to_workspace(es[xs], algo_d.h_dim)));
        s6.push_back(sub(phis[xs]));
        s7.push_back(r1 * ft + re * sub(eta[xs]));
        s8.push_back(r1 * ft +
                     re * sub(pad_to_workspace(p.tau[xs], algo_e.h_dim)));
        s9.push_back(sub(p.tau[xs]));
    }

    double rtol = std::max(mtol, 1e-7);
    auto rotor = [&](std::vector<Vector> const &a,
                     std::vector<Vector> const &b) {
        return rotation_wrapper(hstar, a, b, rtol, bdims);
    };
    QueryAlgorithm chain = rotor(s0, s1);
    chain = sequential(ext(algo_b), chain);
    chain = sequential(rotor(s2, s3), chain);
    chain = sequential(ext(algo_c), chain);
    chain = sequential(rotor(s4, s5), chain);
    chain = sequential(ext(algo_d), chain);
    chain = sequential(rotor(s6, s7), chain);
    chain = sequential(ext(inv_e), chain);
    chain = sequential(rotor(s8, s9), chain);
    return chain;
}

} // namespace qlv
