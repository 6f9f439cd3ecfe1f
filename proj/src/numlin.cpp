#include "qlv/numlin.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace qlv {

double max_norm(Matrix const &a)
{
    if (a.size() == 0)
        return 0.0;
    return a.cwiseAbs().maxCoeff();
}

static double scaled(double tol, Matrix const &a)
{
    return tol * std::max(1.0, max_norm(a));
}

bool is_hermitian(Matrix const &a, double tol)
{
    if (a.rows() != a.cols())
        return false;
    return max_norm(a - a.adjoint().eval()) <= scaled(tol, a);
}

bool is_unitary(Matrix const &a, double tol)
{
    if (a.rows() != a.cols())
        return false;
    Matrix g = a.adjoint() * a;
    g -= Matrix::Identity(a.cols(), a.cols());
    return max_norm(g) <= tol * std::max(1.0, max_norm(a));
}

void require_hermitian(Matrix const &a, double tol)
{
    if (!is_hermitian(a, tol))
        throw InvariantViolation("matrix is not Hermitian");
}

void require_unitary(Matrix const &a, double tol)
{
    if (!is_unitary(a, tol))
        throw InvariantViolation("matrix is not unitary");
}

void require_finite(Matrix const &a)
{
    if (!a.allFinite())
        throw InvariantViolation("matrix has non-finite entries");
}

double lambda_max(Matrix const &h)
{
    require_hermitian(h);
    if (h.rows() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double spectral_norm(Matrix const &a)
{
    require_finite(a);
    if (a.size() == 0)
        return 0.0;
    return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
}

SingularTriple top_singular_triple(Matrix const &a)
{
    require_finite(a);
    if (a.size() == 0 || max_norm(a) == 0.0)
        throw DegenerateInput("top singular triple of the zero matrix");
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SingularTriple t;
    t.sigma = svd.singularValues()(0);
    t.u = svd.matrixU().col(0);
    t.v = svd.matrixV().col(0);
    return t;
}

Matrix gram(std::vector<Vector> const &vectors)
{
    Index d = static_cast<Index>(vectors.size());
    Index n = d > 0 ? vectors[0].size() : 0;
    for (auto const &v : vectors)
        if (v.size() != n)
            throw ShapeError("gram: vectors of differing dimension");
    Matrix g(d, d);
    for (Index x = 0; x < d; ++x)
        for (Index y = 0; y < d; ++y)
            g(x, y) = vectors[x].dot(vectors[y]);
    // dot() conjugates its first argument, matching <.,.> conventions
    return g;
}

// Orthonormalise `vecs` greedily with column pivoting: repeatedly pick the
// vector with the largest residual against the basis built so far. Returns
// the pivot order; `basis` receives one orthonormal column per accepted
// pivot.
static std::vector<Index> pivoted_basis(std::vector<Vector> const &vecs,
                                        double rank_tol,
                                        std::vector<Vector> &basis)
{
    std::vector<Vector> resid(vecs);
    std::vector<bool> used(vecs.size(), false);
    std::vector<Index> order;
    for (;;) {
        Index best = -1;
        double best_norm = rank_tol;
        for (Index i = 0; i < static_cast<Index>(vecs.size()); ++i) {
            if (used[i])
                continue;
            double n = resid[i].norm();
            if (n > best_norm) {
                best_norm = n;
                best = i;
            }
        }
        if (best < 0)
            break;
        used[best] = true;
        Vector q = resid[best] / best_norm;
        // re-orthogonalise once for numerical hygiene
        for (auto const &b : basis)
            q -= b * b.dot(q);
        q.normalize();
        basis.push_back(q);
        order.push_back(best);
        for (Index i = 0; i < static_cast<Index>(vecs.size()); ++i)
            if (!used[i])
                resid[i] -= q * q.dot(resid[i]);
    }
    return order;
}

// Orthonormalise `vecs` following a prescribed pivot order (no choice).
// Used for the dst side so that matched columns correspond.
static std::vector<Vector> follow_order(std::vector<Vector> const &vecs,
                                        std::vector<Index> const &order)
{
    std::vector<Vector> basis;
    for (Index idx : order) {
        Vector q = vecs[idx];
        for (auto const &b : basis)
            q -= b * b.dot(q);
        double n = q.norm();
        if (n <= 0)
            throw GramMismatch("rank collapse while matching collections");
        q /= n;
        for (auto const &b : basis)
            q -= b * b.dot(q);
        q.normalize();
        basis.push_back(q);
    }
    return basis;
}

void gram_match_bases(std::vector<Vector> const &src,
                      std::vector<Vector> const &dst, double tol, Matrix &qs,
                      Matrix &qd)
{
    if (src.size() != dst.size())
        throw ShapeError("gram match: collections of differing size");
    Index n = src.empty() ? 0 : src[0].size();
    for (auto const &v : src)
        if (v.size() != n)
            throw ShapeError("gram match: src dimension mismatch");
    for (auto const &v : dst)
        if (v.size() != n)
            throw ShapeError("gram match: src and dst dimensions differ");

    double scale = 1.0;
    for (auto const &v : src)
        scale = std::max(scale, v.squaredNorm());
    if (max_norm(gram(src) - gram(dst)) > tol * scale)
        throw GramMismatch("Gram matrices differ beyond tolerance");

    double rank_tol = std::max(tol, Tol::rank);
    std::vector<Vector> bs;
    std::vector<Index> order = pivoted_basis(src, rank_tol, bs);
    std::vector<Vector> bd = follow_order(dst, order);

    // Complete both bases inside span(src) ∪ span(dst) with the same extra
    // directions, so that the matched unitary can be the identity on the
    // orthogonal complement.
    std::vector<Vector> joint = bs;
    for (auto const &v : dst) {
        Vector q = v;
        for (auto const &b : joint)
            q -= b * b.dot(q);
        double nn = q.norm();
        if (nn > rank_tol) {
            q /= nn;
            for (auto const &b : joint)
                q -= b * b.dot(q);
            q.normalize();
            joint.push_back(q);
        }
    }
    auto complete = [&](std::vector<Vector> &basis) {
        for (auto const &j : joint) {
            Vector q = j;
            for (auto const &b : basis)
                q -= b * b.dot(q);
            double nn = q.norm();
            if (nn > rank_tol) {
                q /= nn;
                for (auto const &b : basis)
                    q -= b * b.dot(q);
                q.normalize();
                basis.push_back(q);
            }
        }
    };
    complete(bs);
    complete(bd);
    if (bs.size() != bd.size())
        throw GramMismatch("span completion ranks differ");

    qs.resize(n, static_cast<Index>(bs.size()));
    qd.resize(n, static_cast<Index>(bd.size()));
    for (Index j = 0; j < qs.cols(); ++j) {
        qs.col(j) = bs[j];
        qd.col(j) = bd[j];
    }
}

Matrix unitary_from_gram_match(std::vector<Vector> const &src,
                               std::vector<Vector> const &dst, double tol)
{
    Matrix qs, qd;
    gram_match_bases(src, dst, tol, qs, qd);
    Index n = src.empty() ? 0 : src[0].size();
    Matrix u = Matrix::Identity(n, n);
    if (qs.cols() > 0)
        u += (qd - qs) * qs.adjoint();
    require_unitary(u);
    return u;
}

PsdInfo psd_utilities(Matrix const &h)
{
    require_hermitian(h);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    PsdInfo info;
    info.min_eig = h.rows() > 0 ? es.eigenvalues().minCoeff() : 0.0;
    double tol = scaled(Tol::psd, h);
    if (info.min_eig < -tol)
        throw NotPSD("matrix has eigenvalue " + std::to_string(info.min_eig));
    Index n = h.rows();
    Eigen::VectorXd root(n), pinv_root(n);
    for (Index i = 0; i < n; ++i) {
        double ev = std::max(es.eigenvalues()(i), 0.0);
        root(i) = std::sqrt(ev);
        pinv_root(i) = root(i) > std::sqrt(tol) ? 1.0 / root(i) : 0.0;
    }
    Matrix const &q = es.eigenvectors();
    info.sqrt = q * root.asDiagonal() * q.adjoint();
    info.pinv_sqrt = q * pinv_root.asDiagonal() * q.adjoint();
    return info;
}

double parallelogram_residual(std::vector<Vector> const &vectors,
                              Matrix const &u)
{
    Index d = static_cast<Index>(vectors.size());
    if (u.rows() != d || u.cols() != d)
        throw ShapeError("parallelogram: unitary must be d x d");
    require_unitary(u);
    double lhs = 0.0;
    for (auto const &v : vectors)
        lhs += v.squaredNorm();
    double rhs = 0.0;
    for (Index j = 0; j < d; ++j) {
        Vector w = Vector::Zero(vectors.empty() ? 0 : vectors[0].size());
        for (Index i = 0; i < d; ++i)
            w += u(i, j) * vectors[i];
        rhs += w.squaredNorm();
    }
    return std::abs(lhs - rhs);
}

Matrix block_hadamard(Matrix const &gamma,
                      std::vector<std::vector<Matrix>> const &delta)
{
    require_hermitian(gamma);
    Index d = gamma.rows();
    if (static_cast<Index>(delta.size()) != d)
        throw ShapeError("block hadamard: delta family size");
    Index br = d > 0 && !delta[0].empty() ? delta[0][0].rows() : 0;
    Index bc = d > 0 && !delta[0].empty() ? delta[0][0].cols() : 0;
    for (Index x = 0; x < d; ++x) {
        if (static_cast<Index>(delta[x].size()) != d)
            throw ShapeError("block hadamard: delta family size");
        for (Index y = 0; y < d; ++y)
            if (delta[x][y].rows() != br || delta[x][y].cols() != bc)
                throw ShapeError("block hadamard: block shapes differ");
    }
    double scale = 1.0;
    for (Index x = 0; x < d; ++x)
        for (Index y = 0; y < d; ++y) {
            scale = std::max(scale, max_norm(delta[x][y]));
            if (max_norm(delta[x][y] - delta[y][x].adjoint().eval()) >
                Tol::hermitian * std::max(1.0, max_norm(delta[x][y])))
                throw InvariantViolation(
                    "delta family is not adjoint-symmetric");
        }
    (void)scale;
    Matrix out = Matrix::Zero(d * br, d * bc);
    for (Index x = 0; x < d; ++x)
        for (Index y = 0; y < d; ++y)
            out.block(x * br, y * bc, br, bc) = gamma(x, y) * delta[x][y];
    return out;
}

} // namespace qlv
