#include "qlv/model.hpp"

#include <cmath>

namespace qlv {

std::string to_string(OracleKind k)
{
    switch (k) {
    case OracleKind::unitary:
        return "unitary";
    case OracleKind::contraction:
        return "contraction";
    default:
        return "general";
    }
}

OracleKind oracle_kind_from_string(std::string const &s)
{
    if (s == "unitary")
        return OracleKind::unitary;
    if (s == "contraction")
        return OracleKind::contraction;
    if (s == "general")
        return OracleKind::general;
    throw ParseError("unknown oracle kind '" + s + "'");
}

OracleFamily::OracleFamily(std::vector<std::string> labels,
                           std::vector<Index> block_dims,
                           std::map<std::string, std::vector<Matrix>> operators,
                           OracleKind kind)
    : labels_(std::move(labels)), block_dims_(std::move(block_dims)),
      kind_(kind)
{
    if (labels_.empty())
        throw DegenerateInput("oracle family with no labels");
    m_dim_ = 0;
    for (Index b : block_dims_) {
        if (b <= 0)
            throw ShapeError("oracle block dims must be positive");
        m_dim_ += b;
    }
    ops_.reserve(labels_.size());
    for (auto const &x : labels_) {
        auto it = operators.find(x);
        if (it == operators.end())
            throw LabelError("no operator for label '" + x + "'");
        auto const &blocks = it->second;
        if (blocks.size() != block_dims_.size())
            throw ShapeError("wrong block count for label '" + x + "'");
        for (size_t i = 0; i < blocks.size(); ++i) {
            if (blocks[i].rows() != block_dims_[i] ||
                blocks[i].cols() != block_dims_[i])
                throw ShapeError("oracle block shape mismatch for '" + x +
                                 "'");
            require_finite(blocks[i]);
            if (kind_ == OracleKind::unitary && !is_unitary(blocks[i]))
                throw InvariantViolation("non-unitary block in unitary family");
            if (kind_ == OracleKind::contraction &&
                spectral_norm(blocks[i]) > 1.0 + Tol::psd)
                throw InvariantViolation(
                    "block with norm > 1 in contraction family");
        }
        ops_.push_back(blocks);
    }
    if (operators.size() != labels_.size())
        throw LabelError("operator map mentions undeclared labels");
}

Index OracleFamily::label_index(std::string const &x) const
{
    for (size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == x)
            return static_cast<Index>(i);
    throw LabelError("unknown label '" + x + "'");
}

std::vector<Matrix> const &OracleFamily::blocks(std::string const &x) const
{
    return ops_[label_index(x)];
}

std::vector<Matrix> const &OracleFamily::blocks_at(Index xi) const
{
    if (xi < 0 || xi >= static_cast<Index>(ops_.size()))
        throw LabelError("label index out of range");
    return ops_[xi];
}

Matrix OracleFamily::full_operator(std::string const &x) const
{
    auto const &blocks = this->blocks(x);
    Matrix o = Matrix::Zero(m_dim_, m_dim_);
    Index off = 0;
    for (size_t i = 0; i < blocks.size(); ++i) {
        o.block(off, off, block_dims_[i], block_dims_[i]) = blocks[i];
        off += block_dims_[i];
    }
    return o;
}

OracleFamily OracleFamily::adjoint_family() const
{
    std::map<std::string, std::vector<Matrix>> ops;
    for (size_t i = 0; i < labels_.size(); ++i) {
        std::vector<Matrix> blocks;
        for (auto const &b : ops_[i])
            blocks.push_back(b.adjoint());
        ops[labels_[i]] = std::move(blocks);
    }
    return OracleFamily(labels_, block_dims_, std::move(ops), kind_);
}

BlockVector BlockVector::zero(std::vector<Index> const &block_dims,
                              Index w_dim)
{
    BlockVector v;
    for (Index b : block_dims)
        v.blocks.push_back(Matrix::Zero(b, w_dim));
    return v;
}

BlockVector BlockVector::concat_w(BlockVector const &other) const
{
    if (other.s() != s())
        throw ShapeError("block vector concat: block counts differ");
    BlockVector out;
    for (Index i = 0; i < s(); ++i) {
        if (other.blocks[i].rows() != blocks[i].rows())
            throw ShapeError("block vector concat: block dims differ");
        Matrix m(blocks[i].rows(), blocks[i].cols() + other.blocks[i].cols());
        m << blocks[i], other.blocks[i];
        out.blocks.push_back(std::move(m));
    }
    return out;
}

BlockVector BlockVector::pad_w(Index new_w) const
{
    if (new_w < w_dim())
        throw ShapeError("block vector pad: shrinking W");
    BlockVector out;
    for (auto const &b : blocks) {
        Matrix m = Matrix::Zero(b.rows(), new_w);
        m.leftCols(b.cols()) = b;
        out.blocks.push_back(std::move(m));
    }
    return out;
}

BlockVector BlockVector::scaled(cxd c) const
{
    BlockVector out;
    for (auto const &b : blocks)
        out.blocks.push_back(c * b);
    return out;
}

Vector BlockVector::flatten() const
{
    Index total = 0;
    for (auto const &b : blocks)
        total += b.size();
    Vector v(total);
    Index off = 0;
    for (auto const &b : blocks) {
        for (Index r = 0; r < b.rows(); ++r)
            for (Index c = 0; c < b.cols(); ++c)
                v(off + r * b.cols() + c) = b(r, c);
        off += b.size();
    }
    return v;
}

BlockVector BlockVector::unflatten(Vector const &v,
                                   std::vector<Index> const &block_dims,
                                   Index w_dim)
{
    Index total = 0;
    for (Index b : block_dims)
        total += b * w_dim;
    if (v.size() != total)
        throw ShapeError("block vector unflatten: size mismatch");
    BlockVector out;
    Index off = 0;
    for (Index bd : block_dims) {
        Matrix m(bd, w_dim);
        for (Index r = 0; r < bd; ++r)
            for (Index c = 0; c < w_dim; ++c)
                m(r, c) = v(off + r * w_dim + c);
        off += bd * w_dim;
        out.blocks.push_back(std::move(m));
    }
    return out;
}

cxd BlockVector::inner(BlockVector const &other) const
{
    if (other.s() != s())
        throw ShapeError("block vector inner: block counts differ");
    cxd acc = 0;
    for (Index i = 0; i < s(); ++i)
        acc += (blocks[i].adjoint() * other.blocks[i]).trace();
    return acc;
}

std::vector<double> dnorm_sq(BlockVector const &v)
{
    std::vector<double> out;
    out.reserve(v.blocks.size());
    for (auto const &b : v.blocks)
        out.push_back(b.squaredNorm());
    return out;
}

BlockVector apply_oracle(OracleFamily const &fam, std::string const &x,
                         BlockVector const &v)
{
    auto const &blocks = fam.blocks(x);
    if (v.s() != fam.s())
        throw ShapeError("apply_oracle: block count mismatch");
    BlockVector out;
    for (Index i = 0; i < v.s(); ++i) {
        if (v.blocks[i].rows() != fam.block_dims()[i])
            throw ShapeError("apply_oracle: block dim mismatch");
        out.blocks.push_back(blocks[i] * v.blocks[i]);
    }
    return out;
}

StateConversionProblem::StateConversionProblem(OracleFamily fam, Index k,
                                               std::vector<Vector> xi_in,
                                               std::vector<Vector> tau_in)
    : oracles(std::move(fam)), k_dim(k), xi(std::move(xi_in)),
      tau(std::move(tau_in))
{
    if (xi.size() != oracles.labels().size() || tau.size() != xi.size())
        throw ShapeError("state conversion: one xi and tau per label");
    for (auto const &v : xi)
        if (v.size() != k_dim)
            throw ShapeError("state conversion: xi dimension != k_dim");
    for (auto const &v : tau)
        if (v.size() != k_dim)
            throw ShapeError("state conversion: tau dimension != k_dim");
}

SubspaceConversionProblem::SubspaceConversionProblem(
    OracleFamily fam, Index k, std::vector<Matrix> basis_in,
    std::vector<Matrix> maps_in, SubspaceKind kind_in)
    : oracles(std::move(fam)), k_dim(k), basis(std::move(basis_in)),
      maps(std::move(maps_in)), kind(kind_in)
{
    if (basis.size() != oracles.labels().size() || maps.size() != basis.size())
        throw ShapeError("subspace conversion: one basis and map per label");
    for (size_t x = 0; x < basis.size(); ++x) {
        if (basis[x].rows() != k_dim || maps[x].rows() != k_dim ||
            maps[x].cols() != basis[x].cols())
            throw ShapeError("subspace conversion: shape mismatch");
        Matrix g = basis[x].adjoint() * basis[x];
        g -= Matrix::Identity(g.rows(), g.cols());
        if (max_norm(g) > Tol::unitary)
            throw InvariantViolation(
                "subspace basis columns are not orthonormal");
        if (kind == SubspaceKind::isometric) {
            Matrix t = maps[x].adjoint() * maps[x];
            t -= Matrix::Identity(t.rows(), t.cols());
            if (max_norm(t) > Tol::unitary)
                throw InvariantViolation("map is not isometric on its domain");
        }
    }
}

ComplexityProfile::ComplexityProfile(std::vector<std::vector<double>> v)
    : values(std::move(v))
{
    for (auto const &row : values)
        for (double e : row)
            if (!(e >= 0.0) || !std::isfinite(e))
                throw InvariantViolation(
                    "complexity profile entries must be finite and >= 0");
}

double ComplexityProfile::total(Index x) const
{
    double t = 0.0;
    for (double e : values.at(static_cast<size_t>(x)))
        t += e;
    return t;
}

double ComplexityProfile::max_total() const
{
    double t = 0.0;
    for (size_t x = 0; x < values.size(); ++x)
        t = std::max(t, total(static_cast<Index>(x)));
    return t;
}

Matrix problem_gram_gap(StateConversionProblem const &p)
{
    return gram(p.xi) - gram(p.tau);
}

} // namespace qlv
