#include "qlv/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

namespace qlv {

namespace {

constexpr double kZero = 1e-12;

// Cycle word starting at coordinate 0: w[t+1] = p[w[t]].
std::vector<Index> cycle_word(Permutation const &p)
{
    Index const n = static_cast<Index>(p.size());
    if (n < 1)
        throw NotACycle("empty permutation");
    std::vector<char> seen(n, 0);
    for (Index v : p) {
        if (v < 0 || v >= n || seen[v])
            throw NotACycle("input is not a permutation");
        seen[v] = 1;
    }
    std::vector<Index> w(n);
    w[0] = 0;
    for (Index t = 1; t < n; ++t) {
        w[t] = p[w[t - 1]];
        if (w[t] == 0)
            throw NotACycle("orbit of 0 is shorter than n");
    }
    if (p[w[n - 1]] != 0)
        throw NotACycle("orbit of 0 is shorter than n");
    return w;
}

// The (k, ℓ) witness of the block move w[0..k−1] + w[ℓ..n−1] + w[k..ℓ−1],
// if any. Both words start at 0, so the shared prefix length gives k.
std::optional<std::pair<Index, Index>>
related_words(std::vector<Index> const &a, std::vector<Index> const &b)
{
    Index const n = static_cast<Index>(a.size());
    Index k = 0;
    while (k < n && a[k] == b[k])
        ++k;
    if (k == n || k < 1)
        return std::nullopt; // equal words, or nothing shared beyond 0
    // b[k] must be a[ℓ] for the unique candidate ℓ.
    Index l = 0;
    while (l < n && a[l] != b[k])
        ++l;
    if (l <= k || l >= n)
        return std::nullopt;
    for (Index t = 0; t < n - l; ++t)
        if (b[k + t] != a[l + t])
            return std::nullopt;
    for (Index t = 0; t < l - k; ++t)
        if (b[k + (n - l) + t] != a[k + t])
            return std::nullopt;
    return std::make_pair(k, l);
}

Permutation word_to_perm(std::vector<Index> const &w)
{
    Index const n = static_cast<Index>(w.size());
    Permutation p(n);
    for (Index t = 0; t < n; ++t)
        p[w[t]] = w[(t + 1) % n];
    return p;
}

} // namespace

TwoLabelInstance two_label(cxd a, cxd b, Matrix const &o0, Matrix const &o1)
{
    if (std::abs(a) > 1 + kZero || std::abs(b) > 1 + kZero)
        throw RangeError("two_label overlaps must have modulus at most 1");
    if (o0.rows() != o1.rows() || o0.cols() != o1.cols())
        throw ShapeError("two_label oracle shapes differ");
    require_unitary(o0);
    require_unitary(o1);
    Index const d = o0.rows();

    Matrix delta = Matrix::Identity(d, d) - o0.adjoint() * o1;

    auto unit_pair = [](cxd c) {
        Vector v = Vector::Zero(2);
        v(0) = c;
        v(1) = std::sqrt(std::max(0.0, 1.0 - std::norm(c)));
        return v;
    };
    Vector e0 = Vector::Zero(2);
    e0(0) = 1;

    TwoLabelInstance out{
        StateConversionProblem(
            OracleFamily({"0", "1"}, {d},
                         {{"0", {o0}}, {"1", {o1}}}, OracleKind::unitary),
            2, {e0, unit_pair(a)}, {e0, unit_pair(b)}),
        0.0, a, b, 0.0, Vector::Zero(d), Vector::Zero(d)};

    if (max_norm(delta) < kZero) {
        if (std::abs(a - b) > kZero)
            throw Infeasible("equal oracles cannot change the overlap");
        return out; // bound 0, zero construction
    }
    auto triple = top_singular_triple(delta);
    out.sigma = triple.sigma;
    out.left = triple.u;
    out.right = triple.v;
    out.bound = std::abs(a - b) / spectral_norm(o0 - o1);
    return out;
}

FeasibleSolution TwoLabelInstance::boundary_solution(double w0) const
{
    if (!(w0 > 0))
        throw RangeError("boundary weight w0 must be positive");
    Index const d = problem.oracles.m_dim();
    FeasibleSolution sol;
    sol.w_dim = 1;
    BlockVector v0 = BlockVector::zero({d}, 1);
    BlockVector v1 = BlockVector::zero({d}, 1);
    if (sigma > 0) {
        // <v₀, (I−O₀*O₁) v₁> = √w0 · σ · c must equal a − b.
        cxd c = (a - b) / (sigma * std::sqrt(w0));
        v0.blocks[0].col(0) = std::sqrt(w0) * left;
        v1.blocks[0].col(0) = c * right;
    }
    sol.vectors = {v0, v1};
    return sol;
}

StateConversionProblem boolean_problem(Index n, std::vector<Index> const &domain,
                                       std::vector<int> const &values)
{
    if (n < 1 || n > 12)
        throw RangeError("boolean_problem supports 1 <= n <= 12");
    if (domain.empty())
        throw DegenerateInput("empty domain");
    if (values.size() != domain.size())
        throw ShapeError("domain and truth table sizes differ");

    std::vector<std::string> labels;
    std::map<std::string, std::vector<Matrix>> ops;
    std::vector<Vector> xi, tau;
    for (std::size_t t = 0; t < domain.size(); ++t) {
        Index const x = domain[t];
        if (x < 0 || x >= (Index{1} << n))
            throw RangeError("domain point outside {0,1}^n");
        std::string label(n, '0');
        std::vector<Matrix> blocks(n);
        for (Index i = 0; i < n; ++i) {
            int const bit = static_cast<int>((x >> (n - 1 - i)) & 1);
            label[i] = bit ? '1' : '0';
            blocks[i] = Matrix::Constant(1, 1, bit ? -1.0 : 1.0);
        }
        labels.push_back(label);
        ops.emplace(label, std::move(blocks));
        xi.push_back(Vector::Ones(1));
        tau.push_back(Vector::Constant(1, values[t] ? -1.0 : 1.0));
    }
    return StateConversionProblem(
        OracleFamily(labels, std::vector<Index>(n, 1), ops,
                     OracleKind::unitary),
        1, xi, tau);
}

bool relation_check(Permutation const &pi, Permutation const &sigma)
{
    auto wa = cycle_word(pi);
    auto wb = cycle_word(sigma);
    if (wa.size() != wb.size())
        throw ShapeError("cycles act on different ground sets");
    return related_words(wa, wb).has_value();
}

double spalek_bound(Matrix const &a)
{
    Eigen::VectorXi rows = Eigen::VectorXi::Zero(a.rows());
    Eigen::VectorXi cols = Eigen::VectorXi::Zero(a.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) {
            cxd const v = a(i, j);
            if (std::abs(v) <= 1e-9)
                continue;
            if (std::abs(v.imag()) > 1e-9 ||
                std::abs(std::abs(v.real()) - 1.0) > 1e-9)
                throw EntryDomainError("entries must be 0 or ±1");
            ++rows(i);
            ++cols(j);
        }
    double best = 0;
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            if (std::abs(a(i, j)) > 1e-9)
                best = std::max(
                    best, std::sqrt(double(rows(i)) * double(cols(j))));
    return best;
}

PermInversion perm_inversion(Index n)
{
    if (n < 3 || n > 7)
        throw RangeError("perm_inversion supports 3 <= n <= 7");

    PermInversion out;
    out.n = n;

    std::vector<std::vector<Index>> words;
    std::vector<Index> rest(n - 1);
    std::iota(rest.begin(), rest.end(), Index{1});
    do {
        std::vector<Index> w(n);
        w[0] = 0;
        std::copy(rest.begin(), rest.end(), w.begin() + 1);
        words.push_back(w);
        out.cycles.push_back(word_to_perm(w));
    } while (std::next_permutation(rest.begin(), rest.end()));
    Index const m = static_cast<Index>(words.size());

    std::vector<Index> last(m); // π⁻¹(1), i.e. the final word element
    std::vector<Permutation> inverse(m, Permutation(n));
    for (Index i = 0; i < m; ++i) {
        last[i] = words[i][n - 1];
        for (Index c = 0; c < n; ++c)
            inverse[i][out.cycles[i][c]] = c;
    }

    out.gamma = Matrix::Zero(m, m);
    for (Index i = 0; i < m; ++i)
        for (Index j = i + 1; j < m; ++j)
            if (related_words(words[i], words[j]).has_value())
                out.gamma(i, j) = out.gamma(j, i) = 1;

    Index const big = m * n;
    out.deltas = Matrix::Zero(big, big);
    out.delta_prime = Matrix::Zero(big, big);
    out.delta_dblprime = Matrix::Zero(big, big);
    Matrix gamma_delta = Matrix::Zero(big, big);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) {
            // I − O_π*O_σ, where O_π*O_σ maps c ↦ π⁻¹(σ(c)).
            Matrix block = Matrix::Identity(n, n);
            for (Index c = 0; c < n; ++c)
                block(inverse[i][out.cycles[j][c]], c) -= 1.0;
            out.deltas.block(i * n, j * n, n, n) = block;
            if (out.gamma(i, j) != 0.0) {
                gamma_delta.block(i * n, j * n, n, n) = block;
                block(last[i], last[j]) += 1.0; // remove the Δ″ entry
                out.delta_prime.block(i * n, j * n, n, n) = block;
                out.delta_dblprime(i * n + last[i], j * n + last[j]) = -1.0;
            }
        }

    out.e_exact = Matrix::Zero(m, m);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
            out.e_exact(i, j) = last[i] == last[j] ? 0.0 : 1.0;

    out.report.lam_gamma = lambda_max(out.gamma);
    out.report.lam_minus_gamma = lambda_max(Matrix(-out.gamma));
    out.report.norm_prime = spectral_norm(out.delta_prime);
    out.report.lam_dblprime = lambda_max(out.delta_dblprime);
    out.report.lam_delta = lambda_max(gamma_delta);
    out.report.spalek = spalek_bound(out.delta_prime);
    out.report.lam_exact =
        lambda_max(Matrix(out.gamma.cwiseProduct(out.e_exact)));
    out.report.ratio = out.report.lam_exact / out.report.lam_delta;
    return out;
}

} // namespace qlv
