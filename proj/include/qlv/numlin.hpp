#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qlv/errors.hpp"

// Dense complex linear-algebra substrate: Hermitian eigenvalues, SVD, Gram
// matrices, unitary completion from Gram-matched vector collections, and PSD
// utilities. Everything is double-precision and dense; dimensions are desk
// scale (up to a few thousand).

namespace qlv {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Default tolerances. All matrix checks scale these by max(1, max-norm of
// the input), since the formulas are stated for exact arithmetic.
struct Tol {
    static constexpr double hermitian = 1e-10;
    static constexpr double unitary = 1e-9;
    static constexpr double eig = 1e-10;
    static constexpr double psd = 1e-10;
    static constexpr double posdef_margin = 1e-8;
    static constexpr double class_tol = 1e-9;
    static constexpr double rank = 1e-9;
    static constexpr double eps_div = 1e-12;
    static constexpr int max_halvings = 30;
};

double max_norm(Matrix const &a);

bool is_hermitian(Matrix const &a, double tol = Tol::hermitian);
bool is_unitary(Matrix const &a, double tol = Tol::unitary);

// Throwing variants used to enforce type invariants at construction sites.
void require_hermitian(Matrix const &a, double tol = Tol::hermitian);
void require_unitary(Matrix const &a, double tol = Tol::unitary);
void require_finite(Matrix const &a);

// Largest eigenvalue of a Hermitian matrix.
double lambda_max(Matrix const &h);

// Largest singular value. Defined for any rectangular matrix.
double spectral_norm(Matrix const &a);

struct SingularTriple {
    double sigma;
    Vector u; // left, normalised
    Vector v; // right, normalised
};

// Top singular triple, a v = sigma u. Throws DegenerateInput on the zero
// matrix.
SingularTriple top_singular_triple(Matrix const &a);

// Gram matrix G[x,y] = <vec_x, vec_y>, conjugate-linear in the first slot.
Matrix gram(std::vector<Vector> const &vectors);

// A unitary U with U src_x ~= dst_x for every x, valid whenever the two
// collections have (approximately) equal Gram matrices. Built by pivoted
// orthonormalisation of src, with dst orthonormalised in the same pivot
// order; both bases are completed within span(src) ∪ span(dst) and U is the
// identity on the orthogonal complement.
Matrix unitary_from_gram_match(std::vector<Vector> const &src,
                               std::vector<Vector> const &dst, double tol);

// The basis pair behind unitary_from_gram_match: orthonormal columns qs and
// qd spanning span(src) ∪ span(dst) such that the unitary sending column i
// of qs to column i of qd (and fixing the complement) maps src_x to dst_x.
void gram_match_bases(std::vector<Vector> const &src,
                      std::vector<Vector> const &dst, double tol, Matrix &qs,
                      Matrix &qd);

struct PsdInfo {
    double min_eig;
    Matrix sqrt;      // PSD square root, eigenvalues in [-psd_tol, 0) clamped
    Matrix pinv_sqrt; // pseudoinverse of sqrt, small eigenvalues dropped
};

// Eigendecomposition-backed PSD utilities. min_eig is always reported; the
// roots throw NotPSD when min_eig < -psd_tol (scaled).
PsdInfo psd_utilities(Matrix const &h);

// |sum_j ||v_j||^2 - sum_j ||sum_i U(i,j) v_i||^2|, which vanishes for any
// unitary U (generalised parallelogram identity).
double parallelogram_residual(std::vector<Vector> const &vectors,
                              Matrix const &u);

// Block matrix with block (x,y) = gamma[x,y] * delta[x][y]. All delta blocks
// must share one shape and satisfy delta[x][y] = delta[y][x]^*.
Matrix block_hadamard(Matrix const &gamma,
                      std::vector<std::vector<Matrix>> const &delta);

} // namespace qlv
