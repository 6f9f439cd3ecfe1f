#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "qlv/problems.hpp"

using namespace qlv;
using test::Rng;

namespace {

std::vector<Index> word_of(Permutation const &p)
{
    std::vector<Index> w(p.size());
    w[0] = 0;
    for (std::size_t t = 1; t < p.size(); ++t)
        w[t] = p[w[t - 1]];
    return w;
}

double min_eig(Matrix const &h) { return -lambda_max(Matrix(-h)); }

} // namespace

TEST_CASE("two-label instance")
{
    Matrix one = Matrix::Constant(1, 1, 1.0);
    Matrix minus = Matrix::Constant(1, 1, -1.0);

    SUBCASE("sign oracles, a=1, b=0")
    {
        auto inst = two_label(1.0, 0.0, one, minus);
        CHECK(inst.bound == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(max_norm(Matrix(problem_gram_gap(inst.problem) -
                              (Matrix(2, 2) << 0, 1, 1, 0).finished())) <=
              1e-12);

        auto sol = inst.boundary_solution(0.5);
        CHECK(residual(sol, inst.problem) <= 1e-12);
        auto prof = objective_profile(sol);
        CHECK(prof.values[0][0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(prof.values[1][0] == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("hyperbola boundary")
    {
        auto inst = two_label(1.0, 0.0, one, minus);
        for (double w0 : {0.1, 0.25, 1.0, 3.0}) {
            auto sol = inst.boundary_solution(w0);
            CHECK(residual(sol, inst.problem) <= 1e-12);
            auto prof = objective_profile(sol);
            CHECK(prof.values[0][0] == doctest::Approx(w0).epsilon(1e-12));
            CHECK(prof.values[1][0] ==
                  doctest::Approx(inst.bound * inst.bound / w0)
                      .epsilon(1e-12));
        }
    }

    SUBCASE("equal overlaps need no queries")
    {
        auto inst = two_label(cxd(0.3, 0.1), cxd(0.3, 0.1), one, minus);
        CHECK(inst.bound == 0.0);
        auto sol = inst.boundary_solution(1.0);
        CHECK(residual(sol, inst.problem) <= 1e-12);
        FeasibleSolution zero;
        zero.w_dim = 1;
        zero.vectors = {BlockVector::zero({1}, 1), BlockVector::zero({1}, 1)};
        CHECK(residual(zero, inst.problem) <= 1e-12);
    }

    SUBCASE("random unitary oracles")
    {
        Rng rng(411);
        for (int rep = 0; rep < 5; ++rep) {
            Matrix o0 = test::random_unitary(rng, 3);
            Matrix o1 = test::random_unitary(rng, 3);
            cxd a(0.4, 0.3), b(-0.2, 0.5);
            auto inst = two_label(a, b, o0, o1);
            CHECK(inst.bound ==
                  doctest::Approx(std::abs(a - b) / spectral_norm(o0 - o1))
                      .epsilon(1e-12));
            auto sol = inst.boundary_solution(0.7);
            CHECK(residual(sol, inst.problem) <= 1e-12);
            auto prof = objective_profile(sol);
            CHECK(prof.values[0][0] == doctest::Approx(0.7).epsilon(1e-10));
            CHECK(prof.values[1][0] ==
                  doctest::Approx(inst.bound * inst.bound / 0.7)
                      .epsilon(1e-10));
        }
    }

    SUBCASE("errors")
    {
        CHECK_THROWS_AS(two_label(1.0, 0.0, one, one), Infeasible);
        CHECK_THROWS_AS(two_label(1.5, 0.0, one, minus), RangeError);
        auto inst = two_label(1.0, 0.0, one, minus);
        CHECK_THROWS_AS(inst.boundary_solution(0.0), RangeError);
        CHECK_THROWS_AS(inst.boundary_solution(-1.0), RangeError);
    }
}

TEST_CASE("boolean phase problems")
{
    SUBCASE("constant function has zero gap")
    {
        auto p = boolean_problem(2, {0, 1, 2, 3}, {1, 1, 1, 1});
        CHECK(max_norm(problem_gram_gap(p)) <= 1e-12);
        FeasibleSolution zero;
        zero.w_dim = 1;
        for (Index x = 0; x < 4; ++x)
            zero.vectors.push_back(BlockVector::zero({1, 1}, 1));
        CHECK(residual(zero, p) <= 1e-12);
    }

    SUBCASE("n=1 identity reduces to the two-label gap")
    {
        auto p = boolean_problem(1, {0, 1}, {0, 1});
        Matrix gap = problem_gram_gap(p);
        CHECK(max_norm(Matrix(gap - (Matrix(2, 2) << 0, 2, 2, 0).finished())) <=
              1e-12);
        CHECK(p.oracles.blocks("0")[0](0, 0) == cxd(1, 0));
        CHECK(p.oracles.blocks("1")[0](0, 0) == cxd(-1, 0));

        DualCertificate cert((Matrix(2, 2) << 0, 1, 1, 0).finished());
        auto bound = dual_bound(cert, p);
        CHECK(bound.lam_E == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(bound.lam_delta[0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(bound.bound_singleoracle == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("label bit order")
    {
        auto p = boolean_problem(2, {1}, {0});
        CHECK(p.oracles.labels()[0] == "01");
        CHECK(p.oracles.blocks("01")[0](0, 0) == cxd(1, 0));  // x_1 = 0
        CHECK(p.oracles.blocks("01")[1](0, 0) == cxd(-1, 0)); // x_2 = 1
    }

    SUBCASE("OR on two bits: best certificate in a line scan is sqrt(2)")
    {
        auto p = boolean_problem(2, {0, 1, 2, 3}, {0, 1, 1, 1});
        double best = 0;
        for (int step = 0; step <= 40; ++step) {
            double t = step / 40.0;
            Matrix g = Matrix::Zero(4, 4);
            g(0, 1) = g(1, 0) = 1;
            g(0, 2) = g(2, 0) = 1;
            g(0, 3) = g(3, 0) = t;
            auto bound = dual_bound(DualCertificate(g), p);
            // lower bound on the max over x of the total complexity
            double denom =
                std::max(bound.lam_delta[0], bound.lam_delta[1]);
            best = std::max(best, bound.lam_E / denom);
        }
        CHECK(best == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    }

    SUBCASE("errors")
    {
        CHECK_THROWS_AS(boolean_problem(2, {}, {}), DegenerateInput);
        CHECK_THROWS_AS(boolean_problem(0, {0}, {0}), RangeError);
        CHECK_THROWS_AS(boolean_problem(2, {4}, {0}), RangeError);
        CHECK_THROWS_AS(boolean_problem(2, {0, 1}, {0}), ShapeError);
    }
}

TEST_CASE("cycle relation")
{
    Permutation c3a = {1, 2, 0}; // word 0,1,2
    Permutation c3b = {2, 0, 1}; // word 0,2,1

    SUBCASE("basics")
    {
        CHECK_FALSE(relation_check(c3a, c3a));
        CHECK(relation_check(c3a, c3b));
        CHECK(relation_check(c3b, c3a));
    }

    SUBCASE("equal preimage of 1 is never related")
    {
        // words 0,1,2,3 and 0,2,1,3 both end at 3
        Permutation pa = {1, 2, 3, 0};
        Permutation pb = {2, 3, 1, 0};
        CHECK(word_of(pb) == std::vector<Index>({0, 2, 1, 3}));
        CHECK_FALSE(relation_check(pa, pb));
    }

    SUBCASE("symmetry on random 5-cycles")
    {
        Rng rng(77);
        auto random_cycle = [&](Index n) {
            std::vector<Index> w(n);
            std::iota(w.begin(), w.end(), Index{0});
            std::shuffle(w.begin() + 1, w.end(), rng);
            Permutation p(n);
            for (Index t = 0; t < n; ++t)
                p[w[t]] = w[(t + 1) % n];
            return p;
        };
        for (int rep = 0; rep < 50; ++rep) {
            auto p = random_cycle(5);
            auto q = random_cycle(5);
            CHECK(relation_check(p, q) == relation_check(q, p));
        }
    }

    SUBCASE("errors")
    {
        CHECK_THROWS_AS(relation_check({1, 0, 3, 2}, {1, 2, 3, 0}), NotACycle);
        CHECK_THROWS_AS(relation_check({0, 0, 1}, {1, 2, 0}), NotACycle);
        CHECK_THROWS_AS(relation_check({1, 2, 0}, {1, 2, 3, 0}), ShapeError);
    }
}

TEST_CASE("spalek bound")
{
    CHECK(spalek_bound(Matrix::Zero(3, 4)) == 0.0);
    Matrix single = Matrix::Zero(2, 2);
    single(1, 0) = -1;
    CHECK(spalek_bound(single) == doctest::Approx(1.0));
    CHECK_THROWS_AS(spalek_bound(Matrix::Constant(2, 2, 0.5)),
                    EntryDomainError);

    Rng rng(9001);
    std::uniform_int_distribution<int> coin(-1, 1);
    for (int rep = 0; rep < 10; ++rep) {
        Matrix a = Matrix::Zero(8, 8);
        for (Index i = 0; i < 8; ++i)
            for (Index j = 0; j < 8; ++j)
                a(i, j) = double(coin(rng));
        CHECK(spectral_norm(a) <= spalek_bound(a) + 1e-9);
    }
}

TEST_CASE("permutation inversion certificate")
{
    SUBCASE("n=3 exactly")
    {
        auto inv = perm_inversion(3);
        REQUIRE(inv.cycles.size() == 2);
        CHECK(max_norm(Matrix(inv.gamma -
                              (Matrix(2, 2) << 0, 1, 1, 0).finished())) == 0.0);
        CHECK(inv.report.lam_gamma == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("spectral table, n = 3..5")
    {
        double prev_ratio = 0;
        for (Index n : {Index{3}, Index{4}, Index{5}}) {
            auto inv = perm_inversion(n);
            Index const m = static_cast<Index>(inv.cycles.size());
            double const rowsum = double((n - 1) * (n - 2)) / 2.0;

            CHECK(max_norm(Matrix(inv.gamma - inv.gamma.adjoint())) == 0.0);
            for (Index i = 0; i < m; ++i) {
                CHECK(inv.gamma(i, i) == cxd(0, 0));
                CHECK(inv.gamma.row(i).sum().real() ==
                      doctest::Approx(rowsum));
            }
            CHECK(inv.report.lam_gamma == doctest::Approx(rowsum).epsilon(1e-9));
            CHECK(inv.report.lam_minus_gamma <= double(n - 2) + 1e-9);
            CHECK(min_eig(Matrix(double(n - 2) *
                                     Matrix::Identity(m, m).eval() +
                                 inv.gamma)) >= -1e-9);
            CHECK(inv.report.lam_dblprime ==
                  doctest::Approx(inv.report.lam_minus_gamma).epsilon(1e-9));
            CHECK(inv.report.norm_prime <= inv.report.spalek + 1e-9);
            CHECK(inv.report.spalek <=
                  2.0 * std::pow(double(n), 1.5) + 1e-6);
            CHECK(inv.report.lam_delta > 0);
            // exact outputs: Γ is zero where the preimages agree, so Γ∘E = Γ
            CHECK(max_norm(Matrix(inv.gamma.cwiseProduct(inv.e_exact) -
                                  inv.gamma)) == 0.0);
            CHECK(inv.report.lam_exact ==
                  doctest::Approx(inv.report.lam_gamma).epsilon(1e-9));
            CHECK(inv.report.ratio > 0);
            CHECK(inv.report.ratio >= prev_ratio - 1e-9);
            prev_ratio = inv.report.ratio;
        }
    }

    SUBCASE("delta blocks have the three-cycle pattern")
    {
        auto inv = perm_inversion(4);
        Index const n = 4;
        Index const m = static_cast<Index>(inv.cycles.size());
        int checked = 0;
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < m; ++j) {
                if (inv.gamma(i, j) == cxd(0, 0))
                    continue;
                auto wa = word_of(inv.cycles[i]);
                auto wb = word_of(inv.cycles[j]);
                // recover the block-move witness by brute force
                Index pk = -1, pl = -1;
                for (Index k = 1; k < n - 1 && pk < 0; ++k)
                    for (Index l = k + 1; l < n && pk < 0; ++l) {
                        std::vector<Index> moved(wa.begin(), wa.begin() + k);
                        moved.insert(moved.end(), wa.begin() + l, wa.end());
                        moved.insert(moved.end(), wa.begin() + k,
                                     wa.begin() + l);
                        if (moved == wb) {
                            pk = wa[k - 1];
                            pl = wa[l - 1];
                        }
                    }
                REQUIRE(pk >= 0);
                Index const pn = wa[n - 1];
                Matrix expect = Matrix::Zero(n, n);
                expect(pk, pk) = expect(pl, pl) = expect(pn, pn) = 1;
                expect(pl, pk) = expect(pn, pl) = expect(pk, pn) = -1;
                CHECK(max_norm(Matrix(inv.deltas.block(i * n, j * n, n, n) -
                                      expect)) == 0.0);
                // Δ″ keeps exactly the (π⁻¹(1), σ⁻¹(1)) entry
                Matrix dd = inv.delta_dblprime.block(i * n, j * n, n, n);
                CHECK(dd(pn, pl) == cxd(-1, 0));
                CHECK(max_norm(Matrix(
                          dd + inv.delta_prime.block(i * n, j * n, n, n) -
                          expect)) == 0.0);
                ++checked;
            }
        CHECK(checked == m * (n - 1) * (n - 2) / 2);
    }

    SUBCASE("bounded-error outputs keep a constant fraction of the bound")
    {
        auto inv = perm_inversion(4);
        Index const n = 4, m = static_cast<Index>(inv.cycles.size());
        double const beta_sq = 2.0 * std::sqrt(2.0) / 3.0;
        std::vector<Vector> tau;
        for (Index i = 0; i < m; ++i) {
            Vector t = Vector::Zero(n + 1);
            auto w = word_of(inv.cycles[i]);
            t(w[n - 1]) = std::sqrt(1.0 - beta_sq);
            t(n) = std::sqrt(beta_sq);
            tau.push_back(t);
        }
        Matrix e(m, m);
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < m; ++j)
                e(i, j) = 1.0 - tau[i].dot(tau[j]);
        Vector u = Vector::Constant(m, 1.0 / std::sqrt(double(m)));
        double lhs =
            (u.adjoint() * inv.gamma.cwiseProduct(e) * u).value().real();
        CHECK(lhs >= (1.0 - beta_sq) * inv.report.lam_gamma - 1e-9);
        CHECK(lambda_max(Matrix(inv.gamma.cwiseProduct(e))) >= lhs - 1e-9);
    }

    SUBCASE("errors")
    {
        CHECK_THROWS_AS(perm_inversion(2), RangeError);
        CHECK_THROWS_AS(perm_inversion(8), RangeError);
    }
}
