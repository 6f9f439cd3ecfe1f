#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include "qlv/io.hpp"
#include "qlv/problems.hpp"
#include "qlv/synth.hpp"

using namespace qlv;

namespace {

struct Global {
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::optional<std::string> out;
};

// CSV rows are label,block,value. Scalar report fields use the field name
// as the label and '-' as the block; per-label tables use the label and the
// block index (or the field name for scalars like errors).
void emit_csv(std::ostream &os, Json const &report)
{
    os << "label,block,value\n";
    for (auto it = report.begin(); it != report.end(); ++it) {
        Json const &v = it.value();
        if (v.is_number())
            os << it.key() << ",-," << v.dump() << "\n";
        else if (v.is_boolean())
            os << it.key() << ",-," << (v.get<bool>() ? 1 : 0) << "\n";
        else if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i].is_number())
                    os << it.key() << "," << i << "," << v[i].dump() << "\n";
        } else if (v.is_object()) {
            for (auto jt = v.begin(); jt != v.end(); ++jt) {
                if (jt.value().is_number())
                    os << jt.key() << "," << it.key() << ","
                       << jt.value().dump() << "\n";
                else if (jt.value().is_array())
                    for (std::size_t i = 0; i < jt.value().size(); ++i)
                        if (jt.value()[i].is_number())
                            os << jt.key() << "," << i << ","
                               << jt.value()[i].dump() << "\n";
            }
        }
    }
}

void emit(Global const &g, Json const &report)
{
    if (g.out) {
        if (g.format == "csv") {
            std::ofstream os(*g.out);
            emit_csv(os, report);
        } else
            save_json(*g.out, report);
        return;
    }
    if (g.format == "csv")
        emit_csv(std::cout, report);
    else
        std::cout << report.dump(2) << '\n';
}

Json finite_or_null(double v)
{
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

StateConversionProblem load_problem(std::string const &path)
{
    return problem_from_json(load_json(path),
                             std::filesystem::path(path).parent_path());
}

Json labelled(std::vector<std::string> const &labels,
              std::vector<double> const &values)
{
    Json out = Json::object();
    for (std::size_t i = 0; i < labels.size(); ++i)
        out[labels[i]] = values[i];
    return out;
}

Json simulate_report(QueryAlgorithm const &algo,
                     StateConversionProblem const &p, double tol)
{
    auto rep = check_state_conversion(algo, p, tol);
    auto profile = las_vegas_profile(algo, p);
    return Json{{"errors", labelled(p.oracles.labels(), rep.errors)},
                {"max_error", rep.max_error},
                {"pass", rep.pass},
                {"profile", profile_json(profile, p.oracles.labels())["values"]}};
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Las Vegas query complexity toolkit"};
    app.require_subcommand(1);

    Global g;
    app.add_option("--tol", g.tol, "numerical tolerance")
        ->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomised demos")
        ->capture_default_str();
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    std::string algo_path, problem_path, solution_path, gamma_path;
    std::string profile_path, report_path, augmented_path, demo_name, fn = "or";
    std::string mode = "approx";
    Index T = 64, n = 3, dim = 1, max_queries = 50000;
    double eps = 0.1, delta = 0.05, w0 = 0;
    double a_re = 1, a_im = 0, b_re = 0, b_im = 0;
    bool dense = false;

    auto *sim = app.add_subcommand(
        "simulate", "check a state conversion and report the profile");
    sim->add_option("algorithm", algo_path)->required();
    sim->add_option("problem", problem_path)->required();
    sim->add_option("-o,--out", g.out, "write the report here");

    auto *ext = app.add_subcommand(
        "extract", "turn an algorithm into a feasible solution");
    ext->add_option("algorithm", algo_path)->required();
    ext->add_option("problem", problem_path)->required();
    ext->add_option("-o,--out", g.out, "write the solution here");

    auto *syn = app.add_subcommand(
        "synth", "compile a feasible solution into an algorithm");
    syn->add_option("problem", problem_path)->required();
    syn->add_option("solution", solution_path)->required();
    syn->add_option("--mode", mode)
        ->check(CLI::IsMember({"approx", "plain", "exact"}))
        ->capture_default_str();
    syn->add_option("--T", T, "query count (approx mode)")
        ->capture_default_str();
    syn->add_option("--eps", eps, "target error (plain mode)")
        ->capture_default_str();
    syn->add_option("--delta", delta, "complexity slack (exact mode)")
        ->capture_default_str();
    syn->add_option("--max-queries", max_queries)->capture_default_str();
    syn->add_option("-o,--out", g.out, "write the algorithm here");
    syn->add_option("--report", report_path, "write a compile report here");
    syn->add_option("--augmented", augmented_path,
                    "write the catalyst-augmented problem here (approx mode)");
    syn->add_flag("--dense", dense, "store stage unitaries densely");

    auto *dual = app.add_subcommand(
        "dual", "evaluate a lower-bound certificate");
    dual->add_option("problem", problem_path)->required();
    dual->add_option("gamma", gamma_path)->required();
    dual->add_option("--profile", profile_path,
                     "check the tradeoff against this profile");
    dual->add_option("-o,--out", g.out, "write the report here");

    auto *demo = app.add_subcommand("demo", "built-in worked problems");
    demo->add_option("name", demo_name)
        ->check(CLI::IsMember({"two-label", "boolean", "perm-inv"}))
        ->required();
    demo->add_option("--a", a_re, "Re<xi_0,xi_1>")->capture_default_str();
    demo->add_option("--ai", a_im, "Im<xi_0,xi_1>")->capture_default_str();
    demo->add_option("--b", b_re, "Re<tau_0,tau_1>")->capture_default_str();
    demo->add_option("--bi", b_im, "Im<tau_0,tau_1>")->capture_default_str();
    demo->add_option("--dim", dim,
                     "oracle dimension; >1 draws seeded random unitaries")
        ->capture_default_str();
    demo->add_option("--w0", w0, "boundary weight (default: the bound)");
    demo->add_option("--fn", fn, "boolean function")
        ->check(CLI::IsMember({"or", "and", "parity"}))
        ->capture_default_str();
    demo->add_option("--n", n, "input size")->capture_default_str();
    demo->add_option("-o,--out", g.out, "write the report here");

    for (auto *sub : app.get_subcommands({}))
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            auto algo = algorithm_from_json(load_json(algo_path));
            auto p = load_problem(problem_path);
            emit(g, simulate_report(algo, p, g.tol));
        } else if (*ext) {
            auto algo = algorithm_from_json(load_json(algo_path));
            auto p = load_problem(problem_path);
            auto sol = extract(algo, p, g.tol);
            Json doc = solution_json(sol, p.oracles.labels());
            doc["residual"] = residual(sol, p);
            emit(g, doc);
        } else if (*syn) {
            auto p = load_problem(problem_path);
            auto sol = solution_from_json(load_json(solution_path),
                                          p.oracles.labels());
            Json report{{"mode", mode}};
            QueryAlgorithm algo;
            if (mode == "approx") {
                auto res = compile_approx(p, sol, T, g.tol);
                algo = std::move(res.algo);
                StateConversionProblem aug(p.oracles, algo.h_dim,
                                           res.xi_plus, res.tau_plus);
                auto rep = check_state_conversion(algo, aug, g.tol);
                report["T"] = algo.T();
                report["errors"] =
                    labelled(p.oracles.labels(), rep.errors);
                report["profile"] = profile_json(
                    las_vegas_profile(algo, aug), p.oracles.labels())["values"];
                if (!augmented_path.empty())
                    save_json(augmented_path, problem_json(aug));
            } else if (mode == "plain") {
                auto res = run_plain(p, sol, eps, g.tol);
                algo = std::move(res.algo);
                report["T"] = res.T;
                report["errors"] = labelled(p.oracles.labels(), res.errors);
                report["profile"] = profile_json(
                    las_vegas_profile(algo, p), p.oracles.labels())["values"];
            } else {
                algo = compile_exact(p, sol, delta, g.tol, max_queries);
                auto rep = check_state_conversion(algo, p, 1e-7);
                report["T"] = algo.T();
                report["errors"] = labelled(p.oracles.labels(), rep.errors);
                report["profile"] = profile_json(
                    las_vegas_profile(algo, p), p.oracles.labels())["values"];
            }
            if (g.out)
                save_json(*g.out, algorithm_json(algo, dense));
            if (!report_path.empty())
                save_json(report_path, report);
            if (!g.out && report_path.empty())
                std::cout << report.dump(2) << '\n';
        } else if (*dual) {
            auto p = load_problem(problem_path);
            auto cert = certificate_from_json(load_json(gamma_path));
            auto bound = dual_bound(cert, p);
            Json report{{"lam_E", bound.lam_E},
                        {"lam_delta", bound.lam_delta},
                        {"bound_singleoracle",
                         finite_or_null(bound.bound_singleoracle)}};
            if (!profile_path.empty()) {
                auto profile = profile_from_json(load_json(profile_path),
                                                 p.oracles.labels());
                report["tradeoff_ok"] = bound.tradeoff_ok(profile);
            }
            emit(g, report);
        } else if (*demo) {
            if (demo_name == "two-label") {
                Matrix o0 = Matrix::Constant(1, 1, 1.0);
                Matrix o1 = Matrix::Constant(1, 1, -1.0);
                if (dim > 1) {
                    std::mt19937_64 rng(g.seed);
                    std::normal_distribution<double> gauss;
                    auto haar = [&] {
                        Matrix m(dim, dim);
                        for (Index i = 0; i < dim; ++i)
                            for (Index k = 0; k < dim; ++k)
                                m(i, k) = cxd(gauss(rng), gauss(rng));
                        Eigen::HouseholderQR<Matrix> qr(m);
                        return Matrix(qr.householderQ());
                    };
                    o0 = haar();
                    o1 = haar();
                }
                auto inst =
                    two_label(cxd(a_re, a_im), cxd(b_re, b_im), o0, o1);
                Json report{{"bound", inst.bound}};
                if (inst.bound > 0 || w0 > 0) {
                    double weight = w0 > 0 ? w0 : inst.bound;
                    auto sol = inst.boundary_solution(weight);
                    report["residual"] = residual(sol, inst.problem);
                    report["profile"] = profile_json(
                        objective_profile(sol),
                        inst.problem.oracles.labels())["values"];
                    report["solution"] =
                        solution_json(sol, inst.problem.oracles.labels());
                }
                report["problem"] = problem_json(inst.problem);
                emit(g, report);
            } else if (demo_name == "boolean") {
                std::vector<Index> domain;
                std::vector<int> values;
                for (Index x = 0; x < (Index{1} << n); ++x) {
                    domain.push_back(x);
                    int const ones = __builtin_popcountll(
                        static_cast<unsigned long long>(x));
                    values.push_back(fn == "or"    ? ones > 0
                                     : fn == "and" ? ones == n
                                                   : ones % 2);
                }
                auto p = boolean_problem(n, domain, values);
                Matrix gamma = Matrix::Zero(p.d(), p.d());
                for (Index x = 0; x < p.d(); ++x)
                    for (Index y = 0; y < p.d(); ++y)
                        if (values[x] != values[y])
                            gamma(x, y) = 1;
                auto bound = dual_bound(DualCertificate(gamma), p);
                emit(g, Json{{"lam_E", bound.lam_E},
                             {"lam_delta", bound.lam_delta},
                             {"bound_singleoracle",
                              finite_or_null(bound.bound_singleoracle)},
                             {"problem", problem_json(p)}});
            } else {
                auto inv = perm_inversion(n);
                emit(g, Json{{"n", inv.n},
                             {"cycles", inv.cycles.size()},
                             {"lam_gamma", inv.report.lam_gamma},
                             {"lam_minus_gamma", inv.report.lam_minus_gamma},
                             {"norm_prime", inv.report.norm_prime},
                             {"lam_dblprime", inv.report.lam_dblprime},
                             {"lam_delta", inv.report.lam_delta},
                             {"spalek", inv.report.spalek},
                             {"lam_exact", inv.report.lam_exact},
                             {"ratio", inv.report.ratio}});
            }
        }
    } catch (Error const &e) {
        std::cerr << e.what() << '\n';
        return e.exit_code();
    } catch (std::exception const &e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    return 0;
}
