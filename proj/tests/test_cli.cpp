#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "qlv/io.hpp"
#include "qlv/problems.hpp"

using namespace qlv;

namespace {

namespace fs = std::filesystem;

fs::path dir()
{
    auto d = fs::temp_directory_path() / "qlv_cli_tests";
    fs::create_directories(d);
    return d;
}

struct RunResult {
    int code = -1;
    std::string output;
};

RunResult run_cli(std::string const &args)
{
    auto out_file = dir() / "stdout.txt";
    std::string cmd =
        std::string(QLV_BIN) + " " + args + " > " + out_file.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult res;
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    res.output = ss.str();
    return res;
}

TwoLabelInstance sign_instance()
{
    return two_label(1.0, 0.0, Matrix::Constant(1, 1, 1.0),
                     Matrix::Constant(1, 1, -1.0));
}

std::string write(std::string const &name, Json const &doc)
{
    auto path = dir() / name;
    save_json(path, doc);
    return path.string();
}

} // namespace

TEST_CASE("simulate")
{
    // identity algorithm on a problem with xi = tau
    auto inst = two_label(cxd(0.3, 0.1), cxd(0.3, 0.1),
                          Matrix::Constant(1, 1, 1.0),
                          Matrix::Constant(1, 1, -1.0));
    auto algo = QueryAlgorithm::from_unitaries(
        {Matrix::Identity(2, 2)}, QueryEmbedding::canonical_sliced(2, 1), {1});
    auto algo_path = write("identity_algo.json", algorithm_json(algo, true));
    auto prob_path = write("fixed_problem.json", problem_json(inst.problem));

    SUBCASE("zero profile on the identity")
    {
        auto res = run_cli("simulate " + algo_path + " " + prob_path);
        REQUIRE(res.code == 0);
        Json rep = Json::parse(res.output);
        CHECK(rep["pass"].get<bool>());
        CHECK(rep["max_error"].get<double>() <= 1e-12);
        for (auto const &row : rep["profile"])
            for (auto const &v : row)
                CHECK(v.get<double>() == 0.0);
    }

    SUBCASE("csv output")
    {
        auto res = run_cli("simulate " + algo_path + " " + prob_path +
                           " --format csv");
        REQUIRE(res.code == 0);
        CHECK(res.output.rfind("label,block,value", 0) == 0);
    }

    SUBCASE("malformed json exits 2")
    {
        auto bad = dir() / "broken.json";
        std::ofstream(bad) << "{ nope";
        auto res = run_cli("simulate " + bad.string() + " " + prob_path);
        CHECK(res.code == 2);
    }

    SUBCASE("shape mismatch exits 3")
    {
        // workspace too small for the problem states
        auto small = QueryAlgorithm::from_unitaries(
            {Matrix::Identity(1, 1)}, QueryEmbedding::canonical_sliced(1, 1),
            {1});
        auto small_path = write("small_algo.json", algorithm_json(small, true));
        auto res = run_cli("simulate " + small_path + " " + prob_path);
        CHECK(res.code == 3);
    }
}

TEST_CASE("extract")
{
    auto inst = sign_instance();
    auto prob_path = write("sign_problem.json", problem_json(inst.problem));
    auto identity = QueryAlgorithm::from_unitaries(
        {Matrix::Identity(2, 2)}, QueryEmbedding::canonical_sliced(2, 1), {1});
    auto algo_path = write("identity2.json", algorithm_json(identity, true));

    SUBCASE("non-solving algorithm exits 4")
    {
        auto res = run_cli("extract " + algo_path + " " + prob_path);
        CHECK(res.code == 4);
    }

    SUBCASE("pipeline: synth exact, extract back")
    {
        auto sol_path = write("boundary.json",
                              solution_json(inst.boundary_solution(0.5),
                                            inst.problem.oracles.labels()));
        auto out_algo = (dir() / "exact_algo.json").string();
        auto res = run_cli("synth " + prob_path + " " + sol_path +
                           " --mode exact --delta 0.1 -o " + out_algo);
        REQUIRE(res.code == 0);

        auto ex = run_cli("extract " + out_algo + " " + prob_path + " -o " +
                          (dir() / "extracted.json").string());
        REQUIRE(ex.code == 0);
        Json doc = load_json(dir() / "extracted.json");
        CHECK(doc["residual"].get<double>() <= 1e-9);
        auto sol =
            solution_from_json(doc, inst.problem.oracles.labels());
        auto profile = objective_profile(sol);
        CHECK(profile.total(0) == doctest::Approx(0.5).epsilon(0.25));
        CHECK(profile.total(1) == doctest::Approx(0.5).epsilon(0.25));
    }
}

TEST_CASE("synth")
{
    auto inst = sign_instance();
    auto prob_path = write("sp.json", problem_json(inst.problem));
    auto sol_path = write("ss.json",
                          solution_json(inst.boundary_solution(0.5),
                                        inst.problem.oracles.labels()));

    SUBCASE("approx mode and the augmented pipeline")
    {
        auto out_algo = (dir() / "approx_algo.json").string();
        auto aug = (dir() / "augmented.json").string();
        auto rep_path = (dir() / "approx_report.json").string();
        auto res = run_cli("synth " + prob_path + " " + sol_path +
                           " --mode approx --T 16 -o " + out_algo +
                           " --augmented " + aug + " --report " + rep_path);
        REQUIRE(res.code == 0);
        Json rep = load_json(rep_path);
        CHECK(rep["T"].get<Index>() == 16);
        CHECK(rep["profile"]["0"][0].get<double>() ==
              doctest::Approx(0.5).epsilon(1e-9));
        CHECK(rep["profile"]["1"][0].get<double>() ==
              doctest::Approx(0.5).epsilon(1e-9));

        auto sim = run_cli("simulate " + out_algo + " " + aug);
        REQUIRE(sim.code == 0);
        Json srep = Json::parse(sim.output);
        CHECK(srep["pass"].get<bool>());
        CHECK(srep["profile"]["0"][0].get<double>() ==
              doctest::Approx(0.5).epsilon(1e-9));
    }

    SUBCASE("plain mode error bound")
    {
        auto rep_path = (dir() / "plain_report.json").string();
        auto res = run_cli("synth " + prob_path + " " + sol_path +
                           " --mode plain --eps 0.2 --report " + rep_path);
        REQUIRE(res.code == 0);
        Json rep = load_json(rep_path);
        CHECK(rep["T"].get<Index>() == 50); // ceil(4*0.5/0.04)
        for (auto const &e : rep["errors"])
            CHECK(e.get<double>() <= 0.2);
    }

    SUBCASE("budget exhaustion exits 5")
    {
        auto res = run_cli("synth " + prob_path + " " + sol_path +
                           " --mode exact --delta 0.05 --max-queries 8");
        CHECK(res.code == 5);
    }
}

TEST_CASE("dual")
{
    auto inst = sign_instance();
    auto prob_path = write("dp.json", problem_json(inst.problem));
    auto gamma_path = write(
        "gamma.json",
        certificate_json(DualCertificate(
            (Matrix(2, 2) << 0, 1, 1, 0).finished())));

    SUBCASE("two-label certificate value")
    {
        auto res = run_cli("dual " + prob_path + " " + gamma_path);
        REQUIRE(res.code == 0);
        Json rep = Json::parse(res.output);
        CHECK(rep["bound_singleoracle"].get<double>() ==
              doctest::Approx(0.5).epsilon(1e-9));
    }

    SUBCASE("tradeoff check against a profile")
    {
        auto profile_path =
            write("profile.json",
                  profile_json(objective_profile(inst.boundary_solution(0.5)),
                               inst.problem.oracles.labels()));
        auto res = run_cli("dual " + prob_path + " " + gamma_path +
                           " --profile " + profile_path);
        REQUIRE(res.code == 0);
        CHECK(Json::parse(res.output)["tradeoff_ok"].get<bool>());
    }

    SUBCASE("zero certificate is vacuous")
    {
        auto zero_path = write(
            "gamma0.json",
            certificate_json(DualCertificate(Matrix::Zero(2, 2))));
        auto res = run_cli("dual " + prob_path + " " + zero_path);
        REQUIRE(res.code == 0);
        CHECK(Json::parse(res.output)["bound_singleoracle"].is_null());
    }
}

TEST_CASE("demo")
{
    SUBCASE("two-label numbers")
    {
        auto res = run_cli("demo two-label --a 1 --b 0");
        REQUIRE(res.code == 0);
        Json rep = Json::parse(res.output);
        CHECK(rep["bound"].get<double>() == doctest::Approx(0.5));
        CHECK(rep["residual"].get<double>() <= 1e-12);
    }

    SUBCASE("perm-inv table")
    {
        auto res = run_cli("demo perm-inv --n 3");
        REQUIRE(res.code == 0);
        Json rep = Json::parse(res.output);
        CHECK(rep["lam_gamma"].get<double>() == doctest::Approx(1.0));
        CHECK(rep["cycles"].get<int>() == 2);
    }

    SUBCASE("boolean OR certificate")
    {
        auto res = run_cli("demo boolean --fn or --n 2");
        REQUIRE(res.code == 0);
        Json rep = Json::parse(res.output);
        CHECK(rep["lam_E"].get<double>() ==
              doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-9));
    }

    SUBCASE("seeded random oracles are reproducible")
    {
        auto r1 = run_cli("demo two-label --a 0.5 --b 0 --dim 3 --seed 7");
        auto r2 = run_cli("demo two-label --a 0.5 --b 0 --dim 3 --seed 7");
        REQUIRE(r1.code == 0);
        CHECK(r1.output == r2.output);
        auto r3 = run_cli("demo two-label --a 0.5 --b 0 --dim 3 --seed 8");
        CHECK(r3.output != r1.output);
    }
}
