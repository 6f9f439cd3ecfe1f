#include "qlv/io.hpp"

#include <fstream>

namespace qlv {

namespace {

Json const &field(Json const &j, char const *name)
{
    if (!j.is_object())
        throw ParseError(std::string("expected an object with field '") +
                         name + "'");
    auto it = j.find(name);
    if (it == j.end())
        throw ParseError(std::string("missing field '") + name + "'");
    return *it;
}

double number(Json const &j)
{
    if (!j.is_number())
        throw ParseError("expected a number, got " + j.dump());
    return j.get<double>();
}

Index integer(Json const &j)
{
    if (!j.is_number_integer())
        throw ParseError("expected an integer, got " + j.dump());
    return j.get<Index>();
}

std::vector<Index> index_list(Json const &j)
{
    if (!j.is_array())
        throw ParseError("expected an array of integers");
    std::vector<Index> out;
    for (auto const &e : j)
        out.push_back(integer(e));
    return out;
}

} // namespace

Json complex_json(cxd z) { return Json::array({z.real(), z.imag()}); }

cxd complex_from_json(Json const &j)
{
    if (!j.is_array() || j.size() != 2)
        throw ParseError("complex scalar must be [re, im]");
    return cxd(number(j[0]), number(j[1]));
}

Json vector_json(Vector const &v)
{
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i)
        out.push_back(complex_json(v(i)));
    return out;
}

Vector vector_from_json(Json const &j)
{
    if (!j.is_array())
        throw ParseError("vector must be an array");
    Vector v(static_cast<Index>(j.size()));
    for (Index i = 0; i < v.size(); ++i)
        v(i) = complex_from_json(j[i]);
    return v;
}

Json matrix_json(Matrix const &m)
{
    Json out = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c)
            row.push_back(complex_json(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

Matrix matrix_from_json(Json const &j)
{
    if (!j.is_array())
        throw ParseError("matrix must be an array of rows");
    Index const rows = static_cast<Index>(j.size());
    if (rows == 0)
        return Matrix(0, 0);
    if (!j[0].is_array())
        throw ParseError("matrix row must be an array");
    Index const cols = static_cast<Index>(j[0].size());
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        if (!j[r].is_array() || static_cast<Index>(j[r].size()) != cols)
            throw ParseError("ragged matrix rows");
        for (Index c = 0; c < cols; ++c)
            m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
}

Json family_json(OracleFamily const &fam)
{
    Json ops = Json::object();
    for (auto const &x : fam.labels()) {
        Json blocks = Json::array();
        for (auto const &b : fam.blocks(x))
            blocks.push_back(matrix_json(b));
        ops[x] = std::move(blocks);
    }
    return Json{{"block_dims", fam.block_dims()},
                {"kind", to_string(fam.kind())},
                {"operators", std::move(ops)}};
}

OracleFamily family_from_json(Json const &j)
{
    auto dims = index_list(field(j, "block_dims"));
    auto const &kind_doc = field(j, "kind");
    if (!kind_doc.is_string())
        throw ParseError("oracle kind must be a string");
    OracleKind kind;
    try {
        kind = oracle_kind_from_string(kind_doc.get<std::string>());
    } catch (Error const &e) {
        throw ParseError(e.what());
    }
    auto const &ops_doc = field(j, "operators");
    if (!ops_doc.is_object())
        throw ParseError("operators must be an object keyed by label");
    std::vector<std::string> labels;
    std::map<std::string, std::vector<Matrix>> ops;
    for (auto it = ops_doc.begin(); it != ops_doc.end(); ++it) {
        labels.push_back(it.key());
        std::vector<Matrix> blocks;
        if (!it.value().is_array())
            throw ParseError("operator entry must be an array of blocks");
        for (auto const &b : it.value())
            blocks.push_back(matrix_from_json(b));
        ops.emplace(it.key(), std::move(blocks));
    }
    return OracleFamily(std::move(labels), std::move(dims), std::move(ops),
                        kind);
}

Json problem_json(StateConversionProblem const &p)
{
    Json xi = Json::array(), tau = Json::array();
    for (Index x = 0; x < p.d(); ++x) {
        xi.push_back(vector_json(p.xi[x]));
        tau.push_back(vector_json(p.tau[x]));
    }
    return Json{{"oracles", family_json(p.oracles)},
                {"k_dim", p.k_dim},
                {"xi", std::move(xi)},
                {"tau", std::move(tau)}};
}

StateConversionProblem problem_from_json(Json const &j,
                                         std::filesystem::path const &base)
{
    auto const &fam_doc = field(j, "oracles");
    OracleFamily fam =
        fam_doc.is_string()
            ? family_from_json(
                  load_json(base / fam_doc.get<std::string>()))
            : family_from_json(fam_doc);
    Index k = integer(field(j, "k_dim"));
    auto states = [](Json const &doc) {
        if (!doc.is_array())
            throw ParseError("state list must be an array");
        std::vector<Vector> out;
        for (auto const &v : doc)
            out.push_back(vector_from_json(v));
        return out;
    };
    return StateConversionProblem(std::move(fam), k,
                                  states(field(j, "xi")),
                                  states(field(j, "tau")));
}

namespace {

Json step_json(Step const &step)
{
    if (step.kind == Step::Kind::block)
        return Json{{"kind", "block"},
                    {"coords", step.coords},
                    {"matrix", matrix_json(step.mat)}};
    return Json{{"kind", "rotation"},
                {"qs", matrix_json(step.qs)},
                {"qd", matrix_json(step.qd)}};
}

Step step_from_json(Json const &j)
{
    auto const &kind = field(j, "kind");
    if (kind == "block")
        return Step::dense_block(index_list(field(j, "coords")),
                                 matrix_from_json(field(j, "matrix")));
    if (kind == "rotation")
        return Step::span_rotation(matrix_from_json(field(j, "qs")),
                                   matrix_from_json(field(j, "qd")));
    throw ParseError("unknown step kind " + kind.dump());
}

} // namespace

Json algorithm_json(QueryAlgorithm const &algo, bool dense)
{
    Json doc{{"h_dim", algo.h_dim},
             {"embedding", Json{{"b_dim", algo.embedding.b_dim},
                                {"c_dim", algo.embedding.c_dim},
                                {"layout", algo.embedding.layout}}},
             {"oracle_block_dims", algo.oracle_block_dims}};
    if (dense) {
        Json unitaries = Json::array();
        for (Index t = 0; t <= algo.T(); ++t)
            unitaries.push_back(matrix_json(algo.stage_dense(t)));
        doc["unitaries"] = std::move(unitaries);
    } else {
        Json stages = Json::array();
        for (auto const &stage : algo.stages) {
            Json steps = Json::array();
            for (auto const &step : stage)
                steps.push_back(step_json(step));
            stages.push_back(std::move(steps));
        }
        doc["stages"] = std::move(stages);
    }
    return doc;
}

QueryAlgorithm algorithm_from_json(Json const &j)
{
    auto const &emb_doc = field(j, "embedding");
    QueryEmbedding emb;
    emb.b_dim = integer(field(emb_doc, "b_dim"));
    emb.c_dim = integer(field(emb_doc, "c_dim"));
    emb.layout = index_list(field(emb_doc, "layout"));
    auto dims = index_list(field(j, "oracle_block_dims"));
    Index const h = integer(field(j, "h_dim"));
    if (static_cast<Index>(emb.layout.size()) != h)
        throw ParseError("embedding layout size differs from h_dim");

    if (j.contains("unitaries")) {
        std::vector<Matrix> unitaries;
        for (auto const &u : field(j, "unitaries"))
            unitaries.push_back(matrix_from_json(u));
        return QueryAlgorithm::from_unitaries(unitaries, std::move(emb),
                                              std::move(dims));
    }
    QueryAlgorithm algo;
    algo.h_dim = h;
    algo.embedding = std::move(emb);
    algo.oracle_block_dims = std::move(dims);
    auto const &stages_doc = field(j, "stages");
    if (!stages_doc.is_array() || stages_doc.empty())
        throw ParseError("stages must be a nonempty array");
    for (auto const &stage : stages_doc) {
        if (!stage.is_array())
            throw ParseError("a stage must be an array of steps");
        StepList steps;
        for (auto const &s : stage)
            steps.push_back(step_from_json(s));
        algo.stages.push_back(std::move(steps));
    }
    algo.validate();
    return algo;
}

Json solution_json(FeasibleSolution const &sol,
                   std::vector<std::string> const &labels)
{
    if (labels.size() != sol.vectors.size())
        throw ShapeError("solution: one vector per label");
    Json vectors = Json::object();
    for (std::size_t x = 0; x < labels.size(); ++x) {
        Json blocks = Json::array();
        for (auto const &b : sol.vectors[x].blocks)
            blocks.push_back(matrix_json(b));
        vectors[labels[x]] = std::move(blocks);
    }
    return Json{{"w_dim", sol.w_dim}, {"vectors", std::move(vectors)}};
}

FeasibleSolution solution_from_json(Json const &j,
                                    std::vector<std::string> const &labels)
{
    FeasibleSolution sol;
    sol.w_dim = integer(field(j, "w_dim"));
    auto const &vectors = field(j, "vectors");
    for (auto const &x : labels) {
        auto it = vectors.find(x);
        if (it == vectors.end())
            throw ParseError("solution misses label '" + x + "'");
        BlockVector v;
        for (auto const &b : *it)
            v.blocks.push_back(matrix_from_json(b));
        sol.vectors.push_back(std::move(v));
    }
    return sol;
}

Json certificate_json(DualCertificate const &cert)
{
    return Json{{"gamma", matrix_json(cert.gamma)}};
}

DualCertificate certificate_from_json(Json const &j)
{
    return DualCertificate(matrix_from_json(field(j, "gamma")));
}

Json profile_json(ComplexityProfile const &profile,
                  std::vector<std::string> const &labels)
{
    if (labels.size() != profile.values.size())
        throw ShapeError("profile: one row per label");
    Json values = Json::object();
    for (std::size_t x = 0; x < labels.size(); ++x)
        values[labels[x]] = profile.values[x];
    return Json{{"values", std::move(values)}};
}

ComplexityProfile profile_from_json(Json const &j,
                                    std::vector<std::string> const &labels)
{
    auto const &values = field(j, "values");
    std::vector<std::vector<double>> rows;
    for (auto const &x : labels) {
        auto it = values.find(x);
        if (it == values.end())
            throw ParseError("profile misses label '" + x + "'");
        std::vector<double> row;
        for (auto const &v : *it)
            row.push_back(number(v));
        rows.push_back(std::move(row));
    }
    return ComplexityProfile(std::move(rows));
}

Json load_json(std::filesystem::path const &path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (nlohmann::json::exception const &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_json(std::filesystem::path const &path, Json const &doc)
{
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
}

} // namespace qlv
