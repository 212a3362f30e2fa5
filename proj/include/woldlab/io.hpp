#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "woldlab/gallery.hpp"

namespace woldlab::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "woldlab/1";

/// Residuals and other reals in reports: 17 significant digits.
inline std::string decimal(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

/// {"shape": [r, c], "entries": [[re, im], ...]} in row-major order.
inline Json matrix_json(const Matrix& m)
{
    Json entries = Json::array();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) entries.push_back(complex_json(m(i, j)));
    return Json{{"shape", {m.rows(), m.cols()}}, {"entries", std::move(entries)}};
}

namespace detail {

[[noreturn]] inline void schema_error(const std::string& pointer, const std::string& what)
{
    throw Error(ErrorCode::SchemaError, (pointer.empty() ? std::string("/") : pointer) + ": " + what);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& at)
{
    if (!j.is_object()) schema_error(at, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) schema_error(at + "/" + key, "missing field");
    return *it;
}

inline double number(const Json& j, const std::string& at)
{
    if (!j.is_number()) schema_error(at, "expected a number");
    return j.get<double>();
}

inline long long integer(const Json& j, const std::string& at)
{
    if (!j.is_number_integer()) schema_error(at, "expected an integer");
    return j.get<long long>();
}

inline std::string string(const Json& j, const std::string& at)
{
    if (!j.is_string()) schema_error(at, "expected a string");
    return j.get<std::string>();
}

} // namespace detail

inline Complex parse_complex(const Json& j, const std::string& at)
{
    if (!j.is_array() || j.size() != 2) detail::schema_error(at, "expected a [re, im] pair");
    return {detail::number(j[0], at + "/0"), detail::number(j[1], at + "/1")};
}

inline Matrix parse_matrix(const Json& j, const std::string& at)
{
    const auto& shape = detail::field(j, "shape", at);
    if (!shape.is_array() || shape.size() != 2) detail::schema_error(at + "/shape", "expected [rows, cols]");
    const long long r = detail::integer(shape[0], at + "/shape/0"), c = detail::integer(shape[1], at + "/shape/1");
    if (r < 0 || c < 0) detail::schema_error(at + "/shape", "negative dimension");
    const auto& entries = detail::field(j, "entries", at);
    if (!entries.is_array() || entries.size() != std::size_t(r * c))
        detail::schema_error(at + "/entries", "expected " + std::to_string(r * c) + " entries");
    Matrix m(r, c);
    for (long long i = 0; i < r; ++i)
        for (long long k = 0; k < c; ++k) {
            const auto idx = std::size_t(i * c + k);
            m(i, k) = parse_complex(entries[idx], at + "/entries/" + std::to_string(idx));
        }
    return m;
}

// measures ---------------------------------------------------------------

inline Json measure_json(const MeasureSpec& s)
{
    Json j;
    j["kind"] = to_string(s.kind);
    switch (s.kind) {
    case MeasureKind::Zero:
        j["coeff_dim"] = s.coeff_dim;
        j["window"]    = s.window;
        break;
    case MeasureKind::Lebesgue:
        j["window"] = s.window;
        if (s.weight.size() > 0) j["weight"] = matrix_json(s.weight);
        else {
            j["coeff_dim"] = s.coeff_dim;
            j["scale"]     = s.scale;
        }
        break;
    case MeasureKind::Atoms: {
        j["window"] = s.window;
        Json atoms  = Json::array();
        for (const auto& a : s.atoms) atoms.push_back(Json{{"angle", a.angle}, {"weight", matrix_json(a.weight)}});
        j["atoms"] = std::move(atoms);
        break;
    }
    case MeasureKind::Fourier: {
        Json c = Json::array();
        for (const auto& m : s.fourier) c.push_back(matrix_json(m));
        j["coefficients"] = std::move(c);
        break;
    }
    }
    return j;
}

inline MeasureSpec parse_measure(const Json& j, const std::string& at)
{
    MeasureSpec s;
    const auto kind = detail::string(detail::field(j, "kind", at), at + "/kind");
    auto opt_int = [&](const char* key, int fallback) {
        return j.contains(key) ? int(detail::integer(j[key], at + "/" + key)) : fallback;
    };
    if (kind == "zero") {
        s.kind      = MeasureKind::Zero;
        s.coeff_dim = opt_int("coeff_dim", 1);
        s.window    = int(detail::integer(detail::field(j, "window", at), at + "/window"));
    } else if (kind == "lebesgue") {
        s.kind   = MeasureKind::Lebesgue;
        s.window = int(detail::integer(detail::field(j, "window", at), at + "/window"));
        if (j.contains("weight")) {
            s.weight    = parse_matrix(j["weight"], at + "/weight");
            s.coeff_dim = int(s.weight.rows());
        } else {
            s.coeff_dim = opt_int("coeff_dim", 1);
            s.scale     = j.contains("scale") ? detail::number(j["scale"], at + "/scale") : 1.0;
        }
    } else if (kind == "atoms") {
        s.kind   = MeasureKind::Atoms;
        s.window = int(detail::integer(detail::field(j, "window", at), at + "/window"));
        const auto& atoms = detail::field(j, "atoms", at);
        if (!atoms.is_array() || atoms.empty()) detail::schema_error(at + "/atoms", "expected a nonempty array");
        for (std::size_t k = 0; k < atoms.size(); ++k) {
            const std::string p = at + "/atoms/" + std::to_string(k);
            s.atoms.push_back({detail::number(detail::field(atoms[k], "angle", p), p + "/angle"),
                               parse_matrix(detail::field(atoms[k], "weight", p), p + "/weight")});
        }
        s.coeff_dim = int(s.atoms.front().weight.rows());
    } else if (kind == "fourier") {
        s.kind = MeasureKind::Fourier;
        const auto& c = detail::field(j, "coefficients", at);
        if (!c.is_array() || c.empty()) detail::schema_error(at + "/coefficients", "expected a nonempty array");
        for (std::size_t k = 0; k < c.size(); ++k)
            s.fourier.push_back(parse_matrix(c[k], at + "/coefficients/" + std::to_string(k)));
        s.coeff_dim = int(s.fourier.front().rows());
        s.window    = int(s.fourier.size()) - 1;
    } else {
        detail::schema_error(at + "/kind", "unknown measure kind '" + kind + "'");
    }
    return s;
}

/// Descriptor of a measure that was built by make_measure.
inline MeasureSpec measure_spec_of(const OpValuedMeasure& mu)
{
    MeasureSpec s;
    s.kind      = mu.source().kind;
    s.coeff_dim = mu.coeff_dim();
    s.window    = mu.window();
    s.weight    = mu.source().weight;
    s.atoms     = mu.source().atoms;
    s.fourier   = mu.coefficients();
    return s;
}

/// Fourier window as {"k": [[re, im] ...]} rows, for reports.
inline Json fourier_json(const OpValuedMeasure& mu)
{
    Json j = Json::array();
    for (int k = 0; k <= mu.window(); ++k) j.push_back(Json{{"k", k}, {"value", matrix_json(mu.at(k))}});
    return j;
}

// operator documents -------------------------------------------------------

struct OperatorDocument
{
    std::string kind; // dense | graded | gallery

    // dense
    std::optional<Matrix>           gram;
    std::vector<Matrix>             matrices;
    std::vector<std::vector<Index>> truncated;

    // graded: either a model (mu1, mu2) or an explicit Gram
    int                        cap       = 0;
    int                        coeff_dim = 1;
    std::optional<MeasureSpec> mu1, mu2;
    std::optional<Matrix>      graded_gram;
    std::vector<std::string>   shifts{"z1", "z2"};

    // gallery
    ExampleSpec example;
};

inline Json document_json(const OperatorDocument& d)
{
    Json j;
    j["schema"] = kSchema;
    j["kind"]   = d.kind;
    if (d.kind == "dense") {
        if (d.gram) j["gram"] = matrix_json(*d.gram);
        Json ops = Json::array();
        for (std::size_t i = 0; i < d.matrices.size(); ++i) {
            Json op = matrix_json(d.matrices[i]);
            if (i < d.truncated.size() && !d.truncated[i].empty()) op["truncated_columns"] = d.truncated[i];
            ops.push_back(std::move(op));
        }
        j["operators"] = std::move(ops);
    } else if (d.kind == "graded") {
        j["cap"] = d.cap;
        if (d.mu1 && d.mu2) j["model"] = Json{{"mu1", measure_json(*d.mu1)}, {"mu2", measure_json(*d.mu2)}};
        else {
            j["coeff_dim"] = d.coeff_dim;
            j["gram"]      = matrix_json(*d.graded_gram);
        }
        j["shifts"] = d.shifts;
    } else {
        j["name"] = d.example.name;
        Json p    = Json::object();
        for (const auto& [k, v] : d.example.params) p[k] = v;
        j["params"] = std::move(p);
    }
    return j;
}

inline OperatorDocument parse_document(const Json& j)
{
    OperatorDocument d;
    if (!j.is_object()) detail::schema_error("", "expected a JSON object");
    if (j.contains("schema") && detail::string(j["schema"], "/schema") != kSchema)
        detail::schema_error("/schema", "unsupported schema '" + j["schema"].get<std::string>() + "'");
    d.kind = detail::string(detail::field(j, "kind", ""), "/kind");

    if (d.kind == "dense") {
        if (j.contains("gram")) d.gram = parse_matrix(j["gram"], "/gram");
        const auto& ops = detail::field(j, "operators", "");
        if (!ops.is_array() || ops.empty()) detail::schema_error("/operators", "expected a nonempty array");
        for (std::size_t i = 0; i < ops.size(); ++i) {
            const std::string at = "/operators/" + std::to_string(i);
            Matrix m = parse_matrix(ops[i], at);
            if (m.rows() != m.cols()) detail::schema_error(at + "/shape", "operators must be square");
            if (d.gram && d.gram->rows() != m.rows())
                detail::schema_error(at + "/shape", "does not match the gram dimension");
            if (!d.matrices.empty() && d.matrices.front().rows() != m.rows())
                detail::schema_error(at + "/shape", "operators act on different dimensions");
            std::vector<Index> trunc;
            if (ops[i].contains("truncated_columns")) {
                const auto& tc = ops[i]["truncated_columns"];
                if (!tc.is_array()) detail::schema_error(at + "/truncated_columns", "expected an array");
                for (std::size_t k = 0; k < tc.size(); ++k) {
                    const auto v = detail::integer(tc[k], at + "/truncated_columns/" + std::to_string(k));
                    if (v < 0 || v >= m.cols())
                        detail::schema_error(at + "/truncated_columns/" + std::to_string(k), "column out of range");
                    trunc.push_back(Index(v));
                }
            }
            d.matrices.push_back(std::move(m));
            d.truncated.push_back(std::move(trunc));
        }
    } else if (d.kind == "graded") {
        d.cap = int(detail::integer(detail::field(j, "cap", ""), "/cap"));
        if (d.cap < 0) detail::schema_error("/cap", "must be nonnegative");
        if (j.contains("model")) {
            d.mu1 = parse_measure(detail::field(j["model"], "mu1", "/model"), "/model/mu1");
            d.mu2 = parse_measure(detail::field(j["model"], "mu2", "/model"), "/model/mu2");
            d.coeff_dim = d.mu1->coeff_dim;
        } else {
            d.coeff_dim   = int(detail::integer(detail::field(j, "coeff_dim", ""), "/coeff_dim"));
            d.graded_gram = parse_matrix(detail::field(j, "gram", ""), "/gram");
            if (d.coeff_dim < 1) detail::schema_error("/coeff_dim", "must be positive");
            if (d.graded_gram->rows() != GradedSpace::basis_size(d.cap, d.coeff_dim)
                || d.graded_gram->cols() != d.graded_gram->rows())
                detail::schema_error("/gram/shape", "does not match cap and coeff_dim");
        }
        if (j.contains("shifts")) {
            d.shifts.clear();
            const auto& s = j["shifts"];
            if (!s.is_array() || s.empty()) detail::schema_error("/shifts", "expected a nonempty array");
            for (std::size_t k = 0; k < s.size(); ++k) {
                auto v = detail::string(s[k], "/shifts/" + std::to_string(k));
                if (v != "z1" && v != "z2") detail::schema_error("/shifts/" + std::to_string(k), "expected z1 or z2");
                d.shifts.push_back(std::move(v));
            }
        }
    } else if (d.kind == "gallery") {
        d.example.name = detail::string(detail::field(j, "name", ""), "/name");
        if (j.contains("params")) {
            if (!j["params"].is_object()) detail::schema_error("/params", "expected an object");
            for (const auto& [k, v] : j["params"].items()) {
                if (v.is_string()) d.example.params[k] = v.get<std::string>();
                else if (v.is_number()) d.example.params[k] = v.dump();
                else detail::schema_error("/params/" + k, "expected a string or number");
            }
        }
    } else {
        detail::schema_error("/kind", "expected dense, graded or gallery");
    }
    return d;
}

inline Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, path + ": " + e.what());
    }
}

/// Operators described by a document (gallery documents carry their expectations).
inline Example instantiate(const OperatorDocument& d, const TolerancePolicy& tol = {})
{
    if (d.kind == "gallery") return make_example(d.example, tol);

    Example ex;
    ex.spec.name = d.kind;
    if (d.kind == "dense") {
        const Index n = d.matrices.front().rows();
        const InnerProductSpace h = d.gram ? InnerProductSpace(*d.gram, tol) : InnerProductSpace(n);
        for (std::size_t i = 0; i < d.matrices.size(); ++i)
            ex.ops.push_back(DenseOperator(d.matrices[i], h, d.truncated[i]));
        return ex;
    }
    GradedSpace space;
    if (d.mu1 && d.mu2) {
        ModelSpec spec{make_measure(*d.mu1, tol), make_measure(*d.mu2, tol), d.cap};
        space    = gram_matrix(spec, tol);
        ex.model = spec;
    } else {
        space = GradedSpace(d.cap, d.coeff_dim, InnerProductSpace(*d.graded_gram, tol));
    }
    ex.graded = space;
    for (const auto& s : d.shifts)
        ex.ops.push_back(shift_operator(space, s == "z1" ? GradedIndex{1, 0} : GradedIndex{0, 1}).op);
    return ex;
}

/// Dense document reproducing the operators of an example.
inline OperatorDocument dense_document(const Example& ex)
{
    OperatorDocument d;
    d.kind = "dense";
    const auto& h = ex.ops.front().domain();
    if (!h.euclidean()) d.gram = h.gram();
    for (const auto& t : ex.ops) {
        d.matrices.push_back(t.matrix());
        d.truncated.push_back(t.truncated_columns());
    }
    return d;
}

} // namespace woldlab::io
