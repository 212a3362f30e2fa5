#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "woldlab/dirichlet_model.hpp"
#include "woldlab/wold.hpp"

namespace woldlab {

struct ExampleSpec
{
    std::string                        name;
    std::map<std::string, std::string> params;

    int    get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
};

/// Answers known from the construction.
struct Expectation
{
    std::vector<std::pair<Index, Index>> single_dims; // (dim h_inf, dim wandering) per operator
    std::vector<bool>                    single_pass;
    std::map<std::string, Index>         pieces;      // α bitstring -> dim; empty for n = 1
    std::map<std::string, Index>         structural;  // h00, h01, h10, h11
    std::optional<bool>                  two_isometric;
    std::optional<bool>                  toral;
    std::optional<bool>                  lic;
    std::optional<bool>                  model_pass;
};

struct Example
{
    ExampleSpec                spec;
    std::string                description;
    std::vector<DenseOperator> ops;
    std::optional<ModelSpec>   model;       // set when ops are (M_z1, M_z2) on a model space
    std::optional<GradedSpace> graded;      // set for graded pairs
    Expectation                expect;
};

inline int ExampleSpec::get_int(const std::string& key, int fallback) const
{
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
        std::size_t used = 0;
        const int   v    = std::stoi(it->second, &used);
        if (used == it->second.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidArgument, "parameter '" + key + "' is not an integer: " + it->second);
}

inline double ExampleSpec::get_double(const std::string& key, double fallback) const
{
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
        std::size_t  used = 0;
        const double v    = std::stod(it->second, &used);
        if (used == it->second.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidArgument, "parameter '" + key + "' is not a number: " + it->second);
}

inline std::string ExampleSpec::get_string(const std::string& key, const std::string& fallback) const
{
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

namespace gallery {

/// Uniform doubles from the top 53 bits, so sequences do not depend on the
/// standard library's distribution implementations.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

    double normal()
    {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
    }

    Complex complex_normal() { return {normal(), normal()}; }

private:
    std::mt19937_64 engine_;
};

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
inline Matrix random_unitary(Index d, Rng& rng)
{
    Matrix z(d, d);
    for (Index j = 0; j < d; ++j)
        for (Index i = 0; i < d; ++i) z(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < d; ++j) {
        const double a = std::abs(r(j, j));
        if (a > 0.0) q.col(j) *= r(j, j) / a;
    }
    return q;
}

/// Commuting unitaries V D_i V^H with a shared random eigenbasis.
inline std::vector<Matrix> commuting_unitaries(Index d, std::size_t count, Rng& rng)
{
    const Matrix v = random_unitary(d, rng);
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < count; ++k) {
        Matrix diag = Matrix::Zero(d, d);
        for (Index i = 0; i < d; ++i) diag(i, i) = std::polar(1.0, 2.0 * M_PI * rng.uniform());
        out.push_back(v * diag * v.adjoint());
    }
    return out;
}

inline DenseOperator unitary_op(Index d, Rng& rng)
{
    return DenseOperator(random_unitary(d, rng), InnerProductSpace(d));
}

/// Truncated Hardy shift on polynomials of degree <= cap.
inline DenseOperator hardy_shift(int cap)
{
    return single_variable_shift(InnerProductSpace(cap + 1), cap);
}

inline DenseOperator dirichlet_shift(const OpValuedMeasure& mu, int cap)
{
    return single_variable_shift(one_variable_space(mu, cap), cap, mu.coeff_dim());
}

inline DenseOperator identity_on(const InnerProductSpace& s) { return identity_operator(s); }

/// Direct sum of tuples: block b contributes ops[b][i] to T_i.
inline std::vector<DenseOperator> sum_tuples(const std::vector<std::vector<DenseOperator>>& blocks)
{
    std::vector<DenseOperator> out;
    const std::size_t n = blocks.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<DenseOperator> parts;
        for (const auto& b : blocks) parts.push_back(b[i]);
        out.push_back(direct_sum(std::span<const DenseOperator>(parts)));
    }
    return out;
}

/// Tuple acting on F_1 ⊗ ... ⊗ F_n with T_i = I ⊗ .. ⊗ X_i ⊗ .. ⊗ I.
inline std::vector<DenseOperator> tensor_tuple(const std::vector<DenseOperator>& factors)
{
    std::vector<DenseOperator> out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        DenseOperator acc = i == 0 ? factors[0] : identity_on(factors[0].domain());
        for (std::size_t k = 1; k < factors.size(); ++k)
            acc = tensor(acc, k == i ? factors[k] : identity_on(factors[k].domain()));
        out.push_back(std::move(acc));
    }
    return out;
}

inline Index hardy_bidisc_dim(int cap) { return GradedSpace::basis_size(cap, 1); }

inline Example finish_model(Example ex, const ModelSpec& spec, const TolerancePolicy& tol)
{
    const auto space = gram_matrix(spec, tol);
    auto [m1, m2]    = mz_operators(space);
    ex.ops           = {m1.op, m2.op};
    ex.model         = spec;
    ex.graded        = space;
    return ex;
}

inline OpValuedMeasure named_measure(const std::string& kind, int window, const TolerancePolicy& tol)
{
    if (kind == "zero") return zero_measure(1, window);
    if (kind == "lebesgue") return lebesgue_measure(1.0, 1, window, tol);
    throw Error(ErrorCode::InvalidArgument, "gallery measures are 'zero' or 'lebesgue', got '" + kind + "'");
}

} // namespace gallery

/// Registered example names, in documentation order.
inline const std::vector<std::string>& gallery_names()
{
    static const std::vector<std::string> names{
        "unitary",        "hardy-shift",       "dirichlet-shift", "unitary-plus-shift", "scalar-2I",
        "hardy-bidisc",   "dirichlet-pair",    "unitary-pair",    "unitary-dirichlet",  "four-block",
        "structural-sum", "unitary-shift-shift", "eight-block",   "bergman-pair",       "perturbed-dirichlet",
    };
    return names;
}

inline Example make_example(const ExampleSpec& spec, const TolerancePolicy& tol = {})
{
    using namespace gallery;
    Example ex;
    ex.spec = spec;
    const auto& name = spec.name;
    Rng rng(static_cast<std::uint64_t>(spec.get_int("seed", 7)));

    if (name == "unitary") {
        const int d = spec.get_int("d", 4);
        ex.description = "random unitary on C^d";
        ex.ops = {unitary_op(d, rng)};
        ex.expect.single_dims = {{d, 0}};
        ex.expect.single_pass = {true};
        ex.expect.two_isometric = true;
        return ex;
    }
    if (name == "hardy-shift") {
        const int cap = spec.get_int("cap", 5);
        ex.description = "shift on polynomials of degree <= cap, Hardy norm";
        ex.ops = {hardy_shift(cap)};
        ex.expect.single_dims = {{0, cap + 1}};
        ex.expect.single_pass = {true};
        ex.expect.two_isometric = true;
        return ex;
    }
    if (name == "dirichlet-shift") {
        const int cap = spec.get_int("cap", 4);
        const double scale = spec.get_double("scale", 1.0);
        ex.description = "M_z on the truncated Dirichlet-type space D(scale * Lebesgue)";
        ex.ops = {dirichlet_shift(lebesgue_measure(scale, 1, std::max(cap - 1, 0), tol), cap)};
        ex.expect.single_dims = {{0, cap + 1}};
        ex.expect.single_pass = {true};
        ex.expect.two_isometric = true;
        return ex;
    }
    if (name == "unitary-plus-shift") {
        const int d = spec.get_int("d", 3), cap = spec.get_int("cap", 4);
        ex.description = "U ⊕ truncated Hardy shift";
        const std::array<DenseOperator, 2> parts{unitary_op(d, rng), hardy_shift(cap)};
        ex.ops = {direct_sum(std::span<const DenseOperator>(parts))};
        ex.expect.single_dims = {{d, cap + 1}};
        ex.expect.single_pass = {true};
        ex.expect.two_isometric = true;
        return ex;
    }
    if (name == "scalar-2I") {
        const int d = spec.get_int("d", 2);
        ex.description = "2 I on C^d (left invertible, not a 2-isometry)";
        ex.ops = {DenseOperator(Matrix(2.0 * Matrix::Identity(d, d)), InnerProductSpace(d))};
        ex.expect.single_dims = {{d, 0}};
        ex.expect.single_pass = {false};
        ex.expect.two_isometric = false;
        return ex;
    }
    if (name == "hardy-bidisc" || name == "dirichlet-pair") {
        const int cap = spec.get_int("cap", 4);
        const bool hardy = name == "hardy-bidisc";
        const auto mu1 = named_measure(spec.get_string("mu1", hardy ? "zero" : "lebesgue"), cap, tol);
        const auto mu2 = named_measure(spec.get_string("mu2", hardy ? "zero" : "lebesgue"), cap, tol);
        ex.description = hardy ? "(M_z1, M_z2) on the truncated Hardy space of the bidisc"
                               : "(M_z1, M_z2) on a truncated Dirichlet-type space D(mu1, mu2)";
        ex = finish_model(std::move(ex), ModelSpec{mu1, mu2, cap}, tol);
        const Index n = hardy_bidisc_dim(cap);
        ex.expect.single_dims = {{0, n}, {0, n}};
        ex.expect.single_pass = {true, true};
        ex.expect.pieces = {{"00", 0}, {"01", 0}, {"10", 0}, {"11", n}};
        ex.expect.structural = {{"h00", 0}, {"h01", 0}, {"h10", 0}, {"h11", n}};
        ex.expect.two_isometric = ex.expect.toral = ex.expect.lic = ex.expect.model_pass = true;
        return ex;
    }
    if (name == "unitary-pair") {
        const int d = spec.get_int("d", 3);
        ex.description = "commuting unitary pair with a shared eigenbasis";
        const auto us = commuting_unitaries(d, 2, rng);
        ex.ops = {DenseOperator(us[0], InnerProductSpace(d)), DenseOperator(us[1], InnerProductSpace(d))};
        ex.expect.single_dims = {{d, 0}, {d, 0}};
        ex.expect.single_pass = {true, true};
        ex.expect.pieces = {{"00", d}, {"01", 0}, {"10", 0}, {"11", 0}};
        ex.expect.structural = {{"h00", d}, {"h01", 0}, {"h10", 0}, {"h11", 0}};
        ex.expect.two_isometric = ex.expect.toral = ex.expect.lic = true;
        return ex;
    }
    if (name == "unitary-dirichlet") {
        const int d = spec.get_int("d", 2), cap = spec.get_int("cap", 4);
        ex.description = "(U ⊗ I, I ⊗ M_z) on C^d ⊗ D(Lebesgue)";
        ex.ops = tensor_tuple({unitary_op(d, rng), dirichlet_shift(lebesgue_measure(1.0, 1, cap, tol), cap)});
        const Index n = Index(d) * (cap + 1);
        ex.expect.single_dims = {{n, 0}, {0, n}};
        ex.expect.single_pass = {true, true};
        ex.expect.pieces = {{"00", 0}, {"01", n}, {"10", 0}, {"11", 0}};
        ex.expect.structural = {{"h00", 0}, {"h01", n}, {"h10", 0}, {"h11", 0}};
        ex.expect.two_isometric = ex.expect.toral = ex.expect.lic = true;
        return ex;
    }
    if (name == "four-block") {
        const int d = spec.get_int("d", 2), cap = spec.get_int("cap", 3);
        ex.description = "(U1 ⊗ I, I ⊗ U2) ⊕ (U ⊗ I, I ⊗ S) ⊕ (S ⊗ I, I ⊗ U) ⊕ (M_z1, M_z2) on H^2(D^2)";
        const auto b00 = tensor_tuple({unitary_op(d, rng), unitary_op(d, rng)});
        const auto b01 = tensor_tuple({unitary_op(d, rng), hardy_shift(cap)});
        const auto b10 = tensor_tuple({hardy_shift(cap), unitary_op(d, rng)});
        const auto [m1, m2] = mz_operators(GradedSpace::hardy(cap));
        ex.ops = sum_tuples({b00, b01, b10, {m1.op, m2.op}});
        const Index n00 = Index(d) * d, n01 = Index(d) * (cap + 1), n10 = n01, n11 = hardy_bidisc_dim(cap);
        ex.expect.single_dims = {{n00 + n01, n10 + n11}, {n00 + n10, n01 + n11}};
        ex.expect.single_pass = {true, true};
        ex.expect.pieces = {{"00", n00}, {"01", n01}, {"10", n10}, {"11", n11}};
        ex.expect.structural = {{"h00", n00}, {"h01", n01}, {"h10", n10}, {"h11", n11}};
        ex.expect.two_isometric = ex.expect.toral = ex.expect.lic = true;
        return ex;
    }
    if (name == "structural-sum") {
        const int d = spec.get_int("d", 2), cap = spec.get_int("cap", 3);
        ex.description = "unitary pair ⊕ (U ⊗ I, I ⊗ M_z on D(2 Lebesgue)) ⊕ (M_z1, M_z2) on D(Lebesgue, Lebesgue/2)";
        const auto us = commuting_unitaries(d, 2, rng);
        const std::vector<DenseOperator> b00{DenseOperator(us[0], InnerProductSpace(d)),
                                             DenseOperator(us[1], InnerProductSpace(d))};
        const auto b01 = tensor_tuple({unitary_op(d, rng), dirichlet_shift(lebesgue_measure(2.0, 1, cap, tol), cap)});
        const auto space = gram_matrix(
            ModelSpec{lebesgue_measure(1.0, 1, cap, tol), lebesgue_measure(0.5, 1, cap, tol), cap}, tol);
        const auto [m1, m2] = mz_operators(space);
        ex.ops = sum_tuples({b00, b01, {m1.op, m2.op}});
        const Index n01 = Index(d) * (cap + 1), n11 = hardy_bidisc_dim(cap);
        ex.expect.single_dims = {{d + n01, n11}, {d, n01 + n11}};
        ex.expect.single_pass = {true, true};
        ex.expect.pieces = {{"00", d}, {"01", n01}, {"10", 0}, {"11", n11}};
        ex.expect.structural = {{"h00", d}, {"h01", n01}, {"h10", 0}, {"h11", n11}};
        ex.expect.two_isometric = ex.expect.toral = ex.expect.lic = true;
        return ex;
    }
    if (name == "unitary-shift-shift") {
        const int d = spec.get_int("d", 2), cap = spec.get_int("cap", 2);
        ex.description = "commuting unitary triple ⊕ (U ⊗ I, I ⊗ M_z1, I ⊗ M_z2) on C^d ⊗ H^2(D^2)";
        const auto us = commuting_unitaries(d, 3, rng);
        std::vector<DenseOperator> b000;
        for (const auto& u : us) b000.push_back(DenseOperator(u, InnerProductSpace(d)));
        const auto [m1, m2] = mz_operators(GradedSpace::hardy(cap));
        const DenseOperator u  = unitary_op(d, rng);
        const auto          id = identity_operator(m1.op.domain());
        const std::vector<DenseOperator> b011{tensor(u, id), tensor(identity_operator(u.domain()), m1.op),
                                              tensor(identity_operator(u.domain()), m2.op)};
        ex.ops = sum_tuples({b000, b011});
        const Index n011 = Index(d) * hardy_bidisc_dim(cap);
        ex.expect.single_dims = {{d + n011, 0}, {d, n011}, {d, n011}};
        ex.expect.single_pass = {true, true, true};
        for (const auto& a : all_alphas(3)) ex.expect.pieces[alpha_string(a)] = 0;
        ex.expect.pieces["000"] = d;
        ex.expect.pieces["011"] = n011;
        ex.expect.lic = true;
        return ex;
    }
    if (name == "eight-block") {
        const int d = spec.get_int("d", 2), cap = spec.get_int("cap", 1);
        ex.description = "⊕ over α of tensor triples, factor i a unitary (α_i = 0) or a Hardy shift (α_i = 1)";
        std::vector<std::vector<DenseOperator>> blocks;
        std::vector<Index> h_inf(3, 0), total(1, 0);
        for (const auto& a : all_alphas(3)) {
            std::vector<DenseOperator> factors;
            Index dim = 1;
            for (int ai : a) {
                factors.push_back(ai == 0 ? unitary_op(d, rng) : hardy_shift(cap));
                dim *= ai == 0 ? d : cap + 1;
            }
            blocks.push_back(tensor_tuple(factors));
            ex.expect.pieces[alpha_string(a)] = dim;
            total[0] += dim;
            for (std::size_t i = 0; i < 3; ++i)
                if (a[i] == 0) h_inf[i] += dim;
        }
        ex.ops = sum_tuples(blocks);
        for (std::size_t i = 0; i < 3; ++i) ex.expect.single_dims.push_back({h_inf[i], total[0] - h_inf[i]});
        ex.expect.single_pass = {true, true, true};
        ex.expect.lic = true;
        return ex;
    }
    if (name == "bergman-pair") {
        const int cap = spec.get_int("cap", 4);
        ex.description = "(M_z1, M_z2) with ||z1^m z2^n||^2 = 1/((m+1)(n+1)): not toral 2-isometric";
        auto h = GradedSpace::hardy(cap);
        Matrix g = Matrix::Zero(h.dim(), h.dim());
        for (Index j = 0; j < h.dim(); ++j) {
            const auto mn = h.monomial_of(j);
            g(j, j) = 1.0 / ((mn.m + 1.0) * (mn.n + 1.0));
        }
        const GradedSpace space(cap, 1, InnerProductSpace(g, tol));
        const auto [m1, m2] = mz_operators(space);
        ex.ops = {m1.op, m2.op};
        ex.graded = space;
        const Index n = h.dim();
        ex.expect.single_dims = {{0, n}, {0, n}};
        ex.expect.single_pass = {true, true};
        ex.expect.pieces = {{"00", 0}, {"01", 0}, {"10", 0}, {"11", n}};
        ex.expect.two_isometric = false;
        ex.expect.toral = false;
        ex.expect.lic = true;
        return ex;
    }
    if (name == "perturbed-dirichlet") {
        const int cap = spec.get_int("cap", 3);
        const double eps = spec.get_double("eps", 0.3);
        ex.description = "D(Lebesgue, Lebesgue) Gram with <z1, z2> = eps: breaks the monomial separation";
        const auto base = gram_matrix(ModelSpec{lebesgue_measure(1.0, 1, cap, tol), lebesgue_measure(1.0, 1, cap, tol), cap}, tol);
        Matrix g = base.gram();
        const Index a = base.index_of({1, 0}, 0), b = base.index_of({0, 1}, 0);
        g(a, b) = eps;
        g(b, a) = eps;
        const GradedSpace space(cap, 1, InnerProductSpace(g, tol));
        const auto [m1, m2] = mz_operators(space);
        ex.ops = {m1.op, m2.op};
        ex.graded = space;
        const Index n = space.dim();
        ex.expect.single_dims = {{0, n}, {0, n}};
        ex.expect.single_pass = {true, true};
        ex.expect.model_pass = false;
        return ex;
    }
    throw Error(ErrorCode::UnknownExample, "no gallery example named '" + name + "'");
}

inline Example make_example(const std::string& name, const TolerancePolicy& tol = {})
{
    return make_example(ExampleSpec{name, {}}, tol);
}

} // namespace woldlab
