// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "woldlab/cli.hpp"
#include "woldlab/woldlab.hpp"

using namespace woldlab;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome
{
    bool        pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix scalar(double x) { return Matrix::Constant(1, 1, x); }

Matrix random_weight(int d, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = Complex(n(rng), n(rng));
    return a * a.adjoint() / double(d);
}

/// Angles in [0, 2π) with pairwise circular separation >= 1e-3.
std::vector<double> separated_angles(std::size_t count, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    std::vector<double> out;
    while (out.size() < count) {
        const double a = u(rng);
        bool ok = true;
        for (double b : out) {
            const double gap = std::abs(std::remainder(a - b, 2.0 * std::numbers::pi));
            ok = ok && gap >= 1e-3;
        }
        if (ok) out.push_back(a);
    }
    return out;
}

OpValuedMeasure random_atoms(int d, int window, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> count(1, 3);
    const auto angles = separated_angles(std::size_t(count(rng)), rng);
    std::vector<Atom> atoms;
    for (double a : angles) atoms.push_back(Atom{a, random_weight(d, rng)});
    return atomic_measure(std::move(atoms), window);
}

Subspace constants(const GradedSpace& space)
{
    return span_of(space.space(), space.space().solve(Matrix::Identity(space.dim(), space.coeff_dim())));
}

double coefficient_deviation(const OpValuedMeasure& a, const OpValuedMeasure& b, int k_max)
{
    double dev = 0.0;
    for (int k = 0; k <= k_max; ++k) dev = std::max(dev, max_abs(a.at(k) - b.at(k)));
    return dev;
}

// 1 ----------------------------------------------------------------------
Outcome model_gram_values()
{
    const int cap = 6;
    const auto space = gram_matrix(ModelSpec{lebesgue_measure(1.0, 1, cap), lebesgue_measure(1.0, 1, cap), cap});
    int bad_diag = 0, bad_mixed = 0, mixed = 0;
    for (Index a = 0; a < space.dim(); ++a)
        for (Index b = 0; b < space.dim(); ++b) {
            const auto x = space.monomial_of(a), y = space.monomial_of(b);
            if (a == b && space.gram()(a, b) != Complex(1.0 + x.m + x.n)) ++bad_diag;
            if (x.m != y.m && x.n != y.n) {
                ++mixed;
                if (space.gram()(a, b) != Complex(0.0)) ++bad_mixed;
            }
        }
    return {bad_diag == 0 && bad_mixed == 0,
            fmt("dim %lld, diagonal mismatches %d, nonzero mixed entries %d of %d", (long long)space.dim(), bad_diag,
                bad_mixed, mixed)};
}

// 2 ----------------------------------------------------------------------
Outcome toral_identity()
{
    std::mt19937_64 rng(20240502);
    const int cap = 5;
    double worst = 0.0;
    Index  window_dim = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 1 + trial % 3;
        const auto mu1 = random_atoms(d, cap, rng), mu2 = random_atoms(d, cap, rng);
        const auto [m1, m2] = mz_operators(gram_matrix(ModelSpec{mu1, mu2, cap}));
        const auto r = check_toral_two_isometry(m1.op, m2.op);
        worst = std::max(worst, r.residual);
        if (d == 1) window_dim = r.window_dim;
    }
    // degrees <= 3 at cap 5: 10 monomials per coefficient direction
    return {worst < 1e-10 && window_dim == 10,
            fmt("50 pairs, max residual %.3e, scalar window %lld monomials", worst, (long long)window_dim)};
}

// 3 ----------------------------------------------------------------------
Outcome measure_roundtrip()
{
    const int cap = 5, k_max = 3;
    std::mt19937_64 rng(77);
    const Matrix w2a = random_weight(2, rng), w2b = random_weight(2, rng);
    std::vector<std::pair<std::string, MeasureSpec>> cases;
    auto spec = [&](MeasureKind kind, int d) {
        MeasureSpec s;
        s.kind      = kind;
        s.coeff_dim = d;
        s.window    = cap;
        return s;
    };
    {
        auto s   = spec(MeasureKind::Lebesgue, 1);
        s.weight = scalar(1.0);
        cases.emplace_back("lebesgue", s);
    }
    {
        auto s  = spec(MeasureKind::Atoms, 1);
        s.atoms = {Atom{0.9, scalar(1.5)}};
        cases.emplace_back("single-atom", s);
    }
    {
        auto s  = spec(MeasureKind::Atoms, 1);
        s.atoms = {Atom{0.3, scalar(0.7)}, Atom{2.8, scalar(1.2)}};
        cases.emplace_back("two-atom", s);
    }
    {
        auto s  = spec(MeasureKind::Atoms, 2);
        s.atoms = {Atom{1.1, w2a}, Atom{4.2, w2b}};
        cases.emplace_back("2x2-atoms", s);
    }
    double worst = 0.0;
    std::string parts;
    for (const auto& [name, s] : cases) {
        const auto mu    = make_measure(s);
        // pair each measure with a different partner so both slots are exercised
        const auto other = lebesgue_measure(0.5, mu.coeff_dim(), cap);
        for (int slot = 0; slot < 2; ++slot) {
            const ModelSpec ms = slot == 0 ? ModelSpec{mu, other, cap} : ModelSpec{other, mu, cap};
            const auto space   = gram_matrix(ms);
            const auto ops     = mz_operators(space);
            const auto& t      = slot == 0 ? ops.first.op : ops.second.op;
            const double dev   = coefficient_deviation(recover_measure(t, constants(space), k_max), mu, k_max);
            worst = std::max(worst, dev);
        }
        parts += (parts.empty() ? "" : ", ") + name;
    }
    return {worst < 1e-8, fmt("%s: max deviation %.3e over k = 0..3", parts.c_str(), worst)};
}

// 4 ----------------------------------------------------------------------
Outcome model_fixed_point()
{
    const int cap = 5;
    std::mt19937_64 rng(4242);
    double worst = 0.0;
    bool   all_pass = true;
    for (int d : {2, 1}) {
        const auto mu1 = random_atoms(d, cap, rng);
        const auto mu2 = lebesgue_measure(random_weight(d, rng) + Matrix::Identity(d, d), cap);
        const auto space = gram_matrix(ModelSpec{mu1, mu2, cap});
        const auto [m1, m2] = mz_operators(space);
        const auto e = intersect(wandering_subspace(m1.op), wandering_subspace(m2.op));
        const auto r = verify_model_equivalence(m1.op, m2.op, e, cap);
        worst    = std::max(worst, r.gram_residual);
        all_pass = all_pass && r.pass && e.dim() == d;
    }
    return {worst < 1e-10 && all_pass, fmt("coeff_dim 2 and rank 1: max gram residual %.3e", worst)};
}

// 5 ----------------------------------------------------------------------
Outcome wold_vs_oracle()
{
    int checked = 0, mismatches = 0;
    for (const auto& name : gallery_names()) {
        const auto ex = make_example(name);
        for (const auto& t : ex.ops) {
            if (t.domain().dim() > 64) continue;
            const auto o = oracle::brute_force_wold_oracle(t);
            const auto r = wold_single(t);
            ++checked;
            if (r.h_inf.dim() != o.h_inf || r.wandering.dim() != o.wandering) ++mismatches;
        }
    }
    return {mismatches == 0 && checked > 0, fmt("%d operators, %d dimension mismatches", checked, mismatches)};
}

// 6 ----------------------------------------------------------------------
Outcome tuple_decomposition()
{
    const auto ex = make_example("four-block");
    const auto r  = wold_tuple(std::span<const DenseOperator>(ex.ops));
    int  nonzero = 0;
    bool dims_ok = true, pattern_ok = true;
    for (const auto& p : r.pieces) {
        const auto a = alpha_string(p.alpha);
        if (p.subspace.dim() > 0) ++nonzero;
        dims_ok = dims_ok && p.subspace.dim() == ex.expect.pieces.at(a);
        pattern_ok = pattern_ok && p.reducing_residual < 1e-8;
        for (std::size_t i = 0; i < 2; ++i)
            pattern_ok = pattern_ok && (p.alpha[i] == 0 ? p.unitary_residual[i] < 1e-8 : p.unitary_residual[i] > 1e-3);
    }

    // eight-block: piece β of (T1, T2) = piece (β, 0) ⊕ piece (β, 1) of (T1, T2, T3)
    const auto e8   = make_example("eight-block");
    const auto full = wold_tuple(std::span<const DenseOperator>(e8.ops));
    const auto head = wold_tuple(std::span<const DenseOperator>(e8.ops).first(2));
    double marg = 0.0;
    bool   marg_dims = full.pass && head.pass;
    for (const auto& p : head.pieces) {
        const auto b = alpha_string(p.alpha);
        const Subspace* s0 = nullptr;
        const Subspace* s1 = nullptr;
        for (const auto& q : full.pieces) {
            if (alpha_string(q.alpha) == b + "0") s0 = &q.subspace;
            if (alpha_string(q.alpha) == b + "1") s1 = &q.subspace;
        }
        marg_dims = marg_dims && p.subspace.dim() == s0->dim() + s1->dim();
        marg = std::max(marg, distance(p.subspace, join(*s0, *s1)));
    }

    const bool ok = nonzero == 4 && dims_ok && pattern_ok && r.orthogonality_residual < 1e-8
                    && r.completeness_residual < 1e-8 && r.pass && marg_dims && marg < 1e-8;
    return {ok, fmt("four-block pieces 4/8/8/10 %s, orthogonality %.3e, completeness %.3e; eight-block marginal %.3e",
                    dims_ok ? "ok" : "WRONG", r.orthogonality_residual, r.completeness_residual, marg)};
}

// 7 ----------------------------------------------------------------------
Outcome shimorin_duality()
{
    int checked = 0;
    double worst = 0.0;
    bool   agree = true;
    for (const auto& name : gallery_names()) {
        const auto ex = make_example(name);
        for (const auto& t : ex.ops) {
            const auto r = wold_single(t);
            if (!r.pass) continue;
            const auto d = wold_single(cauchy_dual(t));
            ++checked;
            agree = agree && d.pass;
            worst = std::max({worst, distance(r.h_inf, d.h_inf), distance(r.wandering, d.wandering)});
        }
    }
    return {agree && worst < 1e-8 && checked > 0, fmt("%d operators, max principal-angle residual %.3e", checked, worst)};
}

// 8 ----------------------------------------------------------------------
Outcome structural_pair()
{
    const auto ex = make_example("structural-sum");
    const auto s  = structural_decomposition_pair(ex.ops[0], ex.ops[1]);
    const auto& want = ex.expect.structural;
    const bool dims_ok = s.h00.dim() == want.at("h00") && s.h01.block.dim() == want.at("h01")
                         && s.h10.block.dim() == want.at("h10") && s.h11.block.dim() == want.at("h11")
                         && s.h00.dim() > 0 && s.h01.block.dim() > 0 && s.h11.block.dim() > 0;

    // constructed measures: 2·Lebesgue on E_01; Lebesgue and Lebesgue/2 on E
    double dev = 1.0;
    if (s.h01.mu_a && s.h11.mu_a && s.h11.mu_b) {
        const int d01 = int(s.h01.wandering.dim());
        const auto k1 = s.h01.mu_a->window(), k2 = s.h11.mu_a->window();
        dev = std::max({coefficient_deviation(*s.h01.mu_a, lebesgue_measure(2.0, d01, k1), k1),
                        coefficient_deviation(*s.h11.mu_a, lebesgue_measure(1.0, 1, k2), k2),
                        coefficient_deviation(*s.h11.mu_b, lebesgue_measure(0.5, 1, k2), k2)});
    }
    return {dims_ok && dev < 1e-8 && s.pass,
            fmt("dims h00 %lld, h01 %lld, h10 %lld, h11 %lld; measure deviation %.3e; gram residual %.3e",
                (long long)s.h00.dim(), (long long)s.h01.block.dim(), (long long)s.h10.block.dim(),
                (long long)s.h11.block.dim(), dev, s.gram_residual)};
}

// 9 ----------------------------------------------------------------------
Outcome negative_controls()
{
    const auto berg = make_example("bergman-pair");
    const auto toral = check_toral_two_isometry(berg.ops[0], berg.ops[1]);

    const auto pert = make_example("perturbed-dirichlet");
    const auto e    = intersect(wandering_subspace(pert.ops[0]), wandering_subspace(pert.ops[1]));
    const auto v    = verify_model_equivalence(pert.ops[0], pert.ops[1], e, pert.graded->cap());

    auto exit_code = [](std::vector<std::string> args) {
        std::ostringstream out, err;
        return cli::run_cli(args, out, err);
    };
    const int c1 = exit_code({"check", "--gallery", "bergman-pair", "--identity", "toral"});
    const int c2 = exit_code({"model", "verify", "--gallery", "perturbed-dirichlet"});

    const bool ok = !toral.pass && !v.pass && v.gram_residual > 1e-3 && c1 == 2 && c2 == 2;
    return {ok, fmt("bergman toral residual %.3e; perturbed gram residual %.3e; exit codes %d, %d", toral.residual,
                    v.gram_residual, c1, c2)};
}

// 10 ---------------------------------------------------------------------
Outcome oracle_agreement()
{
    const int cap = 8;
    std::mt19937_64 rng(100);
    std::uniform_int_distribution<int> degree(0, cap);
    std::normal_distribution<double> n(0.0, 1.0);
    double worst = 0.0;
    int    count = 0;
    for (const auto& mu : {lebesgue_measure(1.0, 1, cap), atomic_measure({Atom{1.7, scalar(0.8)}}, cap)}) {
        const auto h = one_variable_space(mu, cap);
        for (int trial = 0; trial < 100; ++trial) {
            Vector a = Vector::Zero(cap + 1);
            for (int k = 0; k <= degree(rng); ++k) a(k) = Complex(n(rng), n(rng));
            const std::vector<Complex> coeffs(a.data(), a.data() + a.size());
            const double ref = oracle::dirichlet_integral_oracle(coeffs, mu);
            worst = std::max(worst, std::abs(h.inner(a, a).real() - ref) / ref);
            ++count;
        }
    }
    return {worst < 1e-10, fmt("%d polynomials (Lebesgue, single atom), max relative deviation %.3e", count, worst)};
}

struct Criterion
{
    int                      id;
    const char*              name;
    double                   budget_s;
    std::function<Outcome()> run;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "model Gram values", 1.0, model_gram_values},
        {2, "toral identity", 30.0, toral_identity},
        {3, "measure roundtrip", 10.0, measure_roundtrip},
        {4, "model theorem fixed point", 10.0, model_fixed_point},
        {5, "Wold engine vs oracle", 5.0, wold_vs_oracle},
        {6, "tuple decomposition", 20.0, tuple_decomposition},
        {7, "Cauchy dual duality", 5.0, shimorin_duality},
        {8, "structural pair decomposition", 20.0, structural_pair},
        {9, "negative controls", 30.0, negative_controls},
        {10, "oracle agreement", 30.0, oracle_agreement},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        const bool   pass = o.pass && secs < c.budget_s;
        if (!pass) ++failures;
        std::printf("[%s] %2d %-30s %7.3fs (< %gs)  %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_s,
                    o.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
