#include <gtest/gtest.h>

#include <fstream>
#include <numbers>

#include "support.hpp"

using namespace woldlab;
using namespace woldlab::testing;
using Json = nlohmann::ordered_json;

namespace {

Json expectations()
{
    std::ifstream in(std::string(WOLDLAB_DATA_DIR) + "/gallery_expectations.json");
    return Json::parse(in);
}

Matrix scalar(double x) { return Matrix::Constant(1, 1, x); }

double gram_form(const InnerProductSpace& h, const std::vector<Complex>& a)
{
    const Vector v = Eigen::Map<const Vector>(a.data(), Index(a.size()));
    return h.inner(v, v).real();
}

} // namespace

TEST(Registry, NamesAreUniqueAndInstantiable)
{
    const auto& names = gallery_names();
    EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), names.size());
    for (const auto& n : names) EXPECT_NO_THROW(make_example(n)) << n;
}

TEST(Registry, UnknownExampleThrows)
{
    try {
        make_example("no-such-example");
        FAIL() << "expected UnknownExample";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownExample);
    }
}

TEST(Registry, ParametersChangeTheConstruction)
{
    const auto ex = make_example(ExampleSpec{"four-block", {{"d", "3"}, {"cap", "2"}}});
    EXPECT_EQ(ex.ops[0].domain().dim(), 9 + 9 + 9 + 6);
    EXPECT_EQ(ex.expect.pieces.at("01"), 9);
    EXPECT_EQ(ex.expect.pieces.at("11"), 6);
}

TEST(Expectations, DataFileMatchesRegistry)
{
    const Json doc = expectations();
    ASSERT_EQ(doc.at("schema"), "woldlab/1");
    const auto& all = doc.at("examples");
    EXPECT_EQ(all.size(), gallery_names().size());
    for (const auto& name : gallery_names()) {
        ASSERT_TRUE(all.contains(name)) << name;
        const auto& j  = all.at(name);
        const auto  ex = make_example(name);
        ASSERT_EQ(j.at("single").size(), ex.expect.single_dims.size()) << name;
        for (std::size_t i = 0; i < ex.expect.single_dims.size(); ++i) {
            EXPECT_EQ(j.at("single")[i][0].get<Index>(), ex.expect.single_dims[i].first) << name;
            EXPECT_EQ(j.at("single")[i][1].get<Index>(), ex.expect.single_dims[i].second) << name;
            EXPECT_EQ(j.at("single_pass")[i].get<bool>(), bool(ex.expect.single_pass[i])) << name;
        }
        std::map<std::string, Index> pieces, structural;
        if (j.contains("pieces")) pieces = j.at("pieces").get<std::map<std::string, Index>>();
        if (j.contains("structural")) structural = j.at("structural").get<std::map<std::string, Index>>();
        EXPECT_EQ(pieces, ex.expect.pieces) << name;
        EXPECT_EQ(structural, ex.expect.structural) << name;
        const auto& flags = j.at("flags");
        auto flag = [&](const char* key) -> std::optional<bool> {
            if (!flags.contains(key)) return std::nullopt;
            return flags.at(key).get<bool>();
        };
        EXPECT_EQ(flag("two_isometric"), ex.expect.two_isometric) << name;
        EXPECT_EQ(flag("toral"), ex.expect.toral) << name;
        EXPECT_EQ(flag("lic"), ex.expect.lic) << name;
        EXPECT_EQ(flag("model_pass"), ex.expect.model_pass) << name;
    }
}

TEST(Expectations, FlagsHoldOnTheOperators)
{
    for (const auto& ex : gallery_examples()) {
        const auto& e = ex.expect;
        if (e.two_isometric) {
            bool all = true;
            for (const auto& t : ex.ops) all = all && check_two_isometry(t).pass;
            EXPECT_EQ(all, *e.two_isometric) << ex.spec.name;
        }
        if (e.toral) {
            EXPECT_EQ(check_toral_two_isometry(ex.ops[0], ex.ops[1]).pass, *e.toral) << ex.spec.name;
        }
        if (e.lic) {
            EXPECT_EQ(check_left_inverse_commuting(std::span<const DenseOperator>(ex.ops)).pass, *e.lic)
                << ex.spec.name;
        }
        if (e.model_pass) {
            const auto w = intersect(wandering_subspace(ex.ops[0]), wandering_subspace(ex.ops[1]));
            EXPECT_EQ(verify_model_equivalence(ex.ops[0], ex.ops[1], w, ex.graded->cap()).pass, *e.model_pass)
                << ex.spec.name;
        }
    }
}

TEST(Expectations, ModelPairNorms)
{
    const auto ex = make_example("dirichlet-pair");
    ASSERT_TRUE(ex.graded);
    for (Index j = 0; j < ex.graded->dim(); ++j) {
        const auto mn = ex.graded->monomial_of(j);
        EXPECT_EQ(ex.graded->gram()(j, j), Complex(1.0 + mn.m + mn.n));
    }
}

TEST(DirichletOracle, ClassicalValues)
{
    const auto leb = lebesgue_measure(1.0, 1, 4);
    EXPECT_DOUBLE_EQ(oracle::dirichlet_integral_oracle({0.0, 0.0, 1.0}, leb), 3.0);
    for (const auto& mu : {leb, zero_measure(1, 4), atomic_measure({Atom{0.4, scalar(2.0)}}, 4)})
        EXPECT_DOUBLE_EQ(oracle::dirichlet_integral_oracle({1.0}, mu), 1.0);
}

TEST(DirichletOracle, OnePlusZAtomAtZero)
{
    // (f - f(1))/(z - 1) = 1 for f = 1 + z, so D(f) = 1
    const auto mu = atomic_measure({Atom{0.0, scalar(1.0)}}, 2);
    EXPECT_NEAR(oracle::dirichlet_integral_oracle({1.0, 1.0}, mu), 3.0, 1e-15);
    EXPECT_NEAR(gram_form(one_variable_space(mu, 1), {1.0, 1.0}), 3.0, 1e-10);
}

TEST(DirichletOracle, UnsupportedMeasures)
{
    const OpValuedMeasure fourier(1, {scalar(1.0)}, MeasureSource{MeasureKind::Fourier, {}, {}, {scalar(1.0)}});
    for (const auto& mu : {fourier, lebesgue_measure(1.0, 2, 2)}) {
        try {
            oracle::dirichlet_integral_oracle({1.0, 2.0}, mu);
            FAIL() << "expected UnsupportedMeasureKind";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::UnsupportedMeasureKind);
        }
    }
}

TEST(DirichletOracle, AgreesWithGramOnRandomPolynomials)
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> degree(0, 7);
    std::normal_distribution<double> n(0.0, 1.0);
    const int cap = 7;
    for (const auto& mu : {lebesgue_measure(1.0, 1, cap), lebesgue_measure(0.3, 1, cap),
                           atomic_measure({Atom{0.0, scalar(1.0)}}, cap),
                           atomic_measure({Atom{2.0, scalar(0.7)}}, cap)}) {
        const auto h = one_variable_space(mu, cap);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Complex> a(std::size_t(cap + 1), 0.0);
            for (int k = 0; k <= degree(rng); ++k) a[std::size_t(k)] = Complex(n(rng), n(rng));
            const double ref = oracle::dirichlet_integral_oracle(a, mu);
            if (ref == 0.0) continue;
            worst = std::max(worst, std::abs(gram_form(h, a) - ref) / ref);
        }
        EXPECT_LT(worst, 1e-10) << to_string(mu.source().kind);
    }
}

TEST(WoldOracle, SpecExamples)
{
    gallery::Rng rng(4);
    const auto u = oracle::brute_force_wold_oracle(gallery::unitary_op(4, rng));
    EXPECT_EQ(u.h_inf, 4);
    EXPECT_EQ(u.wandering, 0);
    const auto s = oracle::brute_force_wold_oracle(gallery::hardy_shift(5));
    EXPECT_EQ(s.h_inf, 0);
    EXPECT_EQ(s.wandering, 6);
    const auto b = oracle::brute_force_wold_oracle(make_example("unitary-plus-shift").ops[0]);
    EXPECT_EQ(b.h_inf, 3);
    EXPECT_EQ(b.wandering, 5);
}

TEST(WoldOracle, AgreesWithEngineOnTheGallery)
{
    for (const auto& ex : gallery_examples()) {
        for (std::size_t i = 0; i < ex.ops.size(); ++i) {
            const auto& t = ex.ops[i];
            if (t.domain().dim() > 64) continue;
            const auto o = oracle::brute_force_wold_oracle(t);
            const auto r = wold_single(t);
            EXPECT_EQ(r.h_inf.dim(), o.h_inf) << ex.spec.name << " T" << i + 1;
            EXPECT_EQ(r.wandering.dim(), o.wandering) << ex.spec.name << " T" << i + 1;
        }
    }
}

TEST(WoldOracle, RespectsNonTrivialGram)
{
    // weighted shift on D(2 Lebesgue): wandering part is everything
    const auto t = gallery::dirichlet_shift(lebesgue_measure(2.0, 1, 5), 5);
    const auto o = oracle::brute_force_wold_oracle(t);
    EXPECT_EQ(o.h_inf, 0);
    EXPECT_EQ(o.wandering, 6);
}
