#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "possic/possic.hpp"

using namespace possic;

namespace {

// Location-scale Student-t density written out from the gamma-function formula.
double t_density(double y, double df, double loc, double scale) {
    const double z = (y - loc) / scale;
    const double log_c = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) - 0.5 * std::log(df * std::numbers::pi);
    return std::exp(log_c - (df + 1) / 2 * std::log1p(z * z / df)) / scale;
}

double simpson(double a, double b, int panels, auto f) {
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

}  // namespace

TEST(BayesT, SingleZeroObservationCentersAtZero) {
    const std::vector<double> y{0.0};
    const auto t = bayes_t_predictive(y);
    EXPECT_DOUBLE_EQ(t.location, 0.0);
    EXPECT_DOUBLE_EQ(t.df, 3.0);
    // a_n = 1.5, b_n = 1, k_n = 2: scale^2 = 1 * 3 / (1.5 * 2) = 1.
    EXPECT_DOUBLE_EQ(t.scale, 1.0);
}

TEST(BayesT, WholeLineHasProbabilityOne) {
    const std::vector<double> y{1.0, -2.0, 0.5};
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_DOUBLE_EQ(bayes_t_predictive(y).prob(interval_assertion({Interval::closed(-inf, inf)})), 1.0);
}

TEST(BayesT, IntervalProbabilityMatchesQuadrature) {
    const std::vector<double> y{-1.2, 3.4, 0.7, 4.1, -3.3};
    const auto t = bayes_t_predictive(y);
    const double numeric =
        simpson(3.0, 5.0, 2000, [&](double v) { return t_density(v, t.df, t.location, t.scale); });
    EXPECT_NEAR(t.interval_prob(Interval::closed(3, 5)), numeric, 1e-6);
}

TEST(BayesT, ConjugateUpdate) {
    const std::vector<double> y{1.0, 2.0, 3.0, 6.0};
    const NigHyper h{1.0, 2.0, 3.0, 4.0};
    const auto t = bayes_t_predictive(y, h);
    // ybar = 3, ss = 14, kn = 6, mn = (2 + 12)/6, an = 5, bn = 4 + 7 + 2*4*4/12.
    const double bn = 4.0 + 7.0 + 32.0 / 12.0;
    EXPECT_DOUBLE_EQ(t.df, 10.0);
    EXPECT_DOUBLE_EQ(t.location, 14.0 / 6.0);
    EXPECT_NEAR(t.scale, std::sqrt(bn * 7.0 / 30.0), 1e-14);
}

TEST(BayesT, RejectsNonPositiveHyperparameters) {
    const std::vector<double> y{1.0};
    try {
        bayes_t_predictive(y, NigHyper{0, 0, 1, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::non_positive_hyperparameter);
    }
}

TEST(Rng, CounterStreamsAreReproducibleAndDistinct) {
    CounterRng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    for (int i = 0; i < 10; ++i) {
        const auto va = a();
        EXPECT_EQ(va, b());
        EXPECT_NE(va, c());
        EXPECT_NE(va, d());
    }
}

TEST(Simulate, DeterministicPerReplicate) {
    const GeneratorSpec gen{SineCubedRegression{}, 99};
    EXPECT_EQ(simulate(gen, 10, 4), simulate(gen, 10, 4));
    EXPECT_NE(simulate(gen, 10, 4), simulate(gen, 10, 5));
    const GeneratorSpec classes{GaussianClasses{}, 99};
    const auto d = simulate(classes, 50, 0);
    EXPECT_EQ(d.space.label_count(), 3u);
    for (const auto& o : d.observations) EXPECT_EQ(std::fmod(o.x[0] * 2.0, 1.0), 0.0);
}

TEST(ChiSquare, KnownValues) {
    const std::size_t flat[] = {10, 10, 10};
    const auto a = chi_square_uniform(flat);
    EXPECT_DOUBLE_EQ(a.statistic, 0.0);
    EXPECT_DOUBLE_EQ(a.p_value, 1.0);
    const std::size_t skew[] = {20, 0};
    const auto b = chi_square_uniform(skew);
    EXPECT_DOUBLE_EQ(b.statistic, 20.0);
    EXPECT_EQ(b.df, 1u);
    EXPECT_NEAR(b.p_value, 7.744216e-06, 1e-11);
}

TEST(Validity, SingleReplicateIsAStep) {
    const GeneratorSpec gen{UniformIid{}, 1};
    const auto alphas = alpha_grid(20);
    const auto r = validity_sweep(gen, 6, TransducerConfig::regression(KnnMean{2}), Adjustment::raw, 1, alphas);
    ASSERT_EQ(r.cdf.size(), 20u);
    for (double v : r.cdf) EXPECT_TRUE(v == 0.0 || v == 1.0);
    EXPECT_TRUE(std::is_sorted(r.cdf.begin(), r.cdf.end()));
    EXPECT_EQ(r.cdf.back(), 1.0);
}

TEST(Validity, ContinuousLevelsAreUniform) {
    const GeneratorSpec gen{UniformIid{}, 2};
    const auto alphas = alpha_grid(50);
    const auto r = validity_sweep(gen, 5, TransducerConfig::regression(KnnMean{2}), Adjustment::raw, 1200, alphas);
    const auto counts = r.level_counts();
    EXPECT_GT(chi_square_uniform(counts).p_value, 0.001);
    EXPECT_TRUE(r.dominated(3.0));
    EXPECT_TRUE(std::is_sorted(r.cdf.begin(), r.cdf.end()));
}

TEST(Validity, ClassificationWithTiesIsConservative) {
    const GeneratorSpec gen{GaussianClasses{}, 3};
    const auto alphas = alpha_grid(50);
    for (auto how : {Adjustment::raw, Adjustment::conditioned, Adjustment::stretched}) {
        const auto r = validity_sweep(gen, 10, TransducerConfig::classification(), how, 600, alphas);
        EXPECT_TRUE(r.dominated(3.0)) << to_string(how);
    }
}

TEST(Validity, IdenticalAcrossThreadCounts) {
    const GeneratorSpec gen{SineCubedRegression{}, 4};
    const auto alphas = alpha_grid(10);
    const auto cfg = TransducerConfig::regression(KnnMean{3});
    const auto a = validity_sweep(gen, 8, cfg, Adjustment::raw, 40, alphas, 1);
    const auto b = validity_sweep(gen, 8, cfg, Adjustment::raw, 40, alphas, 4);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.cdf, b.cdf);
}

TEST(FCurve, EmptyAssertionIsZero) {
    const GeneratorSpec gen{UniformIid{}, 5};
    const auto alphas = alpha_grid(10);
    const auto f = f_curve(gen, 5, BayesTBaseline{}, interval_assertion({}), 200, alphas);
    for (double v : f.estimates) EXPECT_EQ(v, 0.0);
    const auto g = f_curve(gen, 5, ConformalSpec{}, interval_assertion({}), 50, alphas);
    for (double v : g.estimates) EXPECT_EQ(v, 0.0);
}

TEST(FCurve, ConformalStaysBelowDiagonal) {
    const GeneratorSpec gen{UniformIid{}, 6};
    const auto alphas = alpha_grid(20);
    const ConformalSpec spec{TransducerConfig::regression(KnnMean{2}), Adjustment::raw};
    const auto f = f_curve(gen, 5, spec, interval_assertion({Interval::closed(3, 5)}), 1000, alphas);
    EXPECT_FALSE(f.violated(3.0));
    EXPECT_TRUE(std::is_sorted(f.estimates.begin(), f.estimates.end()));
}

TEST(FCurve, BayesBaselineFailsSomewhere) {
    const GeneratorSpec gen{UniformIid{}, 7};
    const auto alphas = alpha_grid(100);
    const auto f = f_curve(gen, 5, BayesTBaseline{}, interval_assertion({Interval::closed(3, 5)}), 4000, alphas);
    EXPECT_TRUE(f.violated(2.0));
    EXPECT_TRUE(std::is_sorted(f.estimates.begin(), f.estimates.end()));
}

TEST(FCurve, AssertionMustFitGenerator) {
    const GeneratorSpec gen{UniformIid{}, 8};
    const auto alphas = alpha_grid(4);
    EXPECT_THROW(f_curve(gen, 5, BayesTBaseline{}, label_assertion({LabelId{0}}), 10, alphas), Error);
    EXPECT_THROW(f_curve(gen, 5, BayesTBaseline{}, interval_assertion({}), 0, alphas), Error);
}
