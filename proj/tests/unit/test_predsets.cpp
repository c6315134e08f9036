#include <gtest/gtest.h>

#include <random>

#include "checks.hpp"
#include "possic/possic.hpp"

using namespace possic;

namespace {

const std::vector<double> at_two{2.0};

std::vector<std::size_t> members(const PredictionSet& s) {
    std::vector<std::size_t> out;
    for (auto id : std::get<std::vector<LabelId>>(s.members)) out.push_back(id.index);
    return out;
}

PossibilityPredictor alligator_predictor(Adjustment how) {
    return make_predictor(adjust(contour_classification(io::alligator(), at_two), how), io::alligator().space);
}

}  // namespace

TEST(PredictionSet, RawAlligatorIsEmptyAboveItsMaximum) {
    const auto raw = alligator_predictor(Adjustment::raw);
    EXPECT_TRUE(prediction_set(raw, 0.7).empty());
    EXPECT_TRUE(prediction_set(raw, 0.6).empty());
    EXPECT_EQ(members(prediction_set(raw, 0.59)), (std::vector<std::size_t>{0}));
}

TEST(PredictionSet, AdjustedAlligatorNeverEmptyBelowOne) {
    for (auto how : {Adjustment::conditioned, Adjustment::stretched}) {
        const auto p = alligator_predictor(how);
        for (int k = 0; k < 100; ++k) EXPECT_FALSE(prediction_set(p, k / 100.0).empty());
        EXPECT_FALSE(prediction_set(p, 0.999999).empty());
        EXPECT_TRUE(prediction_set(p, 1.0).empty());
    }
}

TEST(PredictionSet, StretchedAlligatorAtPointFour) {
    EXPECT_EQ(members(prediction_set(alligator_predictor(Adjustment::stretched), 0.4)),
              (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(members(prediction_set(alligator_predictor(Adjustment::conditioned), 0.4)),
              (std::vector<std::size_t>{0, 1, 2}));
}

TEST(PredictionSet, AlphaZeroKeepsEveryPositiveLabel) {
    EXPECT_EQ(prediction_set(alligator_predictor(Adjustment::raw), 0.0).size(), 3.0);
}

TEST(PredictionSet, StrictInequalityAtALevel) {
    // pi(F) = 1/2 exactly; alpha = 1/2 excludes it.
    EXPECT_EQ(members(prediction_set(alligator_predictor(Adjustment::stretched), 0.5)),
              (std::vector<std::size_t>{0}));
}

TEST(PredictionSet, AlphaOutOfRange) {
    EXPECT_THROW(prediction_set(alligator_predictor(Adjustment::raw), 1.5), Error);
}

TEST(PredictionSet, RegressionRunsBecomeIntervals) {
    ContourTable c;
    c.n = 4;
    const double ys[] = {0, 1, 2, 3, 4, 5, 6};
    const int k[] = {1, 3, 5, 2, 4, 4, 1};
    for (int i = 0; i < 7; ++i) c.points.push_back({ys[i], Rational(k[i], 5)});
    const auto p = make_predictor(c, ResponseSpace::continuous());
    const auto s = prediction_set(p, 0.5);
    const auto& ivs = std::get<std::vector<Interval>>(s.members);
    ASSERT_EQ(ivs.size(), 2u);
    EXPECT_EQ(ivs[0], Interval::closed(1, 2));
    EXPECT_EQ(ivs[1], Interval::closed(4, 5));
    EXPECT_DOUBLE_EQ(s.size(), 2.0);
    EXPECT_TRUE(s.contains(1.5));
    EXPECT_FALSE(s.contains(3.0));
}

TEST(PredictionSet, LowerProbabilityRepresentation) {
    // The alpha-set is the intersection of every assertion A with lower(A) >= 1 - alpha.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = checks::random_predictor(rng);
        const std::size_t labels = p.space.label_count();
        ASSERT_LE(labels, 4u);
        const double alpha = trial % 3 == 0 ? double(trial % 7) / 6.0 : unit(rng);
        std::vector<bool> inter(labels, true);
        for (std::size_t mask = 0; mask < (1u << labels); ++mask) {
            std::vector<LabelId> a;
            for (std::size_t l = 0; l < labels; ++l) {
                if (mask & (1u << l)) a.push_back(LabelId{l});
            }
            if (to_double(Rational{1} - lower_prob(p, label_assertion(a))) <= alpha) {
                for (std::size_t l = 0; l < labels; ++l) inter[l] = inter[l] && ((mask >> l) & 1u);
            }
        }
        std::vector<std::size_t> expected;
        for (std::size_t l = 0; l < labels; ++l) {
            if (inter[l]) expected.push_back(l);
        }
        EXPECT_EQ(members(prediction_set(p, alpha)), expected) << "alpha " << alpha;
    }
}

TEST(PredictionSet, StretchedInsideConditioned) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = checks::class_instance(rng);
        const auto data = checks::to_dataset(inst);
        const auto raw = contour_classification(data, inst.x);
        for (double alpha : {0.05, 0.2, 0.5, 0.8}) {
            const auto s = members(prediction_set(make_predictor(adjust_stretching(raw), data.space), alpha));
            const auto c = members(prediction_set(make_predictor(adjust_conditioning(raw), data.space), alpha));
            EXPECT_TRUE(std::includes(c.begin(), c.end(), s.begin(), s.end()));
        }
    }
}

TEST(Coverage, TrainingRowsAreCoveredAtAlphaZero) {
    const auto d = io::alligator();
    const auto r = evaluate_coverage(d, d, TransducerConfig::classification(), Adjustment::raw, 0.0);
    EXPECT_EQ(r.empirical_coverage, 1.0);
    EXPECT_EQ(r.n_test, 39u);
    EXPECT_EQ(r.mean_size, 3.0);
}

TEST(Coverage, SeveralAdjustmentsAndLevels) {
    const auto [train, test] = half_split(io::alligator(), 1, 0);
    const Adjustment adj[] = {Adjustment::conditioned, Adjustment::stretched};
    const double alphas[] = {0.1, 0.3};
    const auto reports = evaluate_coverage(train, test, TransducerConfig::classification(), adj, alphas);
    ASSERT_EQ(reports.size(), 4u);
    EXPECT_EQ(reports[0].adjustment, Adjustment::conditioned);
    EXPECT_EQ(reports[3].alpha, 0.3);
    EXPECT_LE(reports[2].mean_size, reports[0].mean_size);
    for (const auto& r : reports) {
        EXPECT_GE(r.empirical_coverage, 0.0);
        EXPECT_LE(r.empirical_coverage, 1.0);
        EXPECT_EQ(r.n_test, 20u);
    }
}

TEST(Coverage, EmptyTestSetRejected) {
    const auto d = io::alligator();
    Dataset empty{{}, d.space};
    EXPECT_THROW(evaluate_coverage(d, empty, TransducerConfig::classification(), Adjustment::raw, 0.1), Error);
}

TEST(HalfSplit, PartitionAndDeterminism) {
    const auto d = io::alligator();
    const auto [a1, b1] = half_split(d, 42, 3);
    const auto [a2, b2] = half_split(d, 42, 3);
    EXPECT_EQ(a1, a2);
    EXPECT_EQ(b1, b2);
    EXPECT_EQ(a1.size(), 19u);
    EXPECT_EQ(b1.size(), 20u);
    const auto [a3, b3] = half_split(d, 42, 4);
    EXPECT_NE(a1, a3);
    std::size_t per_label[3] = {0, 0, 0};
    for (const auto& o : a1.observations) ++per_label[label_of(o.y).index];
    for (const auto& o : b1.observations) ++per_label[label_of(o.y).index];
    std::size_t original[3] = {0, 0, 0};
    for (const auto& o : d.observations) ++original[label_of(o.y).index];
    EXPECT_EQ(std::vector<std::size_t>(per_label, per_label + 3), std::vector<std::size_t>(original, original + 3));
}
