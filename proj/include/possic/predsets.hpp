#pragma once

// Prediction sets {y : pi(y) > alpha} and their empirical coverage.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <boost/random/uniform_int_distribution.hpp>

#include "possic/core.hpp"
#include "possic/parallel.hpp"
#include "possic/possibility.hpp"
#include "possic/rng.hpp"
#include "possic/transducer.hpp"

namespace possic {

struct PredictionSet {
    /// Labels in label order, or closed intervals spanning runs of qualifying grid points.
    std::variant<std::vector<LabelId>, std::vector<Interval>> members;
    double alpha = 0.0;

    bool empty() const {
        return std::visit([](const auto& m) { return m.empty(); }, members);
    }

    /// Cardinality for labels; total interval length (grid resolution) for real responses.
    double size() const {
        if (const auto* ls = std::get_if<std::vector<LabelId>>(&members)) return static_cast<double>(ls->size());
        double len = 0.0;
        for (const auto& iv : std::get<std::vector<Interval>>(members)) len += iv.hi - iv.lo;
        return len;
    }

    bool contains(const Response& y) const {
        if (const auto* ls = std::get_if<std::vector<LabelId>>(&members)) {
            return std::find(ls->begin(), ls->end(), label_of(y)) != ls->end();
        }
        const auto& ivs = std::get<std::vector<Interval>>(members);
        return std::any_of(ivs.begin(), ivs.end(), [&](const Interval& iv) { return iv.contains(real_of(y)); });
    }
};

inline PredictionSet prediction_set(const PossibilityPredictor& p, double alpha) {
    POSSIC_REQUIRE(alpha >= 0.0 && alpha <= 1.0, ErrorKind::invalid_argument, "alpha must lie in [0, 1]");
    PredictionSet out;
    out.alpha = alpha;
    auto keep = [alpha](const Rational& pl) { return to_double(pl) > alpha; };

    if (p.space.is_finite()) {
        std::vector<LabelId> labels;
        for (const auto& pt : p.contour.points) {
            if (keep(pt.plausibility)) labels.push_back(label_of(pt.candidate));
        }
        std::sort(labels.begin(), labels.end());
        out.members = std::move(labels);
        return out;
    }

    std::vector<Interval> runs;
    if (p.vacuous) {
        if (alpha < 1.0) runs.push_back(Interval::closed(p.space.interval().lo, p.space.interval().hi));
        out.members = std::move(runs);
        return out;
    }
    bool open = false;
    for (const auto& pt : p.contour.points) {
        const double y = real_of(pt.candidate);
        if (keep(pt.plausibility)) {
            if (!open) runs.push_back(Interval::closed(y, y));
            runs.back().hi = y;
            open = true;
        } else {
            open = false;
        }
    }
    out.members = std::move(runs);
    return out;
}

struct CoverageReport {
    double alpha = 0.0;
    Adjustment adjustment = Adjustment::raw;
    std::size_t n_test = 0;
    double empirical_coverage = 0.0;
    double mean_size = 0.0;
};

/// Coverage and mean size of the alpha-sets for every test row, for several
/// adjustments and levels at once. The raw contour is computed once per row.
inline std::vector<CoverageReport> evaluate_coverage(const Dataset& train, const Dataset& test,
                                                     const TransducerConfig& cfg,
                                                     std::span<const Adjustment> adjustments,
                                                     std::span<const double> alphas, std::size_t threads = 1) {
    POSSIC_REQUIRE(!test.empty(), ErrorKind::insufficient_data, "test set is empty");
    POSSIC_REQUIRE(train.space == test.space, ErrorKind::invalid_argument,
                   "train and test sets use different response spaces");
    validate_dataset(test);
    const std::size_t combos = adjustments.size() * alphas.size();
    // hits[row][combo], sizes[row][combo]
    std::vector<std::vector<char>> hits(test.size(), std::vector<char>(combos));
    std::vector<std::vector<double>> sizes(test.size(), std::vector<double>(combos));
    TransducerConfig inner = cfg;
    inner.threads = 1;
    parallel_for(test.size(), threads, [&](std::size_t r) {
        const auto& row = test[r];
        ContourTable raw;
        if (train.space.is_finite()) {
            raw = contour_classification(train, row.x, inner);
        } else {
            raw = contour_regression(train, row.x, inner);
        }
        for (std::size_t a = 0; a < adjustments.size(); ++a) {
            const auto pred = make_predictor(adjust(raw, adjustments[a]), train.space);
            for (std::size_t k = 0; k < alphas.size(); ++k) {
                const auto set = prediction_set(pred, alphas[k]);
                hits[r][a * alphas.size() + k] = set.contains(row.y) ? 1 : 0;
                sizes[r][a * alphas.size() + k] = set.size();
            }
        }
    });
    std::vector<CoverageReport> out;
    for (std::size_t a = 0; a < adjustments.size(); ++a) {
        for (std::size_t k = 0; k < alphas.size(); ++k) {
            const std::size_t c = a * alphas.size() + k;
            std::size_t covered = 0;
            double total = 0.0;
            for (std::size_t r = 0; r < test.size(); ++r) {
                covered += static_cast<std::size_t>(hits[r][c]);
                total += sizes[r][c];
            }
            const double m = static_cast<double>(test.size());
            out.push_back({alphas[k], adjustments[a], test.size(), static_cast<double>(covered) / m, total / m});
        }
    }
    return out;
}

inline CoverageReport evaluate_coverage(const Dataset& train, const Dataset& test, const TransducerConfig& cfg,
                                        Adjustment adjustment, double alpha) {
    const Adjustment adj[] = {adjustment};
    const double al[] = {alpha};
    return evaluate_coverage(train, test, cfg, adj, al).front();
}

/// Random half/half split of the rows (first half rounded down goes to training).
/// Split `index` under `seed` is a fixed permutation, independent of other splits.
inline std::pair<Dataset, Dataset> half_split(const Dataset& data, std::uint64_t seed, std::uint64_t index) {
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    CounterRng rng(seed, index);
    for (std::size_t i = order.size(); i > 1; --i) {
        boost::random::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(order[i - 1], order[pick(rng)]);
    }
    Dataset train{{}, data.space};
    Dataset test{{}, data.space};
    const std::size_t half = data.size() / 2;
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < half ? train : test).observations.push_back(data[order[i]]);
    }
    return {std::move(train), std::move(test)};
}

}  // namespace possic
