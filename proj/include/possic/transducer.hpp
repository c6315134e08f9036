#pragma once

// The full conformal transducer. A candidate response is appended to the
// training data, every row is scored, and the candidate's plausibility is the
// share of rows scoring at least as high as it does.

#include <algorithm>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "possic/core.hpp"
#include "possic/nonconformity.hpp"
#include "possic/parallel.hpp"

namespace possic {

struct RegressionPsi {
    PointPredictor predictor = KnnMean{};
    bool standardize = false;
};

struct ClassificationPsi {
    bool standardize = false;
};

/// Default candidate grid: `points` equally spaced values over
/// [min y - span*r, max y + span*r], r = range of the training responses.
struct GridSpec {
    std::size_t points = 201;
    double span = 1.0;
};

struct TransducerConfig {
    std::variant<RegressionPsi, ClassificationPsi> psi = ClassificationPsi{};
    GridSpec grid;
    /// Worker threads for candidate evaluation (0 = hardware concurrency).
    std::size_t threads = 1;

    static TransducerConfig classification(bool standardize = false) {
        return TransducerConfig{ClassificationPsi{standardize}, {}, 1};
    }
    static TransducerConfig regression(PointPredictor predictor, bool standardize = false) {
        return TransducerConfig{RegressionPsi{predictor, standardize}, {}, 1};
    }

    bool is_regression() const { return std::holds_alternative<RegressionPsi>(psi); }
};

/// Strictly increasing candidate responses; always contains the point prediction.
struct CandidateGrid {
    std::vector<double> points;
    double point_prediction = 0.0;
};

/// Ranks of the candidate row over all labels, rank = n + 2 - #{i : T_i >= T_{n+1}}.
struct PossibleRanks {
    std::vector<std::size_t> ranks;          // distinct, ascending
    std::vector<std::size_t> rank_of_label;  // indexed by LabelId::index
    std::size_t n = 0;

    std::size_t min() const { return ranks.front(); }
};

// ============================================================================
// Rank arithmetic
// ============================================================================

/// #{i : T_i >= T_{n+1}} over the augmented scores (the candidate counts itself).
inline std::size_t conforming_count(const ScoreVector& t) {
    const double last = t.candidate();
    return static_cast<std::size_t>(
        std::count_if(t.scores.begin(), t.scores.end(), [last](double s) { return s >= last; }));
}

inline std::size_t rank_from_count(std::size_t count, std::size_t n) { return n + 2 - count; }

inline Rational plausibility_from_rank(std::size_t rank, std::size_t n) {
    return Rational(static_cast<std::int64_t>(n + 2 - rank), static_cast<std::int64_t>(n + 1));
}

/// Plausibility of `candidate` given training rows, for any nonconformity measure.
template <NonconformityMeasure Psi>
Rational conformal_plausibility(const Dataset& train, const Observation& candidate, const Psi& psi) {
    const ScoreVector t = psi(train.augmented(candidate));
    return Rational(static_cast<std::int64_t>(conforming_count(t)), static_cast<std::int64_t>(train.size() + 1));
}

namespace detail {

inline void check_query(const Dataset& train, std::span<const double> x, const TransducerConfig& cfg) {
    validate_dataset(train);
    POSSIC_REQUIRE(train.size() >= 1, ErrorKind::insufficient_data, "transducer needs at least one training row");
    POSSIC_REQUIRE(x.size() == train.dimension(), ErrorKind::dimension_mismatch,
                   "query has " + std::to_string(x.size()) + " features, training data has " +
                       std::to_string(train.dimension()));
    POSSIC_REQUIRE(cfg.is_regression() == train.space.is_continuous(), ErrorKind::invalid_argument,
                   "nonconformity measure does not match the response space");
}

template <class F>
decltype(auto) visit_psi(const TransducerConfig& cfg, F&& f) {
    return std::visit(
        [&](const auto& psi) -> decltype(auto) {
            using P = std::decay_t<decltype(psi)>;
            if constexpr (std::is_same_v<P, RegressionPsi>) {
                return f(ResidualScore{psi.predictor, psi.standardize});
            } else {
                return f(NearestNeighborRatio{psi.standardize});
            }
        },
        cfg.psi);
}

inline std::vector<std::size_t> label_counts(const Dataset& train, std::span<const double> x,
                                             const TransducerConfig& cfg) {
    const std::size_t labels = train.space.label_count();
    std::vector<std::size_t> counts(labels);
    const std::vector<double> xq(x.begin(), x.end());
    visit_psi(cfg, [&](const auto& psi) {
        parallel_for(labels, cfg.threads, [&](std::size_t l) {
            counts[l] = conforming_count(psi(train.augmented(Observation{xq, LabelId{l}})));
        });
        return 0;
    });
    return counts;
}

}  // namespace detail

/// (1/(n+1)) * #{i : T_i >= T_{n+1}} for the augmented sample train + (x, y).
inline Rational plausibility_at(const Dataset& train, std::span<const double> x, const Response& y,
                                const TransducerConfig& cfg) {
    detail::check_query(train, x, cfg);
    POSSIC_REQUIRE(response_in_space(y, train.space), ErrorKind::label_outside_space,
                   "candidate response is outside the response space");
    Observation candidate{std::vector<double>(x.begin(), x.end()), y};
    return detail::visit_psi(cfg, [&](const auto& psi) { return conformal_plausibility(train, candidate, psi); });
}

inline PossibleRanks possible_ranks(const Dataset& train, std::span<const double> x,
                                    const TransducerConfig& cfg = TransducerConfig::classification()) {
    detail::check_query(train, x, cfg);
    const auto counts = detail::label_counts(train, x, cfg);
    PossibleRanks out;
    out.n = train.size();
    for (auto c : counts) out.rank_of_label.push_back(rank_from_count(c, out.n));
    out.ranks = out.rank_of_label;
    std::sort(out.ranks.begin(), out.ranks.end());
    out.ranks.erase(std::unique(out.ranks.begin(), out.ranks.end()), out.ranks.end());
    return out;
}

/// One raw plausibility per label, in label order.
inline ContourTable contour_classification(const Dataset& train, std::span<const double> x,
                                           const TransducerConfig& cfg = TransducerConfig::classification()) {
    detail::check_query(train, x, cfg);
    const auto counts = detail::label_counts(train, x, cfg);
    ContourTable out;
    out.n = train.size();
    out.adjusted = Adjustment::raw;
    for (std::size_t l = 0; l < counts.size(); ++l) {
        out.points.push_back({LabelId{l}, Rational(static_cast<std::int64_t>(counts[l]),
                                                   static_cast<std::int64_t>(out.n + 1))});
    }
    return out;
}

/// Regression point prediction at x from all training rows (where the raw contour equals 1).
inline double point_prediction(const Dataset& train, std::span<const double> x, const TransducerConfig& cfg) {
    detail::check_query(train, x, cfg);
    const auto& psi = std::get<RegressionPsi>(cfg.psi);
    if (!psi.standardize) return fit_predict(psi.predictor, train, x);
    // Scaling is computed on the augmented sample; the candidate's response does not affect it.
    Dataset aug = standardize_features(train.augmented(Observation{{x.begin(), x.end()}, 0.0}));
    const auto xq = aug.observations.back().x;
    aug.observations.pop_back();
    return fit_predict(psi.predictor, aug, xq);
}

/// Builds a strictly increasing grid containing the point prediction and any `extra` points.
inline CandidateGrid make_grid(std::vector<double> points, double prediction, std::span<const double> extra = {}) {
    points.push_back(prediction);
    points.insert(points.end(), extra.begin(), extra.end());
    points.erase(std::remove_if(points.begin(), points.end(), [](double v) { return !std::isfinite(v); }),
                 points.end());
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return CandidateGrid{std::move(points), prediction};
}

inline CandidateGrid default_grid(const Dataset& train, std::span<const double> x, const TransducerConfig& cfg) {
    detail::check_query(train, x, cfg);
    POSSIC_REQUIRE(cfg.grid.points >= 2, ErrorKind::invalid_argument, "grid needs at least two points");
    auto [lo_it, hi_it] = std::minmax_element(train.observations.begin(), train.observations.end(),
                                              [](const Observation& a, const Observation& b) {
                                                  return real_of(a.y) < real_of(b.y);
                                              });
    const double ymin = real_of(lo_it->y);
    const double ymax = real_of(hi_it->y);
    // A constant response has zero range; fall back to unit half-width.
    const double r = ymax > ymin ? ymax - ymin : 1.0;
    const double lo = ymin - cfg.grid.span * r;
    const double hi = ymax + cfg.grid.span * r;
    std::vector<double> pts(cfg.grid.points);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        pts[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(pts.size() - 1);
    }
    return make_grid(std::move(pts), point_prediction(train, x, cfg));
}

/// Raw contour over a candidate grid.
inline ContourTable contour_regression(const Dataset& train, std::span<const double> x, const TransducerConfig& cfg,
                                       const CandidateGrid& grid) {
    detail::check_query(train, x, cfg);
    POSSIC_REQUIRE(!grid.points.empty(), ErrorKind::invalid_argument, "candidate grid is empty");
    POSSIC_REQUIRE(std::adjacent_find(grid.points.begin(), grid.points.end(), std::greater_equal<>()) ==
                       grid.points.end(),
                   ErrorKind::invalid_argument, "candidate grid must be strictly increasing");
    POSSIC_REQUIRE(std::binary_search(grid.points.begin(), grid.points.end(), grid.point_prediction),
                   ErrorKind::invalid_argument, "candidate grid must contain the point prediction");
    ContourTable out;
    out.n = train.size();
    out.adjusted = Adjustment::raw;
    out.points.resize(grid.points.size());
    const std::vector<double> xq(x.begin(), x.end());
    detail::visit_psi(cfg, [&](const auto& psi) {
        parallel_for(grid.points.size(), cfg.threads, [&](std::size_t g) {
            Observation candidate{xq, grid.points[g]};
            out.points[g] = {grid.points[g], conformal_plausibility(train, candidate, psi)};
        });
        return 0;
    });
    return out;
}

inline ContourTable contour_regression(const Dataset& train, std::span<const double> x, const TransducerConfig& cfg) {
    return contour_regression(train, x, cfg, default_grid(train, x, cfg));
}

}  // namespace possic
