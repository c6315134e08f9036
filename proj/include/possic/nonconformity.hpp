#pragma once

// Nonconformity measures: symmetric scores of how much one row of an
// augmented sample disagrees with the other rows.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "possic/core.hpp"

namespace possic {

inline constexpr double infinite_score = std::numeric_limits<double>::infinity();

/// Scores T_1..T_{n+1} of an augmented sample; the last entry belongs to the candidate row.
struct ScoreVector {
    std::vector<double> scores;
    std::string provenance;

    std::size_t size() const { return scores.size(); }
    double operator[](std::size_t i) const { return scores[i]; }
    double candidate() const { return scores.back(); }
};

// ============================================================================
// Point predictors (regression)
// ============================================================================

/// Mean response of the k nearest rows; every row tied with the k-th distance is included.
struct KnnMean {
    std::size_t k = 5;
};

/// Ridge regression with an unpenalized intercept.
struct Ridge {
    double lambda = 1.0;
};

using PointPredictor = std::variant<KnnMean, Ridge>;

inline std::string describe(const PointPredictor& p) {
    if (const auto* knn = std::get_if<KnnMean>(&p)) return "knn-mean(k=" + std::to_string(knn->k) + ")";
    return "ridge(lambda=" + std::to_string(std::get<Ridge>(p).lambda) + ")";
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

namespace detail {

inline std::size_t training_rows(const Dataset& data, std::size_t skip) {
    return skip < data.size() ? data.size() - 1 : data.size();
}

inline double knn_predict(const KnnMean& knn, const Dataset& data, std::size_t skip, std::span<const double> x) {
    std::vector<std::pair<double, double>> dist_y;
    dist_y.reserve(data.size());
    for (std::size_t j = 0; j < data.size(); ++j) {
        if (j == skip) continue;
        dist_y.emplace_back(squared_distance(data[j].x, x), real_of(data[j].y));
    }
    POSSIC_REQUIRE(knn.k >= 1 && knn.k <= dist_y.size(), ErrorKind::insufficient_data,
                   "knn-mean needs 1 <= k <= training rows (k=" + std::to_string(knn.k) +
                       ", rows=" + std::to_string(dist_y.size()) + ")");
    std::vector<double> d;
    d.reserve(dist_y.size());
    for (const auto& p : dist_y) d.push_back(p.first);
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(knn.k - 1), d.end());
    const double kth = d[knn.k - 1];
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& [dist, y] : dist_y) {
        if (dist <= kth) {
            sum += y;
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

inline double ridge_predict(const Ridge& ridge, const Dataset& data, std::size_t skip, std::span<const double> x) {
    POSSIC_REQUIRE(ridge.lambda >= 0.0 && std::isfinite(ridge.lambda), ErrorKind::invalid_argument,
                   "ridge lambda must be a non-negative real");
    const std::size_t rows = training_rows(data, skip);
    const std::size_t p = data.dimension() + 1;
    POSSIC_REQUIRE(rows >= 1, ErrorKind::insufficient_data, "ridge needs at least one training row");

    Eigen::MatrixXd design(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(p));
    Eigen::VectorXd response(static_cast<Eigen::Index>(rows));
    Eigen::Index r = 0;
    for (std::size_t j = 0; j < data.size(); ++j) {
        if (j == skip) continue;
        design(r, 0) = 1.0;
        for (std::size_t c = 0; c + 1 < p; ++c) design(r, static_cast<Eigen::Index>(c + 1)) = data[j].x[c];
        response(r) = real_of(data[j].y);
        ++r;
    }

    Eigen::VectorXd coef;
    if (ridge.lambda == 0.0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        POSSIC_REQUIRE(static_cast<std::size_t>(qr.rank()) == p, ErrorKind::singular_design,
                       "least-squares design is rank deficient; use lambda > 0");
        coef = qr.solve(response);
    } else {
        Eigen::MatrixXd gram = design.transpose() * design;
        for (Eigen::Index c = 1; c < static_cast<Eigen::Index>(p); ++c) gram(c, c) += ridge.lambda;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
        POSSIC_REQUIRE(ldlt.info() == Eigen::Success && ldlt.isPositive(), ErrorKind::singular_design,
                       "ridge normal equations are singular");
        coef = ldlt.solve(design.transpose() * response);
    }
    double out = coef(0);
    for (std::size_t c = 0; c + 1 < p; ++c) out += coef(static_cast<Eigen::Index>(c + 1)) * x[c];
    return out;
}

}  // namespace detail

/// Fits `predictor` on every row of `data` except `skip` and predicts at `x`.
/// Pass skip >= data.size() to train on all rows.
inline double predict_excluding(const PointPredictor& predictor, const Dataset& data, std::size_t skip,
                                std::span<const double> x) {
    return std::visit(
        [&](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, KnnMean>) {
                return detail::knn_predict(p, data, skip, x);
            } else {
                return detail::ridge_predict(p, data, skip, x);
            }
        },
        predictor);
}

inline double fit_predict(const PointPredictor& predictor, const Dataset& train, std::span<const double> x) {
    return predict_excluding(predictor, train, train.size(), x);
}

// ============================================================================
// Feature scaling
// ============================================================================

/// Rescales every feature by its standard deviation over the given sample.
/// Constant features are left as they are. The transform is a symmetric
/// function of the sample, so applying it to an augmented sample keeps scores exchangeable.
inline Dataset standardize_features(const Dataset& data) {
    Dataset out = data;
    const std::size_t d = data.dimension();
    const double m = static_cast<double>(data.size());
    for (std::size_t c = 0; c < d; ++c) {
        double mean = 0.0;
        for (const auto& o : data.observations) mean += o.x[c];
        mean /= m;
        double ss = 0.0;
        for (const auto& o : data.observations) ss += (o.x[c] - mean) * (o.x[c] - mean);
        double sd = data.size() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
        for (auto& o : out.observations) {
            o.x[c] = sd > 0.0 ? (o.x[c] - mean) / sd : o.x[c] - mean;
        }
    }
    return out;
}

// ============================================================================
// Nonconformity measures
// ============================================================================

template <class Psi>
concept NonconformityMeasure = requires(const Psi& psi, const Dataset& augmented) {
    { psi(augmented) } -> std::same_as<ScoreVector>;
};

/// T_i = |y_i - mu_{-i}(x_i)| with mu_{-i} fitted on the other rows.
struct ResidualScore {
    PointPredictor predictor = KnnMean{};
    bool standardize = false;

    ScoreVector operator()(const Dataset& augmented) const {
        POSSIC_REQUIRE(augmented.space.is_continuous(), ErrorKind::invalid_argument,
                       "residual scores need a continuous response space");
        POSSIC_REQUIRE(augmented.size() >= 2, ErrorKind::insufficient_data,
                       "residual scores need at least two rows");
        const Dataset scaled = standardize ? standardize_features(augmented) : Dataset{};
        const Dataset& z = standardize ? scaled : augmented;
        ScoreVector out;
        out.provenance = "residual:" + describe(predictor);
        out.scores.resize(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) {
            double fitted = predict_excluding(predictor, z, i, z[i].x);
            out.scores[i] = std::abs(real_of(z[i].y) - fitted);
        }
        return out;
    }
};

/// Nearest same-label distance over nearest other-label distance.
/// 0/0 and inf/inf are 0; positive/0 is +inf.
struct NearestNeighborRatio {
    bool standardize = false;

    ScoreVector operator()(const Dataset& augmented) const {
        POSSIC_REQUIRE(augmented.space.is_finite(), ErrorKind::invalid_argument,
                       "nearest-neighbor ratio needs a finite label space");
        POSSIC_REQUIRE(augmented.size() >= 2, ErrorKind::fewer_than_two_rows,
                       "nearest-neighbor ratio needs at least two rows");
        const Dataset scaled = standardize ? standardize_features(augmented) : Dataset{};
        const Dataset& z = standardize ? scaled : augmented;
        const std::size_t m = z.size();
        std::vector<double> same(m, infinite_score);
        std::vector<double> other(m, infinite_score);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                double d2 = squared_distance(z[i].x, z[j].x);
                auto& slot_i = label_of(z[i].y) == label_of(z[j].y) ? same : other;
                slot_i[i] = std::min(slot_i[i], d2);
                slot_i[j] = std::min(slot_i[j], d2);
            }
        }
        ScoreVector out;
        out.provenance = "nn-ratio";
        out.scores.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            out.scores[i] = ratio(std::sqrt(same[i]), std::sqrt(other[i]));
        }
        return out;
    }

    static double ratio(double num, double den) {
        if (num == den && (num == 0.0 || std::isinf(num))) return 0.0;
        if (den == 0.0) return infinite_score;
        return num / den;
    }
};

static_assert(NonconformityMeasure<ResidualScore>);
static_assert(NonconformityMeasure<NearestNeighborRatio>);

inline ScoreVector score_regression(const Dataset& augmented, const PointPredictor& predictor) {
    return ResidualScore{predictor, false}(augmented);
}

inline ScoreVector score_classification_nn(const Dataset& augmented) {
    return NearestNeighborRatio{false}(augmented);
}

}  // namespace possic
