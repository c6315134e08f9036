#pragma once

// Consonant predictors built from contours, and the random-set view of the
// classification transducer with its two empty-set adjustments.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "possic/core.hpp"
#include "possic/transducer.hpp"

namespace possic {

struct FocalSet {
    std::vector<LabelId> labels;  // ascending label order; empty for the empty set
    Rational mass;
};

/// Distribution of the random label set {y : rank(y) <= U'} with U' uniform on {1..n+1}.
/// Non-empty focal sets are nested and listed from smallest to largest; the
/// empty set, when it carries mass, comes first.
struct RandomSetDistribution {
    std::vector<FocalSet> focal;
    std::size_t n = 0;
    std::size_t label_count = 0;
    Adjustment adjusted = Adjustment::raw;

    bool includes_empty() const { return !focal.empty() && focal.front().labels.empty(); }

    Rational empty_mass() const { return includes_empty() ? focal.front().mass : Rational{0}; }

    Rational total_mass() const {
        Rational s{0};
        for (const auto& f : focal) s += f.mass;
        return s;
    }
};

/// Aggregates the nested sets {labels with rank <= u}, u = 1..n+1.
inline RandomSetDistribution random_set_from_ranks(const PossibleRanks& ranks) {
    POSSIC_REQUIRE(!ranks.ranks.empty(), ErrorKind::no_nonempty_focal_set, "no possible ranks");
    const std::size_t n = ranks.n;
    const auto denom = static_cast<std::int64_t>(n + 1);
    RandomSetDistribution out;
    out.n = n;
    out.label_count = ranks.rank_of_label.size();

    const std::size_t first = ranks.ranks.front();
    if (first > 1) out.focal.push_back({{}, Rational(static_cast<std::int64_t>(first - 1), denom)});
    for (std::size_t j = 0; j < ranks.ranks.size(); ++j) {
        const std::size_t r = ranks.ranks[j];
        const std::size_t next = j + 1 < ranks.ranks.size() ? ranks.ranks[j + 1] : n + 2;
        FocalSet f;
        for (std::size_t l = 0; l < ranks.rank_of_label.size(); ++l) {
            if (ranks.rank_of_label[l] <= r) f.labels.push_back(LabelId{l});
        }
        f.mass = Rational(static_cast<std::int64_t>(next - r), denom);
        out.focal.push_back(std::move(f));
    }
    return out;
}

inline RandomSetDistribution random_set(const Dataset& train, std::span<const double> x,
                                        const TransducerConfig& cfg = TransducerConfig::classification()) {
    return random_set_from_ranks(possible_ranks(train, x, cfg));
}

/// Moves the empty set's mass onto the smallest non-empty focal set.
inline RandomSetDistribution stretched_random_set(const RandomSetDistribution& rs) {
    RandomSetDistribution out = rs;
    out.adjusted = Adjustment::stretched;
    if (!out.includes_empty()) return out;
    POSSIC_REQUIRE(out.focal.size() >= 2, ErrorKind::no_nonempty_focal_set,
                   "random set has no non-empty focal set to stretch into");
    out.focal[1].mass += out.focal.front().mass;
    out.focal.erase(out.focal.begin());
    return out;
}

/// pi(y) = total mass of the focal sets containing y.
inline ContourTable contour_from_random_set(const RandomSetDistribution& rs) {
    ContourTable out;
    out.n = rs.n;
    out.adjusted = rs.adjusted;
    std::vector<Rational> pl(rs.label_count, Rational{0});
    for (const auto& f : rs.focal) {
        for (auto id : f.labels) pl[id.index] += f.mass;
    }
    for (std::size_t l = 0; l < pl.size(); ++l) out.points.push_back({LabelId{l}, pl[l]});
    return out;
}

/// Divides every plausibility by the maximum.
inline ContourTable adjust_conditioning(const ContourTable& raw) {
    POSSIC_REQUIRE(raw.adjusted == Adjustment::raw, ErrorKind::invalid_argument,
                   "conditioning applies to a raw contour");
    const Rational m = raw.max();
    POSSIC_REQUIRE(m > Rational{0}, ErrorKind::all_zero_contour, "contour is identically zero");
    ContourTable out = raw;
    out.adjusted = Adjustment::conditioned;
    for (auto& p : out.points) p.plausibility /= m;
    return out;
}

/// Raises the first maximizing candidate to 1 and keeps every other value.
inline ContourTable adjust_stretching(const ContourTable& raw) {
    POSSIC_REQUIRE(raw.adjusted == Adjustment::raw, ErrorKind::invalid_argument,
                   "stretching applies to a raw contour");
    ContourTable out = raw;
    out.adjusted = Adjustment::stretched;
    if (out.points.empty()) return out;
    auto best = std::max_element(out.points.begin(), out.points.end(),
                                 [](const ContourPoint& a, const ContourPoint& b) {
                                     return a.plausibility < b.plausibility;
                                 });
    best->plausibility = Rational{1};
    return out;
}

inline ContourTable adjust(const ContourTable& raw, Adjustment how) {
    switch (how) {
        case Adjustment::raw: return raw;
        case Adjustment::conditioned: return adjust_conditioning(raw);
        case Adjustment::stretched: return adjust_stretching(raw);
    }
    return raw;
}

// ============================================================================
// Upper and lower probabilities
// ============================================================================

/// Maximum contour value over the assertion (supremum over the grid for real responses).
/// Boundary cases: the empty assertion has upper probability 0, the whole space 1.
inline Rational upper_prob(const PossibilityPredictor& p, const Assertion& a) {
    if (is_empty(a)) return Rational{0};
    if (p.vacuous || covers_space(a, p.space)) return Rational{1};
    Rational best{0};
    for (const auto& pt : p.contour.points) {
        if (contains(a, pt.candidate)) best = std::max(best, pt.plausibility);
    }
    return best;
}

/// 1 - upper probability of the complement.
inline Rational lower_prob(const PossibilityPredictor& p, const Assertion& a) {
    if (is_empty(a)) return Rational{0};
    if (covers_space(a, p.space)) return Rational{1};
    if (p.vacuous) return Rational{0};
    Rational best{0};
    for (const auto& pt : p.contour.points) {
        if (!contains(a, pt.candidate)) best = std::max(best, pt.plausibility);
    }
    return Rational{1} - best;
}

/// Complement of an assertion within the space.
inline Assertion complement(const Assertion& a, const ResponseSpace& space) {
    if (std::holds_alternative<LabelSet>(a)) {
        std::vector<LabelId> out;
        for (std::size_t l = 0; l < space.label_count(); ++l) {
            if (!contains(a, LabelId{l})) out.push_back(LabelId{l});
        }
        return LabelSet{std::move(out)};
    }
    const auto& parts = std::get<IntervalUnion>(a).parts;
    std::vector<Interval> out;
    double cursor = space.interval().lo;
    bool cursor_closed = true;
    for (const auto& part : parts) {
        Interval gap{cursor, part.lo, cursor_closed, !part.lo_closed};
        if (gap.lo < gap.hi || (gap.lo == gap.hi && gap.lo_closed && gap.hi_closed)) out.push_back(gap);
        cursor = part.hi;
        cursor_closed = !part.hi_closed;
    }
    Interval tail{cursor, space.interval().hi, cursor_closed, true};
    if (tail.lo < tail.hi || (tail.lo == tail.hi && tail.lo_closed && tail.hi_closed)) out.push_back(tail);
    return IntervalUnion{std::move(out)};
}

inline PossibilityPredictor make_predictor(const ContourTable& contour, const ResponseSpace& space) {
    return PossibilityPredictor{contour, space, false};
}

/// Contour for a query point with the requested adjustment. With no training
/// rows there is nothing to learn from and the predictor is vacuous.
inline PossibilityPredictor build_predictor(const Dataset& train, std::span<const double> x,
                                            const TransducerConfig& cfg, Adjustment how) {
    if (train.size() < 1) return vacuous_predictor(train.space);
    if (train.space.is_finite()) {
        return make_predictor(adjust(contour_classification(train, x, cfg), how), train.space);
    }
    return make_predictor(adjust(contour_regression(train, x, cfg), how), train.space);
}

}  // namespace possic
