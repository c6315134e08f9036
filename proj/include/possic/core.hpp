#pragma once

// Shared vocabulary: response spaces, observations, datasets, assertions,
// plausibility contours and the consonant predictor that wraps them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

namespace possic {

// ============================================================================
// Errors
// ============================================================================

enum class ErrorKind {
    dimension_mismatch,
    label_outside_space,
    empty_label_alphabet,
    invalid_space,
    insufficient_data,
    singular_design,
    fewer_than_two_rows,
    no_nonempty_focal_set,
    all_zero_contour,
    non_positive_hyperparameter,
    invalid_argument,
    file_not_found,
    bad_csv,
    bad_flags,
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::dimension_mismatch: return "dimension-mismatch";
        case ErrorKind::label_outside_space: return "label-outside-space";
        case ErrorKind::empty_label_alphabet: return "empty-label-alphabet";
        case ErrorKind::invalid_space: return "invalid-space";
        case ErrorKind::insufficient_data: return "insufficient-data";
        case ErrorKind::singular_design: return "singular-design";
        case ErrorKind::fewer_than_two_rows: return "fewer-than-two-rows";
        case ErrorKind::no_nonempty_focal_set: return "no-nonempty-focal-set";
        case ErrorKind::all_zero_contour: return "all-zero-contour";
        case ErrorKind::non_positive_hyperparameter: return "non-positive-hyperparameter";
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::file_not_found: return "file-not-found";
        case ErrorKind::bad_csv: return "bad-csv";
        case ErrorKind::bad_flags: return "bad-flags";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define POSSIC_REQUIRE(cond, kind, msg)                 \
    do {                                                \
        if (!(cond)) throw ::possic::Error((kind), (msg)); \
    } while (0)

// ============================================================================
// Response spaces and data
// ============================================================================

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

/// Index into the ordered label alphabet of a finite response space.
struct LabelId {
    std::size_t index = 0;
    friend bool operator==(LabelId, LabelId) = default;
    friend auto operator<=>(LabelId, LabelId) = default;
};

struct ContinuousInterval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

struct FiniteLabels {
    std::vector<std::string> labels;
};

class ResponseSpace {
public:
    static ResponseSpace continuous(double lo = -std::numeric_limits<double>::infinity(),
                                    double hi = std::numeric_limits<double>::infinity()) {
        POSSIC_REQUIRE(lo < hi, ErrorKind::invalid_space, "continuous space needs lo < hi");
        return ResponseSpace(ContinuousInterval{lo, hi});
    }

    static ResponseSpace finite(std::vector<std::string> labels) {
        POSSIC_REQUIRE(!labels.empty(), ErrorKind::empty_label_alphabet, "label alphabet is empty");
        std::unordered_set<std::string> seen;
        for (const auto& l : labels) {
            POSSIC_REQUIRE(seen.insert(l).second, ErrorKind::invalid_space, "duplicate label '" + l + "'");
        }
        return ResponseSpace(FiniteLabels{std::move(labels)});
    }

    bool is_finite() const { return std::holds_alternative<FiniteLabels>(kind_); }
    bool is_continuous() const { return !is_finite(); }

    const ContinuousInterval& interval() const { return std::get<ContinuousInterval>(kind_); }
    const std::vector<std::string>& labels() const { return std::get<FiniteLabels>(kind_).labels; }
    std::size_t label_count() const { return is_finite() ? labels().size() : 0; }

    const std::string& label_name(LabelId id) const { return labels().at(id.index); }

    std::optional<LabelId> find_label(std::string_view name) const {
        const auto& ls = labels();
        auto it = std::find(ls.begin(), ls.end(), name);
        if (it == ls.end()) return std::nullopt;
        return LabelId{static_cast<std::size_t>(it - ls.begin())};
    }

    friend bool operator==(const ResponseSpace& a, const ResponseSpace& b) {
        if (a.is_finite() != b.is_finite()) return false;
        if (a.is_finite()) return a.labels() == b.labels();
        return a.interval().lo == b.interval().lo && a.interval().hi == b.interval().hi;
    }

private:
    explicit ResponseSpace(std::variant<ContinuousInterval, FiniteLabels> k) : kind_(std::move(k)) {}
    std::variant<ContinuousInterval, FiniteLabels> kind_;
};

/// A response value: a real number or a label of a finite space.
using Response = std::variant<double, LabelId>;

inline double real_of(const Response& r) { return std::get<double>(r); }
inline LabelId label_of(const Response& r) { return std::get<LabelId>(r); }

struct Observation {
    std::vector<double> x;
    Response y;

    friend bool operator==(const Observation&, const Observation&) = default;
};

struct Dataset {
    std::vector<Observation> observations;
    ResponseSpace space = ResponseSpace::continuous();

    std::size_t size() const { return observations.size(); }
    bool empty() const { return observations.empty(); }
    std::size_t dimension() const { return observations.empty() ? 0 : observations.front().x.size(); }
    const Observation& operator[](std::size_t i) const { return observations[i]; }

    /// Copy with one extra row appended.
    Dataset augmented(Observation extra) const {
        Dataset out{observations, space};
        out.observations.push_back(std::move(extra));
        return out;
    }

    /// Copy with row `i` removed.
    Dataset without(std::size_t i) const {
        Dataset out{{}, space};
        out.observations.reserve(observations.size() - 1);
        for (std::size_t j = 0; j < observations.size(); ++j) {
            if (j != i) out.observations.push_back(observations[j]);
        }
        return out;
    }

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

inline bool response_in_space(const Response& y, const ResponseSpace& space) {
    if (space.is_finite()) {
        return std::holds_alternative<LabelId>(y) && label_of(y).index < space.label_count();
    }
    if (!std::holds_alternative<double>(y)) return false;
    double v = real_of(y);
    return !std::isnan(v) && v >= space.interval().lo && v <= space.interval().hi;
}

/// Checks homogeneous feature dimension (d >= 1) and that every response lies in the space.
inline const Dataset& validate_dataset(const Dataset& d) {
    if (d.space.is_finite()) {
        POSSIC_REQUIRE(d.space.label_count() > 0, ErrorKind::empty_label_alphabet, "label alphabet is empty");
    }
    const std::size_t dim = d.dimension();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto& o = d.observations[i];
        POSSIC_REQUIRE(!o.x.empty(), ErrorKind::dimension_mismatch,
                       "row " + std::to_string(i) + " has no features");
        POSSIC_REQUIRE(o.x.size() == dim, ErrorKind::dimension_mismatch,
                       "row " + std::to_string(i) + " has " + std::to_string(o.x.size()) +
                           " features, expected " + std::to_string(dim));
        POSSIC_REQUIRE(response_in_space(o.y, d.space), ErrorKind::label_outside_space,
                       "row " + std::to_string(i) + " response is outside the response space");
    }
    return d;
}

// ============================================================================
// Assertions
// ============================================================================

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = true;
    bool hi_closed = true;

    static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }

    bool contains(double v) const {
        bool above = lo_closed ? v >= lo : v > lo;
        bool below = hi_closed ? v <= hi : v < hi;
        return above && below;
    }
    bool is_singleton() const { return lo == hi && lo_closed && hi_closed; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

struct LabelSet {
    std::vector<LabelId> labels;
};

struct IntervalUnion {
    std::vector<Interval> parts;
};

using Assertion = std::variant<LabelSet, IntervalUnion>;

inline Assertion label_assertion(std::vector<LabelId> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return LabelSet{std::move(labels)};
}

inline Assertion interval_assertion(std::vector<Interval> parts) {
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    return IntervalUnion{std::move(parts)};
}

namespace detail {

// True if `a` ends strictly before `b` begins (no shared point).
inline bool ends_before(const Interval& a, const Interval& b) {
    if (a.hi < b.lo) return true;
    return a.hi == b.lo && !(a.hi_closed && b.lo_closed);
}

}  // namespace detail

inline void validate_assertion(const Assertion& a, const ResponseSpace& space) {
    if (const auto* ls = std::get_if<LabelSet>(&a)) {
        POSSIC_REQUIRE(space.is_finite(), ErrorKind::invalid_argument, "label assertion over a continuous space");
        for (auto id : ls->labels) {
            POSSIC_REQUIRE(id.index < space.label_count(), ErrorKind::label_outside_space,
                           "assertion label index out of range");
        }
        return;
    }
    const auto& iu = std::get<IntervalUnion>(a);
    POSSIC_REQUIRE(space.is_continuous(), ErrorKind::invalid_argument, "interval assertion over a finite space");
    for (std::size_t i = 0; i < iu.parts.size(); ++i) {
        const auto& p = iu.parts[i];
        POSSIC_REQUIRE(p.lo < p.hi || p.is_singleton(), ErrorKind::invalid_argument,
                       "interval must be nondegenerate or a closed singleton");
        if (i > 0) {
            POSSIC_REQUIRE(detail::ends_before(iu.parts[i - 1], p), ErrorKind::invalid_argument,
                           "assertion intervals must be sorted and pairwise disjoint");
        }
    }
}

inline bool contains(const Assertion& a, const Response& y) {
    if (const auto* ls = std::get_if<LabelSet>(&a)) {
        auto id = label_of(y);
        return std::find(ls->labels.begin(), ls->labels.end(), id) != ls->labels.end();
    }
    double v = real_of(y);
    const auto& parts = std::get<IntervalUnion>(a).parts;
    return std::any_of(parts.begin(), parts.end(), [v](const Interval& p) { return p.contains(v); });
}

inline bool is_empty(const Assertion& a) {
    if (const auto* ls = std::get_if<LabelSet>(&a)) return ls->labels.empty();
    return std::get<IntervalUnion>(a).parts.empty();
}

/// True when the assertion is the whole response space.
inline bool covers_space(const Assertion& a, const ResponseSpace& space) {
    if (const auto* ls = std::get_if<LabelSet>(&a)) {
        std::vector<bool> hit(space.label_count(), false);
        for (auto id : ls->labels) {
            if (id.index < hit.size()) hit[id.index] = true;
        }
        return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    }
    auto parts = std::get<IntervalUnion>(a).parts;
    std::sort(parts.begin(), parts.end(), [](const Interval& l, const Interval& r) {
        return l.lo < r.lo || (l.lo == r.lo && l.lo_closed && !r.lo_closed);
    });
    const double lo = space.interval().lo;
    const double hi = space.interval().hi;
    // Sweep the covered prefix [lo, reach); `reach_incl` says whether reach itself is covered.
    // Infinite endpoints are not members of the space, so they count as covered.
    double reach = lo;
    bool reach_incl = std::isinf(lo);
    for (const auto& p : parts) {
        bool connects = p.lo < reach || (p.lo == reach && (reach_incl || p.lo_closed));
        if (!connects) return false;
        if (p.hi > reach) {
            reach = p.hi;
            reach_incl = p.hi_closed;
        } else if (p.hi == reach) {
            reach_incl = reach_incl || p.hi_closed;
        }
    }
    return reach > hi || (reach == hi && (reach_incl || std::isinf(hi)));
}

// ============================================================================
// Contours and the consonant predictor
// ============================================================================

enum class Adjustment { raw, conditioned, stretched };

inline std::string_view to_string(Adjustment a) {
    switch (a) {
        case Adjustment::raw: return "raw";
        case Adjustment::conditioned: return "conditioned";
        case Adjustment::stretched: return "stretched";
    }
    return "raw";
}

struct ContourPoint {
    Response candidate;
    Rational plausibility;
};

/// A plausibility contour evaluated on candidate labels or grid points.
/// Raw and stretched values are k/(n+1); conditioned values are ratios of those.
struct ContourTable {
    std::vector<ContourPoint> points;
    std::size_t n = 0;
    Adjustment adjusted = Adjustment::raw;

    Rational max() const {
        Rational m{0};
        for (const auto& p : points) m = std::max(m, p.plausibility);
        return m;
    }

    /// Plausibility of a label in a finite-space contour.
    Rational at(LabelId id) const {
        for (const auto& p : points) {
            if (label_of(p.candidate) == id) return p.plausibility;
        }
        throw Error(ErrorKind::invalid_argument, "label not present in contour");
    }
};

struct PossibilityPredictor {
    ContourTable contour;
    ResponseSpace space = ResponseSpace::continuous();
    /// Total ignorance: contour identically 1 on the whole space.
    bool vacuous = false;
};

/// The predictor used when there is no data to learn from.
inline PossibilityPredictor vacuous_predictor(const ResponseSpace& space) {
    PossibilityPredictor p;
    p.space = space;
    p.vacuous = true;
    p.contour.n = 0;
    p.contour.adjusted = Adjustment::raw;
    if (space.is_finite()) {
        for (std::size_t i = 0; i < space.label_count(); ++i) {
            p.contour.points.push_back({LabelId{i}, Rational{1}});
        }
    }
    return p;
}

}  // namespace possic
