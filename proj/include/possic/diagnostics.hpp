#pragma once

// Monte Carlo checks of validity: the law of pi(Y_{n+1}) at the true response,
// f-curves alpha -> P{upper(A) <= alpha, Y in A}, and the conjugate Student-t
// baseline that serves as a precise (additive) predictor for comparison.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/random/discrete_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/student_t_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "possic/core.hpp"
#include "possic/parallel.hpp"
#include "possic/possibility.hpp"
#include "possic/rng.hpp"
#include "possic/transducer.hpp"

namespace possic {

// ============================================================================
// Generators
// ============================================================================

/// iid Unif(lo, hi) responses with a constant one-dimensional feature.
struct UniformIid {
    double lo = -5.0;
    double hi = 5.0;
};

/// X ~ Unif(0,1), Y = sin^3(2 pi X^3) + scale * t_df.
struct SineCubedRegression {
    double noise_df = 5.0;
    double noise_scale = 0.1;
};

/// Label drawn from `label_probs`; each feature ~ N(label_means[label], sd),
/// rounded to a multiple of `rounding` (0 keeps it continuous) so ties occur.
struct GaussianClasses {
    std::vector<double> label_probs{0.5, 0.3, 0.2};
    std::vector<double> label_means{0.0, 1.0, 2.0};
    double sd = 1.0;
    double rounding = 0.5;
    std::size_t dim = 1;
};

struct GeneratorSpec {
    std::variant<UniformIid, SineCubedRegression, GaussianClasses> kind = UniformIid{};
    std::uint64_t seed = 0;
};

inline double sine_cubed_mean(double x) { return std::pow(std::sin(2.0 * std::numbers::pi * x * x * x), 3); }

inline ResponseSpace generator_space(const GeneratorSpec& gen) {
    if (const auto* c = std::get_if<GaussianClasses>(&gen.kind)) {
        std::vector<std::string> labels;
        for (std::size_t l = 0; l < c->label_probs.size(); ++l) labels.push_back(std::string(1, char('A' + l)));
        return ResponseSpace::finite(std::move(labels));
    }
    return ResponseSpace::continuous();
}

/// `rows` iid observations drawn from stream `replicate` of the generator's seed.
inline Dataset simulate(const GeneratorSpec& gen, std::size_t rows, std::uint64_t replicate) {
    CounterRng rng(gen.seed, replicate);
    Dataset out{{}, generator_space(gen)};
    out.observations.reserve(rows);
    std::visit(
        [&](const auto& g) {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, UniformIid>) {
                POSSIC_REQUIRE(g.lo < g.hi, ErrorKind::invalid_argument, "uniform generator needs lo < hi");
                boost::random::uniform_real_distribution<double> unif(g.lo, g.hi);
                for (std::size_t i = 0; i < rows; ++i) out.observations.push_back({{0.0}, unif(rng)});
            } else if constexpr (std::is_same_v<G, SineCubedRegression>) {
                POSSIC_REQUIRE(g.noise_df > 0.0 && g.noise_scale >= 0.0, ErrorKind::invalid_argument,
                               "noise needs df > 0 and scale >= 0");
                boost::random::uniform_real_distribution<double> unif(0.0, 1.0);
                boost::random::student_t_distribution<double> noise(g.noise_df);
                for (std::size_t i = 0; i < rows; ++i) {
                    double x = unif(rng);
                    double y = sine_cubed_mean(x) + g.noise_scale * noise(rng);
                    out.observations.push_back({{x}, y});
                }
            } else {
                POSSIC_REQUIRE(!g.label_probs.empty() && g.label_probs.size() == g.label_means.size(),
                               ErrorKind::invalid_argument, "class generator needs one mean per label");
                POSSIC_REQUIRE(g.dim >= 1 && g.sd > 0.0, ErrorKind::invalid_argument,
                               "class generator needs dim >= 1 and sd > 0");
                boost::random::discrete_distribution<std::size_t> pick(g.label_probs.begin(), g.label_probs.end());
                boost::random::normal_distribution<double> noise(0.0, g.sd);
                for (std::size_t i = 0; i < rows; ++i) {
                    std::size_t label = pick(rng);
                    std::vector<double> x(g.dim);
                    for (auto& v : x) {
                        v = g.label_means[label] + noise(rng);
                        if (g.rounding > 0.0) v = std::round(v / g.rounding) * g.rounding;
                    }
                    out.observations.push_back({std::move(x), LabelId{label}});
                }
            }
        },
        gen.kind);
    return out;
}

// ============================================================================
// Conjugate Student-t baseline
// ============================================================================

/// Normal-inverse-gamma prior (mean m0, precision factor k0, shape a0, rate b0).
struct NigHyper {
    double m0 = 0.0;
    double k0 = 1.0;
    double a0 = 1.0;
    double b0 = 1.0;
};

/// Location-scale Student-t posterior predictive.
struct StudentTPredictive {
    double df = 1.0;
    double location = 0.0;
    double scale = 1.0;

    double cdf(double y) const {
        if (std::isinf(y)) return y > 0 ? 1.0 : 0.0;
        return boost::math::cdf(boost::math::students_t_distribution<double>(df), (y - location) / scale);
    }

    double interval_prob(const Interval& iv) const { return std::max(0.0, cdf(iv.hi) - cdf(iv.lo)); }

    double prob(const Assertion& a) const {
        double p = 0.0;
        for (const auto& iv : std::get<IntervalUnion>(a).parts) p += interval_prob(iv);
        return std::min(p, 1.0);
    }
};

inline StudentTPredictive bayes_t_predictive(std::span<const double> y, const NigHyper& h = {}) {
    POSSIC_REQUIRE(!y.empty(), ErrorKind::insufficient_data, "Bayes predictive needs at least one observation");
    POSSIC_REQUIRE(h.k0 > 0.0 && h.a0 > 0.0 && h.b0 > 0.0, ErrorKind::non_positive_hyperparameter,
                   "k0, a0 and b0 must be positive");
    const double n = static_cast<double>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : y) ss += (v - mean) * (v - mean);

    const double kn = h.k0 + n;
    const double mn = (h.k0 * h.m0 + n * mean) / kn;
    const double an = h.a0 + n / 2.0;
    const double bn = h.b0 + 0.5 * ss + h.k0 * n * (mean - h.m0) * (mean - h.m0) / (2.0 * kn);
    return StudentTPredictive{2.0 * an, mn, std::sqrt(bn * (kn + 1.0) / (an * kn))};
}

// ============================================================================
// Reports
// ============================================================================

/// Null standard error of a Bernoulli(alpha) frequency over `reps` draws.
inline double binomial_stderr(double alpha, std::size_t reps) {
    return std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(reps));
}

struct ValidityReport {
    std::vector<double> alphas;
    std::vector<double> cdf;  // fraction of replicates with pi(Y_{n+1}) <= alpha
    std::vector<double> stderrs;
    std::size_t reps = 0;
    std::size_t n = 0;
    std::vector<Rational> values;  // pi(Y_{n+1}) per replicate

    /// True when cdf(alpha) <= alpha + z * s.e. at every grid alpha.
    bool dominated(double z) const {
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            if (cdf[i] > alphas[i] + z * stderrs[i]) return false;
        }
        return true;
    }

    /// Replicate counts at each level k/(n+1), k = 1..n+1.
    std::vector<std::size_t> level_counts() const {
        std::vector<std::size_t> counts(n + 1, 0);
        for (const auto& v : values) {
            Rational k = v * Rational(static_cast<std::int64_t>(n + 1));
            POSSIC_REQUIRE(k.denominator() == 1 && k.numerator() >= 1 &&
                               k.numerator() <= static_cast<std::int64_t>(n + 1),
                           ErrorKind::invalid_argument, "plausibility is not a level k/(n+1)");
            ++counts[static_cast<std::size_t>(k.numerator() - 1)];
        }
        return counts;
    }
};

struct FCurve {
    std::vector<double> alphas;
    std::vector<double> estimates;
    std::vector<double> stderrs;
    std::size_t reps = 0;
    std::string assertion;
    std::string predictor;

    /// True when some grid alpha has estimate > alpha + z * s.e.
    bool violated(double z) const {
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            if (estimates[i] > alphas[i] + z * stderrs[i]) return true;
        }
        return false;
    }
};

struct GofResult {
    double statistic = 0.0;
    std::size_t df = 0;
    double p_value = 1.0;
};

/// Pearson chi-square test of the counts against equal cell probabilities.
inline GofResult chi_square_uniform(std::span<const std::size_t> counts) {
    POSSIC_REQUIRE(counts.size() >= 2, ErrorKind::invalid_argument, "chi-square needs at least two cells");
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    POSSIC_REQUIRE(total > 0.0, ErrorKind::invalid_argument, "chi-square needs observations");
    const double expected = total / static_cast<double>(counts.size());
    GofResult out;
    for (auto c : counts) {
        double d = static_cast<double>(c) - expected;
        out.statistic += d * d / expected;
    }
    out.df = counts.size() - 1;
    boost::math::chi_squared_distribution<double> dist(static_cast<double>(out.df));
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
    return out;
}

/// alpha = 1/steps, 2/steps, ..., 1.
inline std::vector<double> alpha_grid(std::size_t steps) {
    std::vector<double> out(steps);
    for (std::size_t i = 0; i < steps; ++i) out[i] = static_cast<double>(i + 1) / static_cast<double>(steps);
    return out;
}

// ============================================================================
// Sweeps
// ============================================================================

namespace detail {

inline std::pair<Dataset, Observation> split_last(Dataset data) {
    Observation last = data.observations.back();
    data.observations.pop_back();
    return {std::move(data), std::move(last)};
}

}  // namespace detail

/// Plausibility of the true response across `reps` simulated samples of size n+1.
/// Regression contours already reach 1 on their grid, so `adjustment` only
/// affects classification.
inline ValidityReport validity_sweep(const GeneratorSpec& gen, std::size_t n, const TransducerConfig& cfg,
                                     Adjustment adjustment, std::size_t reps, std::span<const double> alphas,
                                     std::size_t threads = 1) {
    POSSIC_REQUIRE(reps >= 1, ErrorKind::invalid_argument, "reps must be at least 1");
    ValidityReport out;
    out.alphas.assign(alphas.begin(), alphas.end());
    out.reps = reps;
    out.n = n;
    out.values.resize(reps);
    TransducerConfig inner = cfg;
    inner.threads = 1;
    parallel_for(reps, threads, [&](std::size_t r) {
        auto [train, target] = detail::split_last(simulate(gen, n + 1, r));
        if (n < 1) {
            out.values[r] = Rational{1};
        } else if (train.space.is_finite()) {
            out.values[r] = adjust(contour_classification(train, target.x, inner), adjustment).at(label_of(target.y));
        } else {
            out.values[r] = plausibility_at(train, target.x, target.y, inner);
        }
    });
    for (double a : out.alphas) {
        std::size_t below = 0;
        for (const auto& v : out.values) below += to_double(v) <= a ? 1 : 0;
        out.cdf.push_back(static_cast<double>(below) / static_cast<double>(reps));
        out.stderrs.push_back(binomial_stderr(a, reps));
    }
    return out;
}

struct ConformalSpec {
    TransducerConfig cfg = TransducerConfig::regression(KnnMean{5});
    Adjustment adjustment = Adjustment::raw;
};

struct BayesTBaseline {
    NigHyper hyper;
};

using FPredictor = std::variant<ConformalSpec, BayesTBaseline>;

inline std::string describe(const FPredictor& p) {
    if (std::holds_alternative<BayesTBaseline>(p)) return "bayes-t";
    return "conformal-" + std::string(to_string(std::get<ConformalSpec>(p).adjustment));
}

inline std::string describe(const Assertion& a) {
    std::string out;
    if (const auto* ls = std::get_if<LabelSet>(&a)) {
        for (auto id : ls->labels) out += (out.empty() ? "" : ";") + std::to_string(id.index);
        return "{" + out + "}";
    }
    for (const auto& iv : std::get<IntervalUnion>(a).parts) {
        if (!out.empty()) out += "u";
        out += (iv.lo_closed ? "[" : "(") + std::to_string(iv.lo) + ";" + std::to_string(iv.hi) +
               (iv.hi_closed ? "]" : ")");
    }
    return out.empty() ? "{}" : out;
}

/// Upper probability of `a` for one simulated (train, target) pair.
inline double upper_probability_for(const FPredictor& predictor, const Dataset& train, std::span<const double> x,
                                    const Assertion& a) {
    if (const auto* b = std::get_if<BayesTBaseline>(&predictor)) {
        POSSIC_REQUIRE(train.space.is_continuous(), ErrorKind::invalid_argument,
                       "the Student-t baseline needs real responses");
        if (is_empty(a)) return 0.0;
        std::vector<double> ys;
        for (const auto& o : train.observations) ys.push_back(real_of(o.y));
        return bayes_t_predictive(ys, b->hyper).prob(a);
    }
    const auto& spec = std::get<ConformalSpec>(predictor);
    if (train.size() < 1) return to_double(upper_prob(vacuous_predictor(train.space), a));
    if (train.space.is_finite()) {
        auto contour = adjust(contour_classification(train, x, spec.cfg), spec.adjustment);
        return to_double(upper_prob(make_predictor(contour, train.space), a));
    }
    // Put the finite assertion endpoints on the grid so the supremum over A sees its boundary.
    std::vector<double> extra;
    for (const auto& iv : std::get<IntervalUnion>(a).parts) {
        extra.push_back(iv.lo);
        extra.push_back(iv.hi);
    }
    auto base = default_grid(train, x, spec.cfg);
    auto grid = make_grid(std::move(base.points), base.point_prediction, extra);
    auto contour = adjust(contour_regression(train, x, spec.cfg, grid), spec.adjustment);
    return to_double(upper_prob(make_predictor(contour, train.space), a));
}

/// f(alpha) = P{upper(A) <= alpha and Y_{n+1} in A}, estimated over `reps` samples.
inline FCurve f_curve(const GeneratorSpec& gen, std::size_t n, const FPredictor& predictor, const Assertion& a,
                      std::size_t reps, std::span<const double> alphas, std::size_t threads = 1) {
    POSSIC_REQUIRE(reps >= 1, ErrorKind::invalid_argument, "reps must be at least 1");
    validate_assertion(a, generator_space(gen));
    FPredictor inner = predictor;
    if (auto* c = std::get_if<ConformalSpec>(&inner)) c->cfg.threads = 1;

    std::vector<double> upper(reps);
    std::vector<char> hit(reps);
    parallel_for(reps, threads, [&](std::size_t r) {
        auto [train, target] = detail::split_last(simulate(gen, n + 1, r));
        hit[r] = contains(a, target.y) ? 1 : 0;
        upper[r] = upper_probability_for(inner, train, target.x, a);
    });

    FCurve out;
    out.alphas.assign(alphas.begin(), alphas.end());
    out.reps = reps;
    out.assertion = describe(a);
    out.predictor = describe(predictor);
    for (double al : out.alphas) {
        std::size_t count = 0;
        for (std::size_t r = 0; r < reps; ++r) count += (hit[r] && upper[r] <= al) ? 1 : 0;
        out.estimates.push_back(static_cast<double>(count) / static_cast<double>(reps));
        out.stderrs.push_back(binomial_stderr(al, reps));
    }
    return out;
}

}  // namespace possic
