#pragma once

// Brute-force reference computations, written directly from the definitions
// and kept independent of the library's code paths: plain structs instead of
// Dataset, explicit leave-one-out copies, and explicit enumeration of the
// auxiliary uniform U' instead of rank aggregation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include <boost/rational.hpp>

namespace oracle {

using Q = boost::rational<std::int64_t>;

struct ClassRow {
    std::vector<double> x;
    std::size_t label;
};

struct RegRow {
    std::vector<double> x;
    double y;
};

inline double dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return std::sqrt(s);
}

/// min same-label distance / min other-label distance, scored for `self` against `others`.
inline double nn_ratio(const std::vector<ClassRow>& others, const ClassRow& self) {
    const double inf = std::numeric_limits<double>::infinity();
    double num = inf;
    double den = inf;
    for (const auto& o : others) {
        double d = dist(o.x, self.x);
        if (o.label == self.label) {
            num = std::min(num, d);
        } else {
            den = std::min(den, d);
        }
    }
    if (num == 0.0 && den == 0.0) return 0.0;
    if (std::isinf(num) && std::isinf(den)) return 0.0;
    if (den == 0.0) return inf;
    return num / den;
}

template <class Row, class Score>
std::vector<double> leave_one_out_scores(const std::vector<Row>& z, Score score) {
    std::vector<double> t;
    for (std::size_t i = 0; i < z.size(); ++i) {
        std::vector<Row> others;
        for (std::size_t j = 0; j < z.size(); ++j) {
            if (j != i) others.push_back(z[j]);
        }
        t.push_back(score(others, z[i]));
    }
    return t;
}

/// Mean response of the k nearest rows, counting every row tied at the k-th distance.
inline double knn_mean(const std::vector<RegRow>& train, const std::vector<double>& x, std::size_t k) {
    std::vector<double> d;
    for (const auto& r : train) d.push_back(dist(r.x, x));
    std::vector<double> sorted = d;
    std::sort(sorted.begin(), sorted.end());
    const double kth = sorted[k - 1];
    double sum = 0.0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
        if (d[i] <= kth) {
            sum += train[i].y;
            ++m;
        }
    }
    return sum / static_cast<double>(m);
}

inline std::size_t at_least_count(const std::vector<double>& t) {
    std::size_t c = 0;
    for (double v : t) c += v >= t.back() ? 1 : 0;
    return c;
}

inline Q plausibility_class(const std::vector<ClassRow>& train, const std::vector<double>& x, std::size_t label) {
    auto z = train;
    z.push_back({x, label});
    auto t = leave_one_out_scores(z, nn_ratio);
    return Q(static_cast<std::int64_t>(at_least_count(t)), static_cast<std::int64_t>(z.size()));
}

inline Q plausibility_knn(const std::vector<RegRow>& train, const std::vector<double>& x, double y, std::size_t k) {
    auto z = train;
    z.push_back({x, y});
    auto t = leave_one_out_scores(z, [k](const std::vector<RegRow>& others, const RegRow& self) {
        return std::abs(self.y - knn_mean(others, self.x, k));
    });
    return Q(static_cast<std::int64_t>(at_least_count(t)), static_cast<std::int64_t>(z.size()));
}

/// Rank of the candidate row: n + 2 - #{i : T_i >= T_{n+1}}.
inline std::size_t rank_class(const std::vector<ClassRow>& train, const std::vector<double>& x, std::size_t label) {
    auto z = train;
    z.push_back({x, label});
    return z.size() + 1 - at_least_count(leave_one_out_scores(z, nn_ratio));
}

/// Random set {labels with rank in {1..U'}}, masses tallied over every U' in 1..n+1.
/// `stretch` replaces {1..U'} by {1..max(U', min rank)}.
inline std::map<std::vector<std::size_t>, Q> enumerate_random_set(const std::vector<ClassRow>& train,
                                                                  const std::vector<double>& x,
                                                                  std::size_t labels, bool stretch) {
    std::vector<std::size_t> rank(labels);
    for (std::size_t l = 0; l < labels; ++l) rank[l] = rank_class(train, x, l);
    const std::size_t min_rank = *std::min_element(rank.begin(), rank.end());
    const std::size_t m = train.size() + 1;
    std::map<std::vector<std::size_t>, Q> out;
    for (std::size_t u = 1; u <= m; ++u) {
        const std::size_t top = stretch ? std::max(u, min_rank) : u;
        std::vector<std::size_t> set;
        for (std::size_t l = 0; l < labels; ++l) {
            if (rank[l] >= 1 && rank[l] <= top) set.push_back(l);
        }
        out[set] += Q(1, static_cast<std::int64_t>(m));
    }
    return out;
}

/// Contour of the random set conditioned on being non-empty: P(l in Y | Y != {}).
inline std::vector<Q> conditioned_contour(const std::map<std::vector<std::size_t>, Q>& rs, std::size_t labels) {
    Q nonempty{0};
    for (const auto& [set, mass] : rs) {
        if (!set.empty()) nonempty += mass;
    }
    std::vector<Q> out(labels, Q{0});
    for (const auto& [set, mass] : rs) {
        for (auto l : set) out[l] += mass / nonempty;
    }
    return out;
}

inline std::vector<Q> contour_of(const std::map<std::vector<std::size_t>, Q>& rs, std::size_t labels) {
    std::vector<Q> out(labels, Q{0});
    for (const auto& [set, mass] : rs) {
        for (auto l : set) out[l] += mass;
    }
    return out;
}

// ----------------------------------------------------------------------------
// Random instances
// ----------------------------------------------------------------------------

struct ClassInstance {
    std::vector<ClassRow> train;
    std::vector<double> x;
    std::size_t labels = 2;
};

/// Small integer-valued features so that distance ties and duplicate points are common.
inline ClassInstance random_class_instance(std::mt19937_64& rng, std::size_t max_n, std::size_t max_labels) {
    std::uniform_int_distribution<std::size_t> n_dist(1, max_n);
    std::uniform_int_distribution<std::size_t> l_dist(2, max_labels);
    std::uniform_int_distribution<std::size_t> d_dist(1, 2);
    std::uniform_int_distribution<int> coord(0, 3);
    ClassInstance inst;
    inst.labels = l_dist(rng);
    const std::size_t n = n_dist(rng);
    const std::size_t d = d_dist(rng);
    std::uniform_int_distribution<std::size_t> label(0, inst.labels - 1);
    for (std::size_t i = 0; i < n; ++i) {
        ClassRow r;
        for (std::size_t j = 0; j < d; ++j) r.x.push_back(coord(rng));
        r.label = label(rng);
        inst.train.push_back(std::move(r));
    }
    for (std::size_t j = 0; j < d; ++j) inst.x.push_back(coord(rng));
    return inst;
}

}  // namespace oracle
