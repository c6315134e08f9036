// Walks through the alligator food-choice example at length 2.0 m: possible
// ranks, the random set with its empty-set mass, and what conditioning and
// stretching do to the contour and the prediction sets.

#include <iomanip>
#include <iostream>
#include <string>

#include "possic/possic.hpp"

namespace {

std::string text(const possic::Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string labels_text(const std::vector<possic::LabelId>& ids, const possic::ResponseSpace& space) {
    std::string out = "{";
    for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + space.label_name(ids[i]);
    return out + "}";
}

}  // namespace

int main() {
    using namespace possic;
    const Dataset data = io::alligator();
    const std::vector<double> x{2.0};

    const auto ranks = possible_ranks(data, x);
    std::cout << "n = " << data.size() << ", query length 2.0\nranks:";
    for (std::size_t l = 0; l < ranks.rank_of_label.size(); ++l) {
        std::cout << ' ' << data.space.labels()[l] << '=' << ranks.rank_of_label[l];
    }
    std::cout << "\n\nrandom set\n";
    const auto rs = random_set(data, x);
    for (const auto& f : rs.focal) std::cout << "  " << labels_text(f.labels, data.space) << " " << text(f.mass) << '\n';

    std::cout << "stretched random set\n";
    for (const auto& f : stretched_random_set(rs).focal) {
        std::cout << "  " << labels_text(f.labels, data.space) << " " << text(f.mass) << '\n';
    }

    const auto raw = contour_classification(data, x);
    std::cout << "\ncontour" << std::setw(8) << "raw" << std::setw(13) << "conditioned" << std::setw(11) << "stretched\n";
    const auto cond = adjust_conditioning(raw);
    const auto str = adjust_stretching(raw);
    for (std::size_t l = 0; l < raw.points.size(); ++l) {
        std::cout << "  " << std::left << std::setw(5) << data.space.labels()[l] << std::right << std::setw(8)
                  << text(raw.points[l].plausibility) << std::setw(13) << text(cond.points[l].plausibility)
                  << std::setw(10) << text(str.points[l].plausibility) << '\n';
    }

    std::cout << "\nprediction sets {y : pi(y) > alpha}\n";
    for (double alpha : {0.1, 0.4, 0.7}) {
        std::cout << "  alpha " << alpha << ":";
        for (auto how : {Adjustment::raw, Adjustment::conditioned, Adjustment::stretched}) {
            const auto pred = make_predictor(adjust(raw, how), data.space);
            const auto set = prediction_set(pred, alpha);
            std::cout << "  " << to_string(how) << ' '
                      << labels_text(std::get<std::vector<LabelId>>(set.members), data.space);
        }
        std::cout << '\n';
    }
    return 0;
}
