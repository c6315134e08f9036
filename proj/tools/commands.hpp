#pragma once

// Command-line front end. `run_cli` parses arguments, runs one subcommand and
// returns the process exit code: 0 success, 1 usage error, 2 data error,
// 3 numeric error. Errors are reported on `err` as
//   error[<category>]: <kind>: <detail>
// with category one of bad-flags, bad-csv, math-error.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "possic/possic.hpp"

namespace possic::cli {

inline constexpr std::uint64_t default_seed = 20220621;

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_data = 2, exit_numeric = 3 };

inline ExitCode exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::bad_flags:
        case ErrorKind::invalid_argument: return exit_usage;
        case ErrorKind::file_not_found:
        case ErrorKind::bad_csv:
        case ErrorKind::dimension_mismatch:
        case ErrorKind::label_outside_space:
        case ErrorKind::empty_label_alphabet:
        case ErrorKind::invalid_space: return exit_data;
        default: return exit_numeric;
    }
}

inline std::string_view category_for(ExitCode c) {
    switch (c) {
        case exit_usage: return "bad-flags";
        case exit_data: return "bad-csv";
        default: return "math-error";
    }
}

/// Seed precedence: --seed, then POSSIC_SEED, then the fixed default.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("POSSIC_SEED")) {
        std::uint64_t v = 0;
        std::string_view s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        POSSIC_REQUIRE(ec == std::errc() && ptr == s.data() + s.size(), ErrorKind::bad_flags,
                       "POSSIC_SEED must be an unsigned integer");
        return v;
    }
    return default_seed;
}

// ============================================================================
// Flag parsing helpers
// ============================================================================

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

inline double parse_number(const std::string& s, const std::string& what) {
    auto v = io::parse_double(s);
    POSSIC_REQUIRE(v.has_value(), ErrorKind::bad_flags, what + ": '" + s + "' is not a number");
    return *v;
}

inline std::vector<double> parse_features(const std::string& s) {
    std::vector<double> out;
    for (const auto& part : split(s, ',')) out.push_back(parse_number(part, "--x"));
    POSSIC_REQUIRE(!out.empty(), ErrorKind::bad_flags, "--x needs at least one feature value");
    return out;
}

inline Adjustment parse_adjustment(const std::string& s) {
    if (s == "none" || s == "raw") return Adjustment::raw;
    if (s == "condition" || s == "conditioned" || s == "conditioning") return Adjustment::conditioned;
    if (s == "stretch" || s == "stretched" || s == "stretching") return Adjustment::stretched;
    throw Error(ErrorKind::bad_flags, "unknown adjustment '" + s + "' (none|condition|stretch)");
}

/// nn | knn:K | ridge:LAMBDA
inline TransducerConfig parse_psi(const std::string& spec, bool finite_space, bool standardize) {
    const std::string psi = spec.empty() ? (finite_space ? "nn" : "knn:5") : spec;
    auto parts = split(psi, ':');
    TransducerConfig cfg;
    if (parts[0] == "nn") {
        POSSIC_REQUIRE(finite_space, ErrorKind::bad_flags, "--psi nn needs a classification dataset");
        cfg.psi = ClassificationPsi{standardize};
        return cfg;
    }
    POSSIC_REQUIRE(!finite_space, ErrorKind::bad_flags, "--psi " + parts[0] + " needs a regression dataset");
    POSSIC_REQUIRE(parts.size() == 2, ErrorKind::bad_flags, "--psi expects nn, knn:K or ridge:LAMBDA");
    if (parts[0] == "knn") {
        double k = parse_number(parts[1], "--psi knn");
        POSSIC_REQUIRE(k >= 1 && k == std::floor(k), ErrorKind::bad_flags, "knn k must be a positive integer");
        cfg.psi = RegressionPsi{KnnMean{static_cast<std::size_t>(k)}, standardize};
    } else if (parts[0] == "ridge") {
        double lambda = parse_number(parts[1], "--psi ridge");
        POSSIC_REQUIRE(lambda >= 0.0, ErrorKind::bad_flags, "ridge lambda must be non-negative");
        cfg.psi = RegressionPsi{Ridge{lambda}, standardize};
    } else {
        throw Error(ErrorKind::bad_flags, "unknown --psi '" + psi + "'");
    }
    return cfg;
}

/// unif[:lo:hi] | sin3[:df:scale] | class3[:rounding]
inline GeneratorSpec parse_generator(const std::string& spec, std::uint64_t seed) {
    auto parts = split(spec, ':');
    GeneratorSpec gen;
    gen.seed = seed;
    if (parts[0] == "unif") {
        UniformIid u;
        if (parts.size() == 3) {
            u.lo = parse_number(parts[1], "--gen unif lo");
            u.hi = parse_number(parts[2], "--gen unif hi");
        } else {
            POSSIC_REQUIRE(parts.size() == 1, ErrorKind::bad_flags, "--gen unif takes unif or unif:LO:HI");
        }
        POSSIC_REQUIRE(u.lo < u.hi, ErrorKind::bad_flags, "--gen unif needs LO < HI");
        gen.kind = u;
    } else if (parts[0] == "sin3") {
        SineCubedRegression s;
        if (parts.size() == 3) {
            s.noise_df = parse_number(parts[1], "--gen sin3 df");
            s.noise_scale = parse_number(parts[2], "--gen sin3 scale");
        } else {
            POSSIC_REQUIRE(parts.size() == 1, ErrorKind::bad_flags, "--gen sin3 takes sin3 or sin3:DF:SCALE");
        }
        POSSIC_REQUIRE(s.noise_df > 0.0 && s.noise_scale >= 0.0, ErrorKind::bad_flags, "bad sin3 noise");
        gen.kind = s;
    } else if (parts[0] == "class3") {
        GaussianClasses c;
        if (parts.size() == 2) c.rounding = parse_number(parts[1], "--gen class3 rounding");
        POSSIC_REQUIRE(parts.size() <= 2 && c.rounding >= 0.0, ErrorKind::bad_flags,
                       "--gen class3 takes class3 or class3:ROUNDING");
        gen.kind = c;
    } else {
        throw Error(ErrorKind::bad_flags, "unknown generator '" + spec + "' (unif, sin3, class3)");
    }
    return gen;
}

/// LO:HI[,LO:HI...] closed intervals, or label names separated by ';' for finite spaces.
inline Assertion parse_assertion(const std::string& spec, const ResponseSpace& space) {
    if (space.is_finite()) {
        std::vector<LabelId> labels;
        for (const auto& name : split(spec, ';')) {
            if (name.empty()) continue;
            auto id = space.find_label(name);
            POSSIC_REQUIRE(id.has_value(), ErrorKind::bad_flags, "unknown label '" + name + "' in --assertion");
            labels.push_back(*id);
        }
        return label_assertion(std::move(labels));
    }
    std::vector<Interval> parts;
    for (const auto& piece : split(spec, ',')) {
        if (piece.empty()) continue;
        auto ends = split(piece, ':');
        POSSIC_REQUIRE(ends.size() == 2, ErrorKind::bad_flags, "--assertion intervals are LO:HI");
        parts.push_back(Interval::closed(parse_number(ends[0], "--assertion"), parse_number(ends[1], "--assertion")));
    }
    auto a = interval_assertion(std::move(parts));
    try {
        validate_assertion(a, space);
    } catch (const Error& e) {
        throw Error(ErrorKind::bad_flags, e.what());
    }
    return a;
}

// ============================================================================
// Output helpers
// ============================================================================

inline std::string rational_text(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline std::string candidate_text(const Response& y, const ResponseSpace& space) {
    if (space.is_finite()) return space.label_name(label_of(y));
    return io::format_double(real_of(y));
}

inline std::string set_text(const PredictionSet& s, const ResponseSpace& space) {
    std::string out = "{";
    if (const auto* ls = std::get_if<std::vector<LabelId>>(&s.members)) {
        for (std::size_t i = 0; i < ls->size(); ++i) out += (i ? "," : "") + space.label_name((*ls)[i]);
        return out + "}";
    }
    const auto& ivs = std::get<std::vector<Interval>>(s.members);
    for (std::size_t i = 0; i < ivs.size(); ++i) {
        out += (i ? " U " : "") + std::string("[") + io::format_double(ivs[i].lo) + "," +
               io::format_double(ivs[i].hi) + "]";
    }
    return out + "}";
}

struct Output {
    std::ostream* stream;
    std::ofstream file;

    explicit Output(std::ostream& fallback) : stream(&fallback) {}
    Output(std::ostream& fallback, const std::optional<std::filesystem::path>& path) : stream(&fallback) {
        if (path) {
            file.open(*path);
            POSSIC_REQUIRE(file.good(), ErrorKind::file_not_found, "cannot write " + path->string());
            stream = &file;
        }
    }
    std::ostream& operator*() { return *stream; }
};

inline std::string format_alpha_list(const std::vector<double>& alphas) {
    std::string out;
    for (double a : alphas) out += (out.empty() ? "" : ",") + io::format_double(a);
    return out;
}

// ============================================================================
// Subcommands
// ============================================================================

struct DataFlags {
    std::string data;
    std::optional<std::string> glass_path;
    std::string task = "auto";
    std::string psi;
    bool standardize = false;
    std::size_t grid_points = 201;
    double grid_span = 1.0;

    Dataset load() const {
        io::LoadOptions opts;
        if (task == "regression") {
            opts.csv.task = io::Task::regression;
        } else if (task == "classification") {
            opts.csv.task = io::Task::classification;
        } else {
            POSSIC_REQUIRE(task == "auto", ErrorKind::bad_flags, "--task must be auto, regression or classification");
        }
        if (glass_path) opts.glass_path = *glass_path;
        return io::load_dataset(data, opts);
    }

    TransducerConfig config(const Dataset& d, std::size_t threads) const {
        auto cfg = parse_psi(psi, d.space.is_finite(), standardize);
        POSSIC_REQUIRE(grid_points >= 2, ErrorKind::bad_flags, "--grid-points must be at least 2");
        cfg.grid = GridSpec{grid_points, grid_span};
        cfg.threads = threads;
        return cfg;
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--data", data, "builtin name (alligator, glass) or CSV path")->required();
        cmd->add_option("--glass-path", glass_path, "local UCI glass file for --data glass");
        cmd->add_option("--task", task, "auto | regression | classification");
        cmd->add_option("--psi", psi, "nn | knn:K | ridge:LAMBDA (default nn or knn:5)");
        cmd->add_flag("--standardize", standardize, "scale features by their sd in the augmented sample");
        cmd->add_option("--grid-points", grid_points, "regression candidate grid size");
        cmd->add_option("--grid-span", grid_span, "grid half-width beyond the data, in response ranges");
    }
};

inline int cmd_predict(const DataFlags& df, const std::string& x_text, const std::string& adjust_text,
                       std::vector<double> alphas, const std::optional<std::string>& out_dir,
                       std::uint64_t seed, std::size_t threads, std::ostream& out, std::ostream& err) {
    const Dataset train = df.load();
    const auto cfg = df.config(train, threads);
    const auto x = parse_features(x_text);
    const Adjustment how = parse_adjustment(adjust_text);
    if (alphas.empty()) alphas = {0.05};
    for (double a : alphas) POSSIC_REQUIRE(a >= 0.0 && a <= 1.0, ErrorKind::bad_flags, "--alpha must be in [0, 1]");

    const auto pred = build_predictor(train, x, cfg, how);
    const std::string provenance = "# possic predict data=" + df.data + " x=" + x_text + " psi=" +
                                   (df.psi.empty() ? "default" : df.psi) + " adjust=" + std::string(to_string(how)) +
                                   " alpha=" + format_alpha_list(alphas) + " seed=" + std::to_string(seed) + "\n";

    std::optional<std::filesystem::path> contour_path, sets_path;
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        contour_path = std::filesystem::path(*out_dir) / "contour.csv";
        sets_path = std::filesystem::path(*out_dir) / "sets.csv";
    }

    {
        Output o(out, contour_path);
        *o << provenance;
        if (train.space.is_finite()) {
            *o << "candidate,plausibility,exact,lower\n";
            for (const auto& pt : pred.contour.points) {
                const auto single = label_assertion({label_of(pt.candidate)});
                *o << io::quote_field(candidate_text(pt.candidate, train.space)) << ','
                   << io::format_double(to_double(pt.plausibility)) << ',' << rational_text(pt.plausibility) << ','
                   << io::format_double(to_double(lower_prob(pred, single))) << '\n';
            }
        } else {
            *o << "candidate,plausibility,exact\n";
            for (const auto& pt : pred.contour.points) {
                *o << candidate_text(pt.candidate, train.space) << ',' << io::format_double(to_double(pt.plausibility))
                   << ',' << rational_text(pt.plausibility) << '\n';
            }
        }
    }
    if (!out_dir) out << '\n';
    {
        Output o(out, sets_path);
        if (out_dir) *o << provenance;
        *o << "alpha,set,size\n";
        for (double a : alphas) {
            const auto set = prediction_set(pred, a);
            *o << io::format_double(a) << ',' << io::quote_field(set_text(set, train.space)) << ','
               << io::format_double(set.size()) << '\n';
            if (set.empty()) {
                err << "warning: prediction set at alpha=" << io::format_double(a)
                    << " is empty; no response is plausible above that level (try --adjust stretch)\n";
            }
        }
    }
    return exit_ok;
}

inline int cmd_coverage(const DataFlags& df, const std::optional<std::string>& test_path, std::size_t splits,
                        std::vector<std::string> adjust_texts, std::vector<double> alphas, std::uint64_t seed,
                        std::size_t threads, const std::optional<std::string>& out_path, std::ostream& out) {
    const Dataset data = df.load();
    const auto cfg = df.config(data, 1);
    if (alphas.empty()) alphas = {0.05};
    if (adjust_texts.empty()) {
        adjust_texts = data.space.is_finite() ? std::vector<std::string>{"condition", "stretch"}
                                              : std::vector<std::string>{"none"};
    }
    std::vector<Adjustment> adjustments;
    for (const auto& a : adjust_texts) adjustments.push_back(parse_adjustment(a));
    POSSIC_REQUIRE(splits >= 1, ErrorKind::bad_flags, "--splits must be at least 1");

    Output o(out, out_path ? std::optional<std::filesystem::path>(*out_path) : std::nullopt);
    *o << "# possic coverage data=" << df.data << " psi=" << (df.psi.empty() ? "default" : df.psi)
       << " alpha=" << format_alpha_list(alphas) << " splits=" << splits << " seed=" << seed
       << (test_path ? " test=" + *test_path : std::string{}) << "\n";
    *o << "split,adjust,alpha,n_test,coverage,mean_size\n";
    auto emit = [&](std::size_t split_index, const std::vector<CoverageReport>& reports) {
        for (const auto& r : reports) {
            *o << split_index << ',' << to_string(r.adjustment) << ',' << io::format_double(r.alpha) << ','
               << r.n_test << ',' << io::format_double(r.empirical_coverage) << ','
               << io::format_double(r.mean_size) << '\n';
        }
    };
    if (test_path) {
        io::CsvOptions opts;
        if (data.space.is_finite()) {
            opts.task = io::Task::classification;
            opts.alphabet = data.space.labels();
        } else {
            opts.task = io::Task::regression;
        }
        const Dataset test = io::read_dataset_csv(std::filesystem::path(*test_path), opts);
        emit(0, evaluate_coverage(data, test, cfg, adjustments, alphas, threads));
        return exit_ok;
    }
    for (std::size_t s = 0; s < splits; ++s) {
        auto [train, test] = half_split(data, seed, s);
        emit(s, evaluate_coverage(train, test, cfg, adjustments, alphas, threads));
    }
    return exit_ok;
}

struct DiagnoseFlags {
    std::string gen = "unif";
    std::size_t n = 20;
    std::size_t reps = 2000;
    std::size_t alpha_steps = 100;
    std::string adjust = "none";
    std::string psi;
    std::optional<std::string> out_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--gen", gen, "unif[:LO:HI] | sin3[:DF:SCALE] | class3[:ROUNDING]");
        cmd->add_option("--n", n, "training sample size");
        cmd->add_option("--reps", reps, "Monte Carlo replicates");
        cmd->add_option("--alpha-steps", alpha_steps, "alpha grid 1/S, 2/S, ..., 1");
        cmd->add_option("--adjust", adjust, "none | condition | stretch (classification)");
        cmd->add_option("--psi", psi, "nn | knn:K | ridge:LAMBDA");
        cmd->add_option("--out", out_path, "write CSV here instead of stdout");
    }
};

inline void check_diagnose_flags(const DiagnoseFlags& f) {
    POSSIC_REQUIRE(f.reps >= 1, ErrorKind::bad_flags, "--reps must be at least 1");
    POSSIC_REQUIRE(f.alpha_steps >= 1, ErrorKind::bad_flags, "--alpha-steps must be at least 1");
}

inline void write_curve(std::ostream& o, const std::vector<double>& alphas, const std::vector<double>& est,
                        const std::vector<double>& se) {
    o << "alpha,estimate,stderr\n";
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        o << io::format_double(alphas[i]) << ',' << io::format_double(est[i]) << ',' << io::format_double(se[i])
          << '\n';
    }
}

inline int cmd_diagnose_validity(const DiagnoseFlags& f, std::uint64_t seed, std::size_t threads, std::ostream& out) {
    check_diagnose_flags(f);
    const auto gen = parse_generator(f.gen, seed);
    const bool finite = generator_space(gen).is_finite();
    const auto cfg = parse_psi(f.psi, finite, false);
    const auto how = parse_adjustment(f.adjust);
    const auto alphas = alpha_grid(f.alpha_steps);
    const auto report = validity_sweep(gen, f.n, cfg, how, f.reps, alphas, threads);

    Output o(out, f.out_path ? std::optional<std::filesystem::path>(*f.out_path) : std::nullopt);
    *o << "# possic diagnose validity gen=" << f.gen << " n=" << f.n << " reps=" << f.reps
       << " psi=" << (f.psi.empty() ? "default" : f.psi) << " adjust=" << to_string(how)
       << " alpha-steps=" << f.alpha_steps << " seed=" << seed << "\n";
    if (f.n >= 1) {
        const auto counts = report.level_counts();
        const auto gof = chi_square_uniform(counts);
        *o << "# chi-square vs uniform levels: statistic=" << io::format_double(gof.statistic) << " df=" << gof.df
           << " p=" << io::format_double(gof.p_value) << "\n";
    }
    write_curve(*o, report.alphas, report.cdf, report.stderrs);
    return exit_ok;
}

inline int cmd_diagnose_fcurve(const DiagnoseFlags& f, const std::string& predictor_text,
                               const std::string& assertion_text, const std::string& hyper_text, std::uint64_t seed,
                               std::size_t threads, std::ostream& out) {
    check_diagnose_flags(f);
    const auto gen = parse_generator(f.gen, seed);
    const auto space = generator_space(gen);
    const auto assertion = parse_assertion(assertion_text, space);
    FPredictor predictor;
    if (predictor_text == "bayes-t") {
        POSSIC_REQUIRE(space.is_continuous(), ErrorKind::bad_flags, "bayes-t needs a real-valued generator");
        NigHyper h;
        if (!hyper_text.empty()) {
            auto parts = split(hyper_text, ',');
            POSSIC_REQUIRE(parts.size() == 4, ErrorKind::bad_flags, "--hyper expects m0,k0,a0,b0");
            h = {parse_number(parts[0], "--hyper"), parse_number(parts[1], "--hyper"),
                 parse_number(parts[2], "--hyper"), parse_number(parts[3], "--hyper")};
            POSSIC_REQUIRE(h.k0 > 0 && h.a0 > 0 && h.b0 > 0, ErrorKind::bad_flags, "k0, a0, b0 must be positive");
        }
        predictor = BayesTBaseline{h};
    } else if (predictor_text == "conformal") {
        predictor = ConformalSpec{parse_psi(f.psi, space.is_finite(), false), parse_adjustment(f.adjust)};
    } else {
        throw Error(ErrorKind::bad_flags, "--predictor must be conformal or bayes-t");
    }
    const auto alphas = alpha_grid(f.alpha_steps);
    const auto curve = f_curve(gen, f.n, predictor, assertion, f.reps, alphas, threads);

    Output o(out, f.out_path ? std::optional<std::filesystem::path>(*f.out_path) : std::nullopt);
    *o << "# possic diagnose fcurve predictor=" << curve.predictor << " gen=" << f.gen << " n=" << f.n
       << " reps=" << f.reps << " assertion=" << assertion_text << " alpha-steps=" << f.alpha_steps
       << " seed=" << seed << "\n";
    write_curve(*o, curve.alphas, curve.estimates, curve.stderrs);
    return exit_ok;
}

inline int cmd_datasets_list(std::ostream& out) {
    out << "name,description\n";
    for (const auto& b : io::builtin_datasets()) out << b.name << ',' << io::quote_field(b.description) << '\n';
    return exit_ok;
}

// ============================================================================
// Entry point
// ============================================================================

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"possic: valid consonant predictors from conformal transducers"};
    app.require_subcommand(1);
    std::optional<std::uint64_t> seed_flag;
    std::size_t threads = 1;
    app.add_option("--seed", seed_flag, "RNG seed (overrides POSSIC_SEED)");
    app.add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* predict = app.add_subcommand("predict", "contour and prediction sets for one query point");
    DataFlags predict_data;
    predict_data.attach(predict);
    std::string x_text;
    std::string predict_adjust = "none";
    std::vector<double> predict_alphas;
    std::optional<std::string> out_dir;
    predict->add_option("--x", x_text, "query features, comma separated")->required();
    predict->add_option("--adjust", predict_adjust, "none | condition | stretch");
    predict->add_option("--alpha", predict_alphas, "set level(s)");
    predict->add_option("--out-dir", out_dir, "write contour.csv and sets.csv here");

    auto* coverage = app.add_subcommand("coverage", "empirical coverage of prediction sets");
    DataFlags coverage_data;
    coverage_data.attach(coverage);
    std::optional<std::string> test_path, coverage_out;
    std::size_t splits = 1;
    std::vector<std::string> coverage_adjust;
    std::vector<double> coverage_alphas;
    coverage->add_option("--test", test_path, "test CSV (default: random half/half splits)");
    coverage->add_option("--splits", splits, "number of random half/half splits");
    coverage->add_option("--adjust", coverage_adjust, "adjustment(s)");
    coverage->add_option("--alpha", coverage_alphas, "set level(s)");
    coverage->add_option("--out", coverage_out, "write CSV here instead of stdout");

    auto* diagnose = app.add_subcommand("diagnose", "Monte Carlo validity diagnostics");
    diagnose->require_subcommand(1);
    auto* validity = diagnose->add_subcommand("validity", "empirical CDF of pi(Y_{n+1})");
    DiagnoseFlags validity_flags;
    validity_flags.attach(validity);
    auto* fcurve = diagnose->add_subcommand("fcurve", "alpha -> P{upper(A) <= alpha, Y in A}");
    DiagnoseFlags fcurve_flags;
    fcurve_flags.reps = 10000;
    fcurve_flags.n = 5;
    fcurve_flags.gen = "unif:-5:5";
    fcurve_flags.attach(fcurve);
    std::string predictor_text = "conformal";
    std::string assertion_text;
    std::string hyper_text;
    fcurve->add_option("--predictor", predictor_text, "conformal | bayes-t");
    fcurve->add_option("--assertion", assertion_text, "LO:HI[,LO:HI] or LABEL;LABEL")->required();
    fcurve->add_option("--hyper", hyper_text, "bayes-t prior m0,k0,a0,b0 (default 0,1,1,1)");

    auto* datasets = app.add_subcommand("datasets", "builtin datasets");
    datasets->require_subcommand(1);
    auto* list = datasets->add_subcommand("list", "list builtin datasets");

    std::vector<const char*> argv{"possic"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error[bad-flags]: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        const std::uint64_t seed = resolve_seed(seed_flag);
        if (predict->parsed()) {
            return cmd_predict(predict_data, x_text, predict_adjust, predict_alphas, out_dir, seed, threads, out, err);
        }
        if (coverage->parsed()) {
            return cmd_coverage(coverage_data, test_path, splits, coverage_adjust, coverage_alphas, seed, threads,
                                coverage_out, out);
        }
        if (validity->parsed()) return cmd_diagnose_validity(validity_flags, seed, threads, out);
        if (fcurve->parsed()) {
            return cmd_diagnose_fcurve(fcurve_flags, predictor_text, assertion_text, hyper_text, seed, threads, out);
        }
        if (list->parsed()) return cmd_datasets_list(out);
    } catch (const Error& e) {
        const auto code = exit_code_for(e.kind());
        err << "error[" << category_for(code) << "]: " << e.what() << "\n";
        return code;
    } catch (const std::exception& e) {
        err << "error[math-error]: " << e.what() << "\n";
        return exit_numeric;
    }
    return exit_usage;
}

}  // namespace possic::cli
