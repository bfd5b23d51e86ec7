#include "cli/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "cli/artifacts.hpp"
#include "rgsl/data/explicit_graph.hpp"
#include "rgsl/data/npz.hpp"
#include "rgsl/data/scaler.hpp"
#include "rgsl/data/series.hpp"
#include "rgsl/data/synth.hpp"
#include "rgsl/error.hpp"
#include "rgsl/graph_io.hpp"
#include "rgsl/png.hpp"
#include "rgsl/rgg/rgg.hpp"
#include "rgsl/train/trainer.hpp"

namespace rgsl::cli {

namespace fs = std::filesystem;

namespace {

/// --out when given, otherwise $RGSL_OUT/<fallback>.
fs::path resolve_out(const fs::path& out, const std::string& fallback) {
    if (!out.empty()) return out;
    if (const char* root = std::getenv("RGSL_OUT"); root != nullptr && *root != '\0') return fs::path(root) / fallback;
    throw Error(ErrorCode::BadConfigValue, "no --out given and RGSL_OUT is not set");
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
}

SeriesTensor keep_features(const SeriesTensor& s, std::size_t count) {
    if (count == 0 || count > s.features()) {
        throw Error(ErrorCode::BadConfigValue, "--features must be in [1, " + std::to_string(s.features()) + "]");
    }
    if (count == s.features()) return s;
    std::vector<double> v;
    v.reserve(s.timestamps() * s.nodes() * count);
    for (std::size_t t = 0; t < s.timestamps(); ++t)
        for (std::size_t n = 0; n < s.nodes(); ++n)
            for (std::size_t f = 0; f < count; ++f) v.push_back(s.at(t, n, f));
    std::vector<std::string> names(s.feature_names().begin(),
                                   s.feature_names().begin() + static_cast<std::ptrdiff_t>(count));
    return SeriesTensor(s.timestamps(), s.nodes(), count, std::move(v), s.timestamps_per_day(), std::move(names));
}

rgsl::RGSLConfig config_for(const fs::path& path) {
    return path.empty() ? validate_config(RGSLConfig{}) : load_config_file(path);
}

data::Split split_from(const std::string& name) {
    if (name == "train") return data::Split::Train;
    if (name == "val") return data::Split::Val;
    if (name == "test") return data::Split::Test;
    throw Error(ErrorCode::BadConfigValue, "unknown split '" + name + "'");
}

data::WindowSet windows_for(const PreparedData& p, const RGSLConfig& cfg, data::Split split,
                            const ScalerStats& scaler) {
    const auto range = p.splits[static_cast<std::size_t>(split)];
    return data::make_windows(p.series, scaler, static_cast<std::size_t>(cfg.history_len),
                              static_cast<std::size_t>(cfg.horizon), range,
                              static_cast<std::size_t>(cfg.n_out_features));
}

void check_data_matches(const RGSLConfig& cfg, const SeriesTensor& series) {
    if (static_cast<std::int64_t>(series.features()) != cfg.n_features) {
        throw Error(ErrorCode::ConfigMismatch, "series has " + std::to_string(series.features()) +
                                                   " features, config expects " + std::to_string(cfg.n_features));
    }
    if (cfg.n_nodes != 0 && static_cast<std::int64_t>(series.nodes()) != cfg.n_nodes) {
        throw Error(ErrorCode::ConfigMismatch, "series has " + std::to_string(series.nodes()) +
                                                   " nodes, model expects " + std::to_string(cfg.n_nodes));
    }
}

void print_report(std::ostream& log, const char* label, const train::MetricsReport& r) {
    char line[256];
    std::snprintf(line, sizeof line, "%s MAE %.4f (std %.4f)  RMSE %.4f (std %.4f)  MAPE %.3f%% (std %.3f) over %zu repeats\n",
                  label, r.mae, r.mae_std, r.rmse, r.rmse_std, r.mape, r.mape_std, r.eval_repeats);
    log << line;
}

}  // namespace

SyntheticSpec parse_synthetic_spec(const std::string& text) {
    SyntheticSpec spec;
    std::string normalized = text;
    for (char& c : normalized)
        if (c == ',') c = ' ';
    std::istringstream in(normalized);
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::BadConfigValue, "synthetic spec token '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        try {
            if (key == "n") {
                spec.nodes = std::stoull(value);
            } else if (key == "T") {
                spec.timestamps = std::stoull(value);
            } else if (key == "seed") {
                spec.seed = std::stoull(value);
            } else if (key == "noise") {
                spec.noise = std::stod(value);
            } else {
                throw Error(ErrorCode::BadConfigValue, "unknown synthetic key '" + key + "'");
            }
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::BadConfigValue, "bad synthetic value '" + token + "'");
        }
    }
    return spec;
}

void cmd_prepare(const PrepareOptions& o, std::ostream& log) {
    const fs::path out = resolve_out(o.out, "prepared");
    const data::SplitRatios ratios;

    SeriesTensor series;
    ExplicitGraph graph;
    std::optional<ExplicitGraph> truth;
    if (o.synthetic) {
        const auto spec = parse_synthetic_spec(*o.synthetic);
        auto ds = data::synth_dataset(spec.nodes, data::ring_graph(spec.nodes), spec.timestamps, spec.noise, spec.seed);
        series = std::move(ds.series);
        truth = std::move(ds.true_graph);
        // No prior: the coupling has to be found by the learned graph.
        graph.adjacency = Matrix::Zero(static_cast<Eigen::Index>(spec.nodes), static_cast<Eigen::Index>(spec.nodes));
        graph.source = "synthetic (empty prior)";
    } else {
        if (o.data.empty()) throw Error(ErrorCode::BadConfigValue, "prepare needs --data or --synthetic");
        if (o.distances.empty()) throw Error(ErrorCode::BadConfigValue, "prepare needs --distances with --data");
        if (!fs::exists(o.distances)) throw Error(ErrorCode::FileNotFound, o.distances.string());
        series = keep_features(data::load_series_archive(o.data, o.per_day), o.features);
        if (o.first_nodes > 0) series = series.first_nodes(o.first_nodes);
        if (o.first_days > 0) {
            series = series.slice_time(0, std::min(series.timestamps(), o.first_days * series.timestamps_per_day()));
        }
        data::GraphBuildOptions gopts;
        gopts.rule = data::edge_rule_from_string(o.rule);
        gopts.threshold = o.threshold;
        gopts.sigma = o.sigma;
        auto edges = data::read_distance_csv(o.distances);
        if (o.first_nodes > 0) {
            const auto keep = static_cast<long long>(series.nodes());
            std::erase_if(edges, [keep](const data::DistanceEdge& e) { return e.from >= keep || e.to >= keep; });
        }
        auto built = data::build_explicit_graph(edges, series.nodes(), gopts, o.distances.string());
        if (built.warning) log << "warning: " << *built.warning << '\n';
        graph = std::move(built.graph);
    }

    ensure_dir(out);
    RunManifest manifest{"prepare", "", "", dataset_fingerprint(series), 0, fs::absolute(out).string(), utc_timestamp()};
    write_manifest(out, manifest);

    const auto ranges = data::split_ranges(series.timestamps(), ratios);
    const auto scaler = data::fit_scaler(series, ranges[0].begin, ranges[0].end);
    data::write_series_archive(out / kSeriesFile, series);
    write_matrix_csv(out / kExplicitGraphFile, graph.adjacency);
    data::save_scaler(out / kScalerFile, scaler);
    write_splits(out / kSplitsFile, series.timestamps(), ratios);
    if (truth) write_matrix_csv(out / kTrueGraphFile, truth->adjacency);
    log << "prepared T=" << series.timestamps() << " N=" << series.nodes() << " F=" << series.features()
        << " into " << out.string() << '\n';
}

void cmd_train(const TrainOptions& o, std::ostream& log) {
    const fs::path out = resolve_out(o.out, "train");
    RGSLConfig cfg = config_for(o.config);
    if (o.seed) cfg.seed = *o.seed;
    const PreparedData p = load_prepared(o.prepared);
    check_data_matches(cfg, p.series);
    cfg.n_nodes = static_cast<std::int64_t>(p.series.nodes());

    ensure_dir(out);
    write_manifest(out, {"train", o.config.string(), config_hash(cfg), dataset_fingerprint(p.series), cfg.seed,
                         fs::absolute(out).string(), utc_timestamp()});
    {
        std::ofstream snapshot(out / "config.json", std::ios::trunc);
        snapshot << serialize_config(cfg) << '\n';
    }

    const auto train_set = windows_for(p, cfg, data::Split::Train, p.scaler);
    const auto val_set = windows_for(p, cfg, data::Split::Val, p.scaler);
    strgc::RGSLModel model(cfg, p.explicit_graph, p.scaler);

    train::FitOptions fit_options;
    std::vector<train::HistoryRow> rows;
    fit_options.on_epoch = [&](const train::HistoryRow& r) {
        rows.push_back(r);
        // Keep partial progress on disk for long runs.
        train::write_history_csv(out / kHistoryFile, rows);
        if (!o.quiet) {
            char line[200];
            std::snprintf(line, sizeof line, "epoch %lld  loss %.4f  val MAE %.4f  density %.3f  alpha0 %.3f\n",
                          static_cast<long long>(r.epoch), r.train_loss, r.val_mae, r.graph_density, r.mean_alpha0);
            log << line << std::flush;
        }
    };
    const auto result = train::fit(model, train_set, val_set, fit_options);
    train::write_history_csv(out / kHistoryFile, result.history);
    train::save_checkpoint(out / kCheckpointFile, result.best);

    const auto val = train::evaluate(model, val_set, static_cast<std::size_t>(cfg.eval_repeats));
    train::write_metrics_json(out / "val_metrics.json", val.report);
    log << "initial val MAE " << result.initial_val_mae << ", best epoch " << result.best.epoch << ", "
        << result.steps << " steps" << (result.early_stopped ? " (early stop)" : "") << '\n';
    print_report(log, "val", val.report);
}

void cmd_eval(const EvalOptions& o, std::ostream& log) {
    const fs::path out = resolve_out(o.out, "eval");
    const auto ckpt = train::load_checkpoint(o.checkpoint);
    const PreparedData p = load_prepared(o.prepared);
    check_data_matches(ckpt.config, p.series);
    auto model = train::restore_model(ckpt);
    const std::size_t repeats = o.repeats.value_or(static_cast<std::size_t>(ckpt.config.eval_repeats));
    if (repeats == 0) throw Error(ErrorCode::BadConfigValue, "--repeats must be >= 1");

    ensure_dir(out);
    write_manifest(out, {"eval", o.checkpoint.string(), config_hash(ckpt.config), dataset_fingerprint(p.series),
                         ckpt.config.seed, fs::absolute(out).string(), utc_timestamp()});
    // The model's own scaler maps outputs back; inputs must use the same statistics.
    const auto set = windows_for(p, ckpt.config, split_from(o.split), model.scaler());
    const auto result = train::evaluate(model, set, repeats);
    train::write_metrics_json(out / (o.split + "_metrics.json"), result.report);
    print_report(log, o.split.c_str(), result.report);
}

void cmd_predict(const PredictOptions& o, std::ostream& log) {
    if (o.out.empty()) throw Error(ErrorCode::BadConfigValue, "predict needs --out");
    const auto ckpt = train::load_checkpoint(o.checkpoint);
    auto model = train::restore_model(ckpt);
    const auto& cfg = model.config();
    const auto input = data::load_series_archive(o.input);
    check_data_matches(cfg, input);
    const auto t_in = static_cast<std::size_t>(cfg.history_len);
    if (input.timestamps() < t_in) {
        throw Error(ErrorCode::SeriesTooShort, "input has " + std::to_string(input.timestamps()) +
                                                   " steps, the model needs " + std::to_string(t_in));
    }
    // The most recent T_in steps form the single input window.
    const auto window = input.slice_time(input.timestamps() - t_in, input.timestamps());
    data::Batch batch;
    batch.size = 1;
    const auto n = static_cast<Eigen::Index>(window.nodes());
    const auto f = static_cast<Eigen::Index>(window.features());
    for (std::size_t t = 0; t < t_in; ++t) {
        Matrix step(n, f);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < f; ++k)
                step(i, k) = model.scaler().apply(window.at(t, static_cast<std::size_t>(i), static_cast<std::size_t>(k)),
                                                  static_cast<std::size_t>(k));
        batch.steps.push_back(std::move(step));
    }
    const auto tau = static_cast<std::size_t>(cfg.horizon);
    const auto f_out = static_cast<std::size_t>(cfg.n_out_features);
    batch.targets = Matrix::Zero(n, static_cast<Eigen::Index>(tau * f_out));
    const Matrix rows = train::predict(model, batch);
    data::NpyArray forecast;
    forecast.shape = {tau, window.nodes(), f_out};
    forecast.values = data::unpack_forecast(rows, 1, tau, window.nodes(), f_out);

    if (o.out.has_parent_path()) ensure_dir(o.out.parent_path());
    data::write_npz(o.out, {{"forecast", forecast}});
    fs::path csv = o.out;
    csv.replace_extension(".csv");
    std::ofstream table(csv, std::ios::trunc);
    if (!table) throw Error(ErrorCode::IoError, "cannot write " + csv.string());
    table << "horizon,node,feature,value\n";
    char line[96];
    for (std::size_t k = 0; k < tau; ++k)
        for (std::size_t i = 0; i < window.nodes(); ++i)
            for (std::size_t ff = 0; ff < f_out; ++ff) {
                std::snprintf(line, sizeof line, "%zu,%zu,%zu,%.17g\n", k + 1, i, ff,
                              forecast.values[(k * window.nodes() + i) * f_out + ff]);
                table << line;
            }
    log << "wrote " << tau << "-step forecast for " << window.nodes() << " nodes to " << o.out.string() << '\n';
}

void cmd_export_graph(const ExportOptions& o, std::ostream& log) {
    if (o.what != "probs" && o.what != "sample" && o.what != "explicit") {
        throw Error(ErrorCode::UnknownWhat, "--what must be probs, sample or explicit (got '" + o.what + "')");
    }
    const fs::path out = o.out.empty() ? resolve_out(o.out, "graph") / ("graph_" + o.what + ".csv") : o.out;
    const auto ckpt = train::load_checkpoint(o.checkpoint);
    auto model = train::restore_model(ckpt);

    Matrix m;
    if (o.what == "explicit") {
        m = model.explicit_graph().adjacency;
    } else if (o.what == "probs") {
        m = rgg::edge_probabilities(model.edge_logits());
    } else {
        RngStream rng{ckpt.config.seed, static_cast<std::uint64_t>(StreamPurpose::EvalGraph), 3};
        const rgg::EdgeLogitMatrix logits{ad::constant(model.edge_logits())};
        m = rgg::sample_adjacency(logits, ckpt.config.temperature, model.sample_mode(true), rng).value();
    }

    if (out.has_parent_path()) ensure_dir(out.parent_path());
    const auto ext = out.extension().string();
    if (ext == ".png") {
        write_heatmap_png(out, m);
    } else if (ext == ".csv") {
        if (o.threshold) {
            write_edge_list_csv(out, m, *o.threshold);
        } else {
            write_matrix_csv(out, m);
        }
    } else {
        throw Error(ErrorCode::BadConfigValue, "--out must end in .csv or .png");
    }
    log << "wrote " << o.what << " graph (" << m.rows() << "x" << m.cols() << ") to " << out.string() << '\n';
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"RGSL spatio-temporal graph forecasting"};
    app.require_subcommand(1);

    PrepareOptions prep;
    auto* prepare = app.add_subcommand("prepare", "Clean a series archive, build the explicit graph, fit the scaler");
    prepare->add_option("--data", prep.data, "Series archive (.npz with a (T, N, F) 'data' array)");
    prepare->add_option("--distances", prep.distances, "Distance CSV with header from,to,cost");
    prepare->add_option("--rule", prep.rule, "gaussian-kernel or binary")->check(CLI::IsMember({"gaussian-kernel", "binary"}));
    prepare->add_option("--threshold", prep.threshold, "Kernel weights below this are dropped");
    prepare->add_option("--sigma", prep.sigma, "Kernel width (default: std of the costs)");
    prepare->add_option("--synthetic", prep.synthetic, "Generate a ring dataset instead, e.g. \"n=8 T=2000 seed=7\"");
    prepare->add_option("--features", prep.features, "Keep the first K features");
    prepare->add_option("--first-nodes", prep.first_nodes, "Keep the first K nodes");
    prepare->add_option("--first-days", prep.first_days, "Keep the first D days");
    prepare->add_option("--per-day", prep.per_day, "Timestamps per day");
    prepare->add_option("--out", prep.out, "Output directory");

    TrainOptions tr;
    auto* train_cmd = app.add_subcommand("train", "Fit a model on a prepared dataset");
    train_cmd->add_option("--prepared", tr.prepared, "Prepared dataset directory")->required();
    train_cmd->add_option("--config", tr.config, "JSON config");
    train_cmd->add_option("--out", tr.out, "Output directory");
    train_cmd->add_option("--seed", tr.seed, "Overrides the config seed");
    train_cmd->add_flag("--quiet", tr.quiet, "No per-epoch log lines");

    EvalOptions ev;
    auto* eval = app.add_subcommand("eval", "Metrics of a checkpoint on a prepared split");
    eval->add_option("--checkpoint", ev.checkpoint, "Checkpoint file")->required();
    eval->add_option("--prepared", ev.prepared, "Prepared dataset directory")->required();
    eval->add_option("--repeats", ev.repeats, "Evaluation passes with fresh graph samples");
    eval->add_option("--split", ev.split, "train, val or test")->check(CLI::IsMember({"train", "val", "test"}));
    eval->add_option("--out", ev.out, "Output directory");

    PredictOptions pr;
    auto* predict = app.add_subcommand("predict", "Forecast from the last history window of a series archive");
    predict->add_option("--checkpoint", pr.checkpoint, "Checkpoint file")->required();
    predict->add_option("--input", pr.input, "Series archive holding at least history_len steps")->required();
    predict->add_option("--out", pr.out, "Forecast archive (.npz); a .csv is written next to it")->required();

    ExportOptions ex;
    auto* exp = app.add_subcommand("export-graph", "Write a graph as CSV, edge list or PNG heatmap");
    exp->add_option("--checkpoint", ex.checkpoint, "Checkpoint file")->required();
    exp->add_option("--what", ex.what, "probs, sample or explicit");
    exp->add_option("--threshold", ex.threshold, "Write an i,j,weight edge list of entries >= this");
    exp->add_option("--out", ex.out, "Output .csv or .png");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? 0 : 2;
    }

    try {
        if (prepare->parsed()) cmd_prepare(prep, out);
        if (train_cmd->parsed()) cmd_train(tr, out);
        if (eval->parsed()) cmd_eval(ev, out);
        if (predict->parsed()) cmd_predict(pr, out);
        if (exp->parsed()) cmd_export_graph(ex, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: IoError: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> storage{"rgsl"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rgsl::cli
