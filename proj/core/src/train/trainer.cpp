#include "rgsl/train/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "rgsl/autodiff/ops.hpp"
#include "rgsl/error.hpp"
#include "rgsl/random.hpp"

namespace rgsl::train {

namespace {

void check_compatible(const strgc::RGSLModel& model, const data::WindowSet& set) {
    const auto& cfg = model.config();
    if (static_cast<std::int64_t>(set.nodes) != cfg.n_nodes ||
        static_cast<std::int64_t>(set.features) != cfg.n_features ||
        static_cast<std::int64_t>(set.out_features) != cfg.n_out_features ||
        static_cast<std::int64_t>(set.history_len) != cfg.history_len ||
        static_cast<std::int64_t>(set.horizon) != cfg.horizon) {
        throw Error(ErrorCode::ConfigMismatch, "window set shape does not match the model config");
    }
    if (set.count == 0) throw Error(ErrorCode::SeriesTooShort, "window set is empty");
}

std::vector<std::vector<std::size_t>> batches_of(std::vector<std::size_t> order, std::size_t batch_size) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
        const std::size_t end = std::min(order.size(), begin + batch_size);
        out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(begin),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return out;
}

}  // namespace

ad::Var batch_loss(strgc::RGSLModel& model, const data::Batch& batch, const strgc::ForwardOptions& options) {
    const auto out = model.forward(batch, options);
    return ad::mean_abs_error(out.prediction, batch.targets);
}

EvalOutcome evaluate(strgc::RGSLModel& model, const data::WindowSet& set, std::size_t repeats,
                     std::uint64_t stream_tag) {
    check_compatible(model, set);
    if (repeats == 0) throw Error(ErrorCode::BadConfigValue, "repeats must be >= 1");
    const auto& cfg = model.config();
    ad::NoGradGuard no_grad;

    std::vector<std::size_t> order(set.count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto groups = batches_of(order, static_cast<std::size_t>(cfg.batch_size));
    std::vector<data::Batch> batches;
    batches.reserve(groups.size());
    for (const auto& g : groups) batches.push_back(data::make_batch(set, g));

    const auto mode = model.sample_mode(true);
    std::vector<MetricsReport> reports;
    double alpha_sum = 0.0;
    for (std::size_t r = 0; r < repeats; ++r) {
        std::vector<double> pred;
        std::vector<double> target;
        pred.reserve(set.targets.size());
        target.reserve(set.targets.size());
        for (std::size_t b = 0; b < batches.size(); ++b) {
            RngStream rng{cfg.seed, static_cast<std::uint64_t>(StreamPurpose::EvalGraph), stream_tag, r, b};
            strgc::ForwardOptions options;
            options.mode = mode;
            options.rng = &rng;
            const auto out = model.forward(batches[b], options);
            alpha_sum += out.mean_alpha_explicit / static_cast<double>(batches.size() * repeats);
            const auto p = data::unpack_forecast(out.prediction.value(), batches[b].size, set.horizon, set.nodes,
                                                 set.out_features);
            const auto t = data::unpack_forecast(batches[b].targets, batches[b].size, set.horizon, set.nodes,
                                                 set.out_features);
            pred.insert(pred.end(), p.begin(), p.end());
            target.insert(target.end(), t.begin(), t.end());
        }
        reports.push_back(compute_metrics(pred, target, set.horizon, set.nodes * set.out_features,
                                          cfg.mape_mask_threshold));
    }
    return {aggregate_repeats(reports), alpha_sum};
}

Matrix predict(strgc::RGSLModel& model, const data::Batch& batch, std::uint64_t stream_tag) {
    ad::NoGradGuard no_grad;
    RngStream rng{model.config().seed, static_cast<std::uint64_t>(StreamPurpose::EvalGraph), stream_tag};
    strgc::ForwardOptions options;
    options.mode = model.sample_mode(true);
    options.rng = &rng;
    return model.forward(batch, options).prediction.value();
}

FitResult fit(strgc::RGSLModel& model, const data::WindowSet& train_set, const data::WindowSet& val_set,
              const FitOptions& options) {
    check_compatible(model, train_set);
    check_compatible(model, val_set);
    const auto& cfg = model.config();
    Adam optimizer(model.parameters(), cfg.learning_rate, cfg.grad_clip);
    const auto val_repeats = static_cast<std::size_t>(cfg.train_eval_repeats);

    FitResult result;
    result.initial_val_mae = evaluate(model, val_set, val_repeats, 0).report.mae;
    double best = std::numeric_limits<double>::infinity();
    std::int64_t stale = 0;
    std::int64_t step = 0;
    const auto train_mode = model.sample_mode(false);

    for (std::int64_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        std::vector<std::size_t> order(train_set.count);
        std::iota(order.begin(), order.end(), std::size_t{0});
        RngStream shuffle{cfg.seed, static_cast<std::uint64_t>(StreamPurpose::Shuffle),
                          static_cast<std::uint64_t>(epoch)};
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle.below(i)]);

        double loss_sum = 0.0;
        std::size_t loss_count = 0;
        bool step_limit = false;
        for (const auto& group : batches_of(order, static_cast<std::size_t>(cfg.batch_size))) {
            const data::Batch batch = data::make_batch(train_set, group);
            RngStream rng{cfg.seed, static_cast<std::uint64_t>(StreamPurpose::TrainGraph),
                          static_cast<std::uint64_t>(step)};
            strgc::ForwardOptions fwd;
            fwd.mode = train_mode;
            fwd.rng = &rng;
            optimizer.zero_grad();
            const ad::Var loss = batch_loss(model, batch, fwd);
            const double value = loss.value()(0, 0);
            if (!std::isfinite(value)) {
                throw Error(ErrorCode::DivergedLoss, "non-finite loss at epoch " + std::to_string(epoch) +
                                                         ", step " + std::to_string(step));
            }
            ad::backward(loss);
            optimizer.step();
            loss_sum += value;
            ++loss_count;
            ++step;
            if (cfg.max_steps > 0 && step >= cfg.max_steps) {
                step_limit = true;
                break;
            }
        }

        const auto val = evaluate(model, val_set, val_repeats, 0);
        HistoryRow row;
        row.epoch = epoch;
        row.train_loss = loss_sum / static_cast<double>(std::max<std::size_t>(loss_count, 1));
        row.val_mae = val.report.mae;
        row.val_rmse = val.report.rmse;
        row.val_mape = val.report.mape;
        row.graph_density = rgg::expected_density(model.edge_logits());
        row.mean_alpha0 = val.mean_alpha0;
        result.history.push_back(row);
        if (options.on_epoch) options.on_epoch(row);

        if (row.val_mae < best) {
            best = row.val_mae;
            stale = 0;
            result.best = capture_checkpoint(model, &optimizer, epoch, best);
        } else if (++stale >= cfg.early_stop_patience) {
            result.early_stopped = true;
            break;
        }
        if (step_limit) break;
    }
    result.steps = step;
    load_parameters(model, result.best.parameters);
    return result;
}

void write_history_csv(const std::filesystem::path& path, const std::vector<HistoryRow>& history) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << "epoch,train_loss,val_mae,val_rmse,val_mape,graph_density,mean_alpha0\n";
    char line[256];
    for (const auto& r : history) {
        std::snprintf(line, sizeof line, "%lld,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                      static_cast<long long>(r.epoch), r.train_loss, r.val_mae, r.val_rmse, r.val_mape,
                      r.graph_density, r.mean_alpha0);
        out << line;
    }
}

}  // namespace rgsl::train
