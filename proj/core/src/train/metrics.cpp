#include "rgsl/train/metrics.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "rgsl/error.hpp"

namespace rgsl::train {

double mae_loss(std::span<const double> pred, std::span<const double> target) {
    if (pred.size() != target.size()) throw Error(ErrorCode::ShapeMismatch, "pred/target sizes differ");
    if (pred.empty()) throw Error(ErrorCode::ShapeMismatch, "empty prediction");
    double total = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) total += std::abs(pred[i] - target[i]);
    return total / static_cast<double>(pred.size());
}

MetricsReport compute_metrics(std::span<const double> pred, std::span<const double> target,
                              std::size_t horizon, std::size_t inner, double mask_threshold) {
    if (pred.size() != target.size()) throw Error(ErrorCode::ShapeMismatch, "pred/target sizes differ");
    if (horizon == 0 || inner == 0 || pred.empty() || pred.size() % (horizon * inner) != 0) {
        throw Error(ErrorCode::ShapeMismatch, "arrays are not shaped (B, horizon, inner)");
    }
    const std::size_t batch = pred.size() / (horizon * inner);

    struct Acc {
        double abs = 0.0, sq = 0.0, pct = 0.0;
        std::size_t n = 0, masked_n = 0;
    };
    std::vector<Acc> per(horizon);
    for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t k = 0; k < horizon; ++k)
            for (std::size_t i = 0; i < inner; ++i) {
                const std::size_t idx = (b * horizon + k) * inner + i;
                const double e = pred[idx] - target[idx];
                Acc& a = per[k];
                a.abs += std::abs(e);
                a.sq += e * e;
                ++a.n;
                if (std::abs(target[idx]) >= mask_threshold) {
                    a.pct += std::abs(e / target[idx]);
                    ++a.masked_n;
                }
            }

    MetricsReport report;
    Acc total;
    for (const Acc& a : per) {
        HorizonMetrics h;
        h.mae = a.abs / static_cast<double>(a.n);
        h.rmse = std::sqrt(a.sq / static_cast<double>(a.n));
        h.mape = a.masked_n > 0 ? 100.0 * a.pct / static_cast<double>(a.masked_n)
                                : std::numeric_limits<double>::quiet_NaN();
        report.per_horizon.push_back(h);
        total.abs += a.abs;
        total.sq += a.sq;
        total.pct += a.pct;
        total.n += a.n;
        total.masked_n += a.masked_n;
    }
    if (total.masked_n == 0) throw Error(ErrorCode::AllMasked, "every target is below the MAPE mask threshold");
    report.mae = total.abs / static_cast<double>(total.n);
    report.rmse = std::sqrt(total.sq / static_cast<double>(total.n));
    report.mape = 100.0 * total.pct / static_cast<double>(total.masked_n);
    return report;
}

MetricsReport aggregate_repeats(const std::vector<MetricsReport>& repeats) {
    if (repeats.empty()) throw Error(ErrorCode::ShapeMismatch, "no repeats to aggregate");
    const double count = static_cast<double>(repeats.size());
    MetricsReport out;
    out.eval_repeats = repeats.size();
    out.per_horizon.assign(repeats.front().per_horizon.size(), {});
    for (const auto& r : repeats) {
        out.mae += r.mae / count;
        out.rmse += r.rmse / count;
        out.mape += r.mape / count;
        for (std::size_t k = 0; k < out.per_horizon.size(); ++k) {
            out.per_horizon[k].mae += r.per_horizon[k].mae / count;
            out.per_horizon[k].rmse += r.per_horizon[k].rmse / count;
            out.per_horizon[k].mape += r.per_horizon[k].mape / count;
        }
    }
    for (const auto& r : repeats) {
        out.mae_std += (r.mae - out.mae) * (r.mae - out.mae) / count;
        out.rmse_std += (r.rmse - out.rmse) * (r.rmse - out.rmse) / count;
        out.mape_std += (r.mape - out.mape) * (r.mape - out.mape) / count;
    }
    out.mae_std = std::sqrt(out.mae_std);
    out.rmse_std = std::sqrt(out.rmse_std);
    out.mape_std = std::sqrt(out.mape_std);
    return out;
}

namespace {

nlohmann::json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

double from_json(const nlohmann::json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

}  // namespace

void write_metrics_json(const std::filesystem::path& path, const MetricsReport& report) {
    nlohmann::json doc;
    doc["mae"] = number_or_null(report.mae);
    doc["rmse"] = number_or_null(report.rmse);
    doc["mape"] = number_or_null(report.mape);
    doc["eval_repeats"] = report.eval_repeats;
    doc["metric_std_over_repeats"] = {{"mae", number_or_null(report.mae_std)},
                                      {"rmse", number_or_null(report.rmse_std)},
                                      {"mape", number_or_null(report.mape_std)}};
    doc["per_horizon"] = nlohmann::json::array();
    for (std::size_t k = 0; k < report.per_horizon.size(); ++k) {
        const auto& h = report.per_horizon[k];
        doc["per_horizon"].push_back({{"horizon", k + 1},
                                      {"mae", number_or_null(h.mae)},
                                      {"rmse", number_or_null(h.rmse)},
                                      {"mape", number_or_null(h.mape)}});
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

MetricsReport read_metrics_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, path.string());
    MetricsReport r;
    try {
        const auto doc = nlohmann::json::parse(in);
        r.mae = from_json(doc.at("mae"));
        r.rmse = from_json(doc.at("rmse"));
        r.mape = from_json(doc.at("mape"));
        r.eval_repeats = doc.at("eval_repeats").get<std::size_t>();
        const auto& s = doc.at("metric_std_over_repeats");
        r.mae_std = from_json(s.at("mae"));
        r.rmse_std = from_json(s.at("rmse"));
        r.mape_std = from_json(s.at("mape"));
        for (const auto& h : doc.at("per_horizon")) {
            r.per_horizon.push_back({from_json(h.at("mae")), from_json(h.at("rmse")), from_json(h.at("mape"))});
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BadFormat, path.string() + ": " + e.what());
    }
    return r;
}

}  // namespace rgsl::train
