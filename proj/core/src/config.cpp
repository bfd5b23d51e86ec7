#include "rgsl/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "rgsl/error.hpp"

namespace rgsl {

using nlohmann::json;

std::string_view to_string(MixMode mode) noexcept {
    switch (mode) {
        case MixMode::Attention: return "attention";
        case MixMode::ExplicitOnly: return "explicit_only";
        case MixMode::ImplicitOnly: return "implicit_only";
        case MixMode::HalfSum: return "half_sum";
        case MixMode::NoGraph: return "no_graph";
    }
    return "attention";
}

MixMode mix_mode_from_string(std::string_view name) {
    for (auto mode : {MixMode::Attention, MixMode::ExplicitOnly, MixMode::ImplicitOnly,
                      MixMode::HalfSum, MixMode::NoGraph}) {
        if (to_string(mode) == name) return mode;
    }
    throw Error(ErrorCode::BadConfigValue, "unknown mix_mode '" + std::string(name) + "'");
}

namespace {

void require_positive(std::int64_t value, const char* key) {
    if (value <= 0) {
        throw Error(ErrorCode::NonPositiveDimension,
                    std::string(key) + " must be positive, got " + std::to_string(value));
    }
}

// Single table driving both directions of (de)serialization.
template <typename Visitor>
void visit_fields(RGSLConfig& cfg, Visitor&& visit) {
    visit("n_nodes", cfg.n_nodes);
    visit("n_features", cfg.n_features);
    visit("n_out_features", cfg.n_out_features);
    visit("embed_dim", cfg.embed_dim);
    visit("hidden_dim", cfg.hidden_dim);
    visit("n_recurrent_layers", cfg.n_recurrent_layers);
    visit("history_len", cfg.history_len);
    visit("horizon", cfg.horizon);
    visit("temperature", cfg.temperature);
    visit("hard_sampling", cfg.hard_sampling);
    visit("deterministic_eval", cfg.deterministic_eval);
    visit("symmetrize_sample", cfg.symmetrize_sample);
    visit("learning_rate", cfg.learning_rate);
    visit("grad_clip", cfg.grad_clip);
    visit("batch_size", cfg.batch_size);
    visit("max_epochs", cfg.max_epochs);
    visit("max_steps", cfg.max_steps);
    visit("early_stop_patience", cfg.early_stop_patience);
    visit("eval_repeats", cfg.eval_repeats);
    visit("train_eval_repeats", cfg.train_eval_repeats);
    visit("embed_init_std", cfg.embed_init_std);
    visit("mix_mode", cfg.mix_mode);
    visit("seed", cfg.seed);
    visit("mape_mask_threshold", cfg.mape_mask_threshold);
}

}  // namespace

RGSLConfig validate_config(RGSLConfig cfg) {
    if (!(cfg.temperature > 0.0) || !std::isfinite(cfg.temperature)) {
        throw Error(ErrorCode::InvalidTemperature,
                    "temperature must be > 0, got " + std::to_string(cfg.temperature));
    }
    if (cfg.horizon == 0) throw Error(ErrorCode::HorizonZero, "horizon must be >= 1");
    if (cfg.n_nodes < 0) require_positive(cfg.n_nodes, "n_nodes");
    if (cfg.n_nodes == 1) {
        throw Error(ErrorCode::NonPositiveDimension, "n_nodes must be at least 2");
    }
    require_positive(cfg.n_features, "n_features");
    require_positive(cfg.n_out_features, "n_out_features");
    require_positive(cfg.embed_dim, "embed_dim");
    require_positive(cfg.hidden_dim, "hidden_dim");
    require_positive(cfg.n_recurrent_layers, "n_recurrent_layers");
    require_positive(cfg.history_len, "history_len");
    require_positive(cfg.horizon, "horizon");
    require_positive(cfg.batch_size, "batch_size");
    require_positive(cfg.max_epochs, "max_epochs");
    require_positive(cfg.early_stop_patience, "early_stop_patience");
    require_positive(cfg.eval_repeats, "eval_repeats");
    require_positive(cfg.train_eval_repeats, "train_eval_repeats");
    if (cfg.n_out_features > cfg.n_features) {
        throw Error(ErrorCode::BadConfigValue, "n_out_features exceeds n_features");
    }
    if (cfg.max_steps < 0) throw Error(ErrorCode::BadConfigValue, "max_steps must be >= 0");
    if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate)) {
        throw Error(ErrorCode::BadConfigValue, "learning_rate must be finite and >= 0");
    }
    if (!(cfg.grad_clip > 0.0)) throw Error(ErrorCode::BadConfigValue, "grad_clip must be > 0");
    if (!(cfg.embed_init_std >= 0.0)) {
        throw Error(ErrorCode::BadConfigValue, "embed_init_std must be >= 0");
    }
    if (!(cfg.mape_mask_threshold >= 0.0)) {
        throw Error(ErrorCode::BadConfigValue, "mape_mask_threshold must be >= 0");
    }
    mix_mode_from_string(cfg.mix_mode);
    return cfg;
}

RGSLConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::BadConfigValue, std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::BadConfigValue, "config must be a flat object");

    RGSLConfig cfg;
    std::size_t consumed = 0;
    visit_fields(cfg, [&](const char* key, auto& field) {
        auto it = doc.find(key);
        if (it == doc.end()) return;
        ++consumed;
        try {
            it->get_to(field);
        } catch (const json::exception&) {
            throw Error(ErrorCode::BadConfigValue, std::string("bad value for '") + key + "'");
        }
    });
    if (consumed != doc.size()) {
        RGSLConfig probe;
        for (const auto& [key, _] : doc.items()) {
            bool known = false;
            visit_fields(probe, [&](const char* name, auto&) { known = known || key == name; });
            if (!known) throw Error(ErrorCode::UnknownConfigKey, "unknown config key '" + key + "'");
        }
    }
    return cfg;
}

std::string serialize_config(const RGSLConfig& cfg) {
    json doc = json::object();
    auto copy = cfg;
    visit_fields(copy, [&](const char* key, auto& field) { doc[key] = field; });
    return doc.dump(2);
}

RGSLConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return validate_config(parse_config(buffer.str()));
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) noexcept {
    for (unsigned char c : bytes) {
        state ^= c;
        state *= 0x100000001b3ULL;
    }
    return state;
}

std::string config_hash(const RGSLConfig& cfg) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(serialize_config(cfg));
    return out.str();
}

}  // namespace rgsl
