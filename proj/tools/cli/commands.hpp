#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rgsl::cli {

struct SyntheticSpec {
    std::size_t nodes = 8;
    std::size_t timestamps = 2000;
    std::uint64_t seed = 7;
    double noise = 0.1;
};

/// Parses "n=8 T=2000 seed=7 noise=0.1" (space or comma separated, any subset).
SyntheticSpec parse_synthetic_spec(const std::string& text);

struct PrepareOptions {
    std::filesystem::path data;
    std::filesystem::path distances;
    std::string rule = "gaussian-kernel";
    double threshold = 0.1;
    std::optional<double> sigma;
    std::optional<std::string> synthetic;
    std::size_t features = 1;
    std::size_t first_nodes = 0;
    std::size_t first_days = 0;
    std::size_t per_day = 288;
    std::filesystem::path out;
};

struct TrainOptions {
    std::filesystem::path prepared;
    std::filesystem::path config;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

struct EvalOptions {
    std::filesystem::path checkpoint;
    std::filesystem::path prepared;
    std::optional<std::size_t> repeats;
    std::string split = "test";
    std::filesystem::path out;
};

struct PredictOptions {
    std::filesystem::path checkpoint;
    std::filesystem::path input;
    std::filesystem::path out;
};

struct ExportOptions {
    std::filesystem::path checkpoint;
    std::string what = "probs";
    std::optional<double> threshold;
    std::filesystem::path out;
};

void cmd_prepare(const PrepareOptions& options, std::ostream& log);
void cmd_train(const TrainOptions& options, std::ostream& log);
void cmd_eval(const EvalOptions& options, std::ostream& log);
void cmd_predict(const PredictOptions& options, std::ostream& log);
void cmd_export_graph(const ExportOptions& options, std::ostream& log);

/// Parses the command line and dispatches. Returns the process exit code:
/// 0 success, 2 input or config error, 3 training divergence, 4 artifact mismatch.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rgsl::cli
