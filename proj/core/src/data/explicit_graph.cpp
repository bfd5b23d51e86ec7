#include "rgsl/data/explicit_graph.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rgsl/error.hpp"

namespace rgsl::data {

EdgeRule edge_rule_from_string(std::string_view name) {
    if (name == "gaussian-kernel") return EdgeRule::GaussianKernel;
    if (name == "binary") return EdgeRule::Binary;
    throw Error(ErrorCode::BadConfigValue, "unknown edge rule '" + std::string(name) + "'");
}

std::string_view to_string(EdgeRule rule) noexcept {
    return rule == EdgeRule::Binary ? "binary" : "gaussian-kernel";
}

std::vector<DistanceEdge> read_distance_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::EmptyEdgeList, path.string() + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "from,to,cost") {
        throw Error(ErrorCode::BadFormat, path.string() + ": header must be 'from,to,cost'");
    }
    std::vector<DistanceEdge> edges;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c)) {
            throw Error(ErrorCode::BadFormat, path.string() + ":" + std::to_string(line_no));
        }
        try {
            edges.push_back({std::stoll(a), std::stoll(b), std::stod(c)});
        } catch (const std::exception&) {
            throw Error(ErrorCode::BadFormat, path.string() + ":" + std::to_string(line_no));
        }
    }
    return edges;
}

GraphBuildResult build_explicit_graph(const std::vector<DistanceEdge>& edges, std::size_t n_nodes,
                                      const GraphBuildOptions& options, std::string source) {
    if (edges.empty()) throw Error(ErrorCode::EmptyEdgeList, "distance file has no edges");
    const auto n = static_cast<long long>(n_nodes);
    double total = 0.0;
    for (const auto& e : edges) {
        if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
            throw Error(ErrorCode::NodeIdOutOfRange, "edge (" + std::to_string(e.from) + ", " +
                                                         std::to_string(e.to) + ") with N=" +
                                                         std::to_string(n_nodes));
        }
        if (!(e.cost >= 0.0)) throw Error(ErrorCode::NegativeCost, std::to_string(e.cost));
        total += e.cost;
    }

    double sigma = 1.0;
    if (options.rule == EdgeRule::GaussianKernel) {
        if (options.sigma) {
            sigma = *options.sigma;
        } else {
            const double mean = total / static_cast<double>(edges.size());
            double var = 0.0;
            for (const auto& e : edges) var += (e.cost - mean) * (e.cost - mean);
            sigma = std::sqrt(var / static_cast<double>(edges.size()));
            if (sigma == 0.0) sigma = mean > 0.0 ? mean : 1.0;
        }
        if (!(sigma > 0.0)) throw Error(ErrorCode::BadConfigValue, "kernel sigma must be positive");
    }

    Matrix w = Matrix::Zero(n, n);
    for (const auto& e : edges) {
        double weight = 1.0;
        if (options.rule == EdgeRule::GaussianKernel) {
            weight = std::exp(-(e.cost * e.cost) / (sigma * sigma));
            if (weight < options.threshold) weight = 0.0;
        }
        w(e.from, e.to) = std::max(w(e.from, e.to), weight);
    }
    w = w.cwiseMax(w.transpose()).eval();
    w.diagonal().setZero();

    GraphBuildResult result;
    result.graph.adjacency = std::move(w);
    result.graph.is_binary = options.rule == EdgeRule::Binary;
    std::ostringstream provenance;
    provenance << (source.empty() ? "<memory>" : source) << " rule=" << to_string(options.rule);
    if (options.rule == EdgeRule::GaussianKernel) {
        provenance << " sigma=" << sigma << " threshold=" << options.threshold;
    }
    result.graph.source = provenance.str();
    if ((result.graph.adjacency.array() == 0.0).all()) {
        result.warning = "EmptyEdgeList: every kernel weight fell below the threshold; explicit graph is empty";
    }
    result.graph.validate();
    return result;
}

GraphBuildResult build_explicit_graph(const std::filesystem::path& distance_csv, std::size_t n_nodes,
                                      const GraphBuildOptions& options) {
    return build_explicit_graph(read_distance_csv(distance_csv), n_nodes, options, distance_csv.string());
}

}  // namespace rgsl::data
