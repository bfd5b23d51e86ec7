#include "rgsl/types.hpp"

#include <cmath>

#include "rgsl/error.hpp"

namespace rgsl {

SeriesTensor::SeriesTensor(std::size_t timestamps, std::size_t nodes, std::size_t features,
                           std::vector<double> values, std::size_t timestamps_per_day,
                           std::vector<std::string> feature_names)
    : t_(timestamps), n_(nodes), f_(features), per_day_(timestamps_per_day),
      values_(std::move(values)), names_(std::move(feature_names)) {
    if (names_.empty()) {
        for (std::size_t f = 0; f < f_; ++f) names_.push_back("f" + std::to_string(f));
    }
    validate();
}

void SeriesTensor::validate() const {
    if (t_ < 1 || n_ < 2 || f_ < 1) {
        throw Error(ErrorCode::BadShape, "series needs T>=1, N>=2, F>=1; got (" + std::to_string(t_) +
                                             ", " + std::to_string(n_) + ", " + std::to_string(f_) + ")");
    }
    if (values_.size() != t_ * n_ * f_) {
        throw Error(ErrorCode::BadShape, "value count does not match (T, N, F)");
    }
    if (per_day_ == 0) throw Error(ErrorCode::BadShape, "timestamps_per_day must be positive");
    if (names_.size() != f_) throw Error(ErrorCode::BadShape, "one feature name per feature");
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error(ErrorCode::BadFormat, "series contains NaN/Inf after cleaning");
    }
}

SeriesTensor SeriesTensor::slice_time(std::size_t begin, std::size_t end) const {
    if (begin >= end || end > t_) throw Error(ErrorCode::BadShape, "invalid time slice");
    std::vector<double> out(values_.begin() + static_cast<std::ptrdiff_t>(begin * n_ * f_),
                            values_.begin() + static_cast<std::ptrdiff_t>(end * n_ * f_));
    return SeriesTensor(end - begin, n_, f_, std::move(out), per_day_, names_);
}

SeriesTensor SeriesTensor::first_nodes(std::size_t count) const {
    if (count < 2 || count > n_) throw Error(ErrorCode::BadShape, "invalid node subset");
    std::vector<double> out;
    out.reserve(t_ * count * f_);
    for (std::size_t t = 0; t < t_; ++t)
        for (std::size_t n = 0; n < count; ++n)
            for (std::size_t f = 0; f < f_; ++f) out.push_back(at(t, n, f));
    return SeriesTensor(t_, count, f_, std::move(out), per_day_, names_);
}

bool ExplicitGraph::is_symmetric(double tol) const {
    return ((adjacency - adjacency.transpose()).array().abs() <= tol).all();
}

void ExplicitGraph::validate() const {
    if (adjacency.rows() != adjacency.cols()) throw Error(ErrorCode::NonSquare, "explicit graph");
    if (!adjacency.allFinite()) throw Error(ErrorCode::BadFormat, "explicit graph has non-finite entries");
    if ((adjacency.array() < 0.0).any()) throw Error(ErrorCode::NegativeEntry, "explicit graph");
    if ((adjacency.diagonal().array() != 0.0).any()) {
        throw Error(ErrorCode::BadFormat, "explicit graph diagonal must be zero");
    }
}

void NodeEmbeddingTable::validate() const {
    if (!embeddings.value.allFinite()) throw Error(ErrorCode::NonFiniteEmbedding, "node embeddings");
}

void ScalerStats::validate() const {
    if (mean.size() != std.size() || mean.empty()) throw Error(ErrorCode::BadShape, "scaler stats");
    for (double s : std) {
        if (!(s > 0.0)) throw Error(ErrorCode::BadFormat, "scaler std must be positive");
    }
}

}  // namespace rgsl
