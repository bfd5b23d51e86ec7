#include "rgsl/train/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "rgsl/error.hpp"

namespace rgsl::train {

namespace {

constexpr char kMagic[8] = {'R', 'G', 'S', 'L', 'C', 'K', 'P', 'T'};

class Writer {
public:
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void u64(std::uint64_t v) { raw(&v, sizeof v); }
    void i64(std::int64_t v) { raw(&v, sizeof v); }
    void f64(double v) { raw(&v, sizeof v); }
    void str(const std::string& s) {
        u64(s.size());
        raw(s.data(), s.size());
    }
    void vec(const std::vector<double>& v) {
        u64(v.size());
        raw(v.data(), v.size() * sizeof(double));
    }
    void matrix(const Matrix& m) {
        u64(static_cast<std::uint64_t>(m.rows()));
        u64(static_cast<std::uint64_t>(m.cols()));
        raw(m.data(), static_cast<std::size_t>(m.size()) * sizeof(double));
    }
    void raw(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
    const std::string& bytes() const { return out_; }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string bytes) : in_(std::move(bytes)) {}
    std::uint32_t u32() { return pod<std::uint32_t>(); }
    std::uint64_t u64() { return pod<std::uint64_t>(); }
    std::int64_t i64() { return pod<std::int64_t>(); }
    double f64() { return pod<double>(); }
    std::string str() {
        const auto n = u64();
        need(n);
        std::string s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::vector<double> vec() {
        const auto n = u64();
        need(n * sizeof(double));
        std::vector<double> v(n);
        std::memcpy(v.data(), in_.data() + pos_, n * sizeof(double));
        pos_ += n * sizeof(double);
        return v;
    }
    Matrix matrix() {
        const auto rows = u64();
        const auto cols = u64();
        need(rows * cols * sizeof(double));
        Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        std::memcpy(m.data(), in_.data() + pos_, rows * cols * sizeof(double));
        pos_ += rows * cols * sizeof(double);
        return m;
    }
    void expect_magic() {
        need(sizeof kMagic);
        if (std::memcmp(in_.data(), kMagic, sizeof kMagic) != 0) {
            throw Error(ErrorCode::BadFormat, "not a checkpoint file");
        }
        pos_ += sizeof kMagic;
    }
    bool done() const { return pos_ == in_.size(); }

private:
    template <typename T>
    T pod() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, in_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    void need(std::size_t n) const {
        if (pos_ + n > in_.size()) throw Error(ErrorCode::BadFormat, "checkpoint is truncated");
    }

    std::string in_;
    std::size_t pos_ = 0;
};

}  // namespace

Checkpoint capture_checkpoint(strgc::RGSLModel& model, const Adam* optimizer, std::int64_t epoch,
                              double best_val_mae) {
    Checkpoint ck;
    ck.config = model.config();
    ck.epoch = epoch;
    ck.best_val_mae = best_val_mae;
    ck.scaler = model.scaler();
    ck.explicit_graph = model.explicit_graph();
    for (auto* p : model.parameters()) ck.parameters.push_back({p->name, p->value});
    if (optimizer != nullptr) ck.optimizer = optimizer->state();
    return ck;
}

void load_parameters(strgc::RGSLModel& model, const std::vector<NamedArray>& parameters) {
    auto params = model.parameters();
    if (params.size() != parameters.size()) {
        throw Error(ErrorCode::ConfigMismatch, "checkpoint parameter count differs from the model");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& src = parameters[i];
        if (src.name != params[i]->name || src.value.rows() != params[i]->value.rows() ||
            src.value.cols() != params[i]->value.cols()) {
            throw Error(ErrorCode::ConfigMismatch, "checkpoint parameter '" + src.name + "' does not fit");
        }
        params[i]->value = src.value;
        params[i]->zero_grad();
    }
}

strgc::RGSLModel restore_model(const Checkpoint& checkpoint) {
    strgc::RGSLModel model(checkpoint.config, checkpoint.explicit_graph, checkpoint.scaler);
    load_parameters(model, checkpoint.parameters);
    return model;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
    Writer w;
    w.raw(kMagic, sizeof kMagic);
    w.u32(ck.format_version);
    w.str(serialize_config(ck.config));
    w.i64(ck.epoch);
    w.f64(ck.best_val_mae);
    w.vec(ck.scaler.mean);
    w.vec(ck.scaler.std);
    w.matrix(ck.explicit_graph.adjacency);
    w.u32(ck.explicit_graph.is_binary ? 1u : 0u);
    w.str(ck.explicit_graph.source);
    w.u64(ck.parameters.size());
    for (const auto& p : ck.parameters) {
        w.str(p.name);
        w.matrix(p.value);
    }
    w.i64(ck.optimizer.step);
    w.u64(ck.optimizer.first_moment.size());
    for (std::size_t i = 0; i < ck.optimizer.first_moment.size(); ++i) {
        w.matrix(ck.optimizer.first_moment[i]);
        w.matrix(ck.optimizer.second_moment[i]);
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    Reader r(buffer.str());
    r.expect_magic();

    Checkpoint ck;
    ck.format_version = r.u32();
    if (ck.format_version != Checkpoint::kFormatVersion) {
        throw Error(ErrorCode::UnsupportedVersion,
                    "checkpoint format_version " + std::to_string(ck.format_version) + " (expected " +
                        std::to_string(Checkpoint::kFormatVersion) + ")");
    }
    ck.config = validate_config(parse_config(r.str()));
    ck.epoch = r.i64();
    ck.best_val_mae = r.f64();
    ck.scaler.mean = r.vec();
    ck.scaler.std = r.vec();
    ck.explicit_graph.adjacency = r.matrix();
    ck.explicit_graph.is_binary = r.u32() != 0;
    ck.explicit_graph.source = r.str();
    const auto n_params = r.u64();
    for (std::uint64_t i = 0; i < n_params; ++i) {
        NamedArray p;
        p.name = r.str();
        p.value = r.matrix();
        ck.parameters.push_back(std::move(p));
    }
    ck.optimizer.step = r.i64();
    const auto n_moments = r.u64();
    for (std::uint64_t i = 0; i < n_moments; ++i) {
        ck.optimizer.first_moment.push_back(r.matrix());
        ck.optimizer.second_moment.push_back(r.matrix());
    }
    if (!r.done()) throw Error(ErrorCode::BadFormat, "trailing bytes in checkpoint");
    return ck;
}

}  // namespace rgsl::train
