#include "gkeca/model_io.hpp"

#include <bit>
#include <fstream>
#include <iterator>

namespace gkeca {

namespace {

constexpr char kMagic[] = "GKECAMDL";
constexpr char kTrailer[] = "END\n";

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void bytes(const std::string& s) { out_ += s; }
    void str(const std::string& s) {
        u64(s.size());
        bytes(s);
    }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(const std::string& in) : in_(in) {}

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(in_[pos_++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(in_[pos_++])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(in_[pos_++])) << (8 * i);
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string bytes(std::size_t n) {
        need(n);
        std::string s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::string str() { return bytes(count(1)); }

    // A length prefix, sanity-checked against the bytes that remain.
    std::size_t count(std::size_t element_size) {
        const std::uint64_t n = u64();
        if (element_size > 0 && n > (in_.size() - pos_) / element_size) {
            throw ModelError(ModelErrorKind::truncated, "model: length field exceeds file size");
        }
        return static_cast<std::size_t>(n);
    }
    bool at_end() const { return pos_ == in_.size(); }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw ModelError(ModelErrorKind::truncated, "model: file is truncated");
    }
    const std::string& in_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string encode_model(const TrainedPipeline& p) {
    const auto& cfg = p.config;
    const auto& m = p.keca;
    Writer w;
    w.bytes(std::string(kMagic, 8));
    w.u32(kModelFormatVersion);

    w.i32(cfg.image_size.width);
    w.i32(cfg.image_size.height);
    w.i32(cfg.gabor.num_scales);
    w.i32(cfg.gabor.num_orientations);
    w.f64(cfg.gabor.k_max);
    w.f64(cfg.gabor.f);
    w.f64(cfg.gabor.sigma);
    w.i32(cfg.gabor.window);
    w.u8(cfg.gabor.dc == DcCompensation::sampled ? 0 : 1);
    w.i32(cfg.block_size);

    w.u8(static_cast<std::uint8_t>(m.kernel.kind));
    w.u8(m.kernel.sigma.has_value());
    w.f64(m.kernel.sigma.value_or(0.0));
    w.u8(m.kernel.degree.has_value());
    w.i32(m.kernel.degree.value_or(0));
    w.u8(m.kernel.offset.has_value());
    w.f64(m.kernel.offset.value_or(0.0));
    w.u8(m.kernel.normalize_inputs);
    w.f64(cfg.keca.energy_fraction);
    w.f64(cfg.keca.eig_rel_eps);
    w.f64(cfg.keca.sum_rel_eps);
    w.f64(cfg.class_regularization);

    const std::size_t n = m.num_train();
    const std::size_t d = m.feature_length();
    w.u64(n);
    w.u64(d);
    for (const auto& label : p.train_labels) w.str(label);
    for (const auto& s : m.train) {
        for (double v : s) w.f64(v);
    }

    w.u64(m.k);
    for (auto a : m.axes) w.u64(a);
    for (double v : m.eigenvalues) w.f64(v);
    for (double v : m.eigenvectors.data()) w.f64(v);
    for (double v : m.all_eigenvalues) w.f64(v);
    for (double v : m.ranking.contributions) w.f64(v);
    for (double v : m.ranking.alignments) w.f64(v);
    for (auto o : m.ranking.order) w.u64(o);
    w.u64(m.requested_k ? *m.requested_k + 1 : 0);
    w.bytes(std::string(kTrailer, 4));
    return w.take();
}

TrainedPipeline decode_model(const std::string& bytes) {
    if (bytes.size() < 8 || bytes.compare(0, 8, kMagic, 8) != 0) {
        throw ModelError(ModelErrorKind::bad_magic, "model: bad magic string (not a gkeca model file)");
    }
    Reader r(bytes);
    r.bytes(8);
    const auto version = r.u32();
    if (version != kModelFormatVersion) {
        throw ModelError(ModelErrorKind::unsupported_version,
                         "model: unsupported format version " + std::to_string(version));
    }

    TrainedPipeline p;
    auto& cfg = p.config;
    cfg.image_size.width = r.i32();
    cfg.image_size.height = r.i32();
    cfg.gabor.num_scales = r.i32();
    cfg.gabor.num_orientations = r.i32();
    cfg.gabor.k_max = r.f64();
    cfg.gabor.f = r.f64();
    cfg.gabor.sigma = r.f64();
    cfg.gabor.window = r.i32();
    cfg.gabor.dc = r.u8() == 0 ? DcCompensation::sampled : DcCompensation::analytic;
    cfg.block_size = r.i32();

    KernelSpec spec;
    const auto kind = r.u8();
    if (kind > 2) throw ModelError(ModelErrorKind::corrupt, "model: unknown kernel kind");
    spec.kind = static_cast<KernelKind>(kind);
    const bool has_sigma = r.u8();
    const double sigma = r.f64();
    const bool has_degree = r.u8();
    const int degree = r.i32();
    const bool has_offset = r.u8();
    const double offset = r.f64();
    if (has_sigma) spec.sigma = sigma;
    if (has_degree) spec.degree = degree;
    if (has_offset) spec.offset = offset;
    spec.normalize_inputs = r.u8() != 0;
    cfg.kernel = spec;
    cfg.keca.energy_fraction = r.f64();
    cfg.keca.eig_rel_eps = r.f64();
    cfg.keca.sum_rel_eps = r.f64();
    cfg.class_regularization = r.f64();

    auto& m = p.keca;
    m.kernel = spec;
    const std::size_t n = r.count(8);
    const std::size_t d = r.count(0);
    if (n > 0 && d > bytes.size() / 8 / n) throw ModelError(ModelErrorKind::truncated, "model: feature block exceeds file size");
    for (std::size_t i = 0; i < n; ++i) p.train_labels.push_back(r.str());
    m.train.assign(n, Sample(d));
    for (auto& s : m.train) {
        for (auto& v : s) v = r.f64();
    }

    m.k = r.count(8);
    if (m.k > n) throw ModelError(ModelErrorKind::corrupt, "model: k exceeds training size");
    for (std::size_t i = 0; i < m.k; ++i) {
        m.axes.push_back(r.u64());
        if (m.axes.back() >= n) throw ModelError(ModelErrorKind::corrupt, "model: axis index out of range");
    }
    for (std::size_t i = 0; i < m.k; ++i) m.eigenvalues.push_back(r.f64());
    m.eigenvectors = Matrix(n, m.k);
    for (auto& v : m.eigenvectors.data()) v = r.f64();
    m.all_eigenvalues.resize(n);
    for (auto& v : m.all_eigenvalues) v = r.f64();
    m.ranking.contributions.resize(n);
    for (auto& v : m.ranking.contributions) v = r.f64();
    m.ranking.alignments.resize(n);
    for (auto& v : m.ranking.alignments) v = r.f64();
    m.ranking.order.resize(n);
    for (auto& v : m.ranking.order) v = r.u64();
    const auto req = r.u64();
    if (req > 0) m.requested_k = req - 1;
    cfg.keca.k = m.requested_k;
    if (r.bytes(4) != std::string(kTrailer, 4) || !r.at_end()) {
        throw ModelError(ModelErrorKind::corrupt, "model: missing or misplaced trailer");
    }

    for (double v : m.eigenvalues) {
        if (!(v > 0.0)) throw ModelError(ModelErrorKind::corrupt, "model: selected eigenvalue is not positive");
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ModelError(ModelErrorKind::corrupt, std::string("model: ") + e.what());
    }
    m.prepared.reserve(n);
    for (const auto& s : m.train) m.prepared.push_back(prepare_sample(s, spec));
    p.classes = rebuild_classes(m, p.train_labels, cfg.class_regularization);
    return p;
}

void save_model(const TrainedPipeline& pipeline, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError(ModelErrorKind::io, path.string() + ": cannot open for writing");
    const auto bytes = encode_model(pipeline);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ModelError(ModelErrorKind::io, path.string() + ": write failed");
}

TrainedPipeline load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError(ModelErrorKind::io, path.string() + ": cannot open model file");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_model(bytes);
}

}  // namespace gkeca
