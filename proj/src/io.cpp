#include "supeuclid/io.hpp"

#include <bit>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "supeuclid/error.hpp"

namespace supeuclid {

namespace {

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_i32(std::string& buf, std::int32_t v) { put_u32(buf, std::bit_cast<std::uint32_t>(v)); }
void put_f32(std::string& buf, float v) { put_u32(buf, std::bit_cast<std::uint32_t>(v)); }
void put_f64(std::string& buf, double v) { put_u64(buf, std::bit_cast<std::uint64_t>(v)); }

class Reader {
public:
    Reader(std::string_view bytes, std::string name) : bytes_(bytes), name_(std::move(name)) {}

    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte()) << (8 * i);
        return v;
    }

    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(byte()) << (8 * i);
        return v;
    }

    std::int32_t i32() { return std::bit_cast<std::int32_t>(u32()); }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::uint8_t u8() { return byte(); }

    void expect_magic(std::string_view magic) {
        for (char c : magic) {
            if (static_cast<char>(byte()) != c)
                throw FormatError(name_ + ": bad magic, expected \"" + std::string(magic) + "\"");
        }
    }

    void expect_exhausted() {
        if (pos_ != bytes_.size())
            throw FormatError(name_ + ": " + std::to_string(bytes_.size() - pos_) +
                              " trailing bytes");
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::uint8_t byte() {
        if (pos_ >= bytes_.size()) throw FormatError(name_ + ": truncated");
        return static_cast<std::uint8_t>(bytes_[pos_++]);
    }

    std::string_view bytes_;
    std::string name_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed for " + path.string());
    return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string() + ": " + std::strerror(errno));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

// ---------------------------------------------------------------- embeddings

std::string encode_embedding(const EmbeddingData& e) {
    if (e.has_labels && static_cast<Index>(e.labels.size()) != e.X.rows())
        throw DimensionError("encode_embedding: " + std::to_string(e.X.rows()) + " rows but " +
                             std::to_string(e.labels.size()) + " labels");
    std::string buf;
    buf.reserve(21 + static_cast<std::size_t>(e.X.size()) * 4 +
                (e.has_labels ? static_cast<std::size_t>(e.X.rows()) * 4 : 0));
    buf += "SEMB";
    put_u32(buf, kEmbeddingVersion);
    put_u64(buf, static_cast<std::uint64_t>(e.X.rows()));
    put_u32(buf, static_cast<std::uint32_t>(e.X.cols()));
    buf.push_back(e.has_labels ? 1 : 0);
    for (Index i = 0; i < e.X.rows(); ++i)
        for (Index j = 0; j < e.X.cols(); ++j) put_f32(buf, static_cast<float>(e.X(i, j)));
    if (e.has_labels)
        for (const std::int32_t y : e.labels) put_i32(buf, y);
    return buf;
}

EmbeddingData decode_embedding(std::string_view bytes) {
    Reader r(bytes, "embedding file");
    r.expect_magic("SEMB");
    const std::uint32_t version = r.u32();
    if (version != kEmbeddingVersion)
        throw FormatError("embedding file: unsupported version " + std::to_string(version));
    const std::uint64_t n = r.u64();
    const std::uint32_t d = r.u32();
    const std::uint8_t flag = r.u8();
    if (flag > 1) throw FormatError("embedding file: has_labels flag must be 0 or 1");
    const bool has_labels = flag == 1;
    if (n > 0 && d == 0) throw FormatError("embedding file: d must be >= 1");

    const std::uint64_t row_bytes = 4ull * d + (has_labels ? 4ull : 0ull);
    if (row_bytes > 0 && n > r.remaining() / row_bytes)
        throw FormatError("embedding file: header implies more bytes than present");
    if (r.remaining() != n * row_bytes)
        throw FormatError("embedding file: payload is " + std::to_string(r.remaining()) +
                          " bytes, header implies " + std::to_string(n * row_bytes));

    EmbeddingData e;
    e.has_labels = has_labels;
    e.X.resize(static_cast<Index>(n), static_cast<Index>(d));
    for (Index i = 0; i < e.X.rows(); ++i)
        for (Index j = 0; j < e.X.cols(); ++j) e.X(i, j) = static_cast<double>(r.f32());
    if (has_labels) {
        e.labels.resize(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < e.labels.size(); ++i) e.labels[i] = r.i32();
    }
    r.expect_exhausted();
    return e;
}

void write_embedding_file(const std::filesystem::path& path, const EmbeddingData& e) {
    write_file_bytes(path, encode_embedding(e));
}

EmbeddingData read_embedding_file(const std::filesystem::path& path) {
    return decode_embedding(read_file_bytes(path));
}

// ---------------------------------------------------------------- checkpoint

std::string encode_checkpoint(const EncoderParams& p) {
    std::string buf;
    buf += "SEPM";
    put_u32(buf, kCheckpointVersion);
    put_u32(buf, static_cast<std::uint32_t>(p.d_in()));
    put_u32(buf, static_cast<std::uint32_t>(p.hidden()));
    put_u32(buf, static_cast<std::uint32_t>(p.d_feat()));
    put_u32(buf, static_cast<std::uint32_t>(p.d_proj()));
    auto put_matrix = [&buf](const Matrix& m) {
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j) put_f64(buf, m(i, j));
    };
    auto put_vector = [&buf](const Vector& v) {
        for (Index i = 0; i < v.size(); ++i) put_f64(buf, v(i));
    };
    put_matrix(p.W1);
    put_vector(p.b1);
    put_matrix(p.W2);
    put_vector(p.b2);
    put_matrix(p.Wp);
    return buf;
}

EncoderParams decode_checkpoint(std::string_view bytes) {
    Reader r(bytes, "checkpoint");
    r.expect_magic("SEPM");
    const std::uint32_t version = r.u32();
    if (version != kCheckpointVersion)
        throw FormatError("checkpoint: unsupported version " + std::to_string(version));
    const auto d_in = static_cast<Index>(r.u32());
    const auto h = static_cast<Index>(r.u32());
    const auto d_feat = static_cast<Index>(r.u32());
    const auto d_proj = static_cast<Index>(r.u32());
    if (d_in < 1 || h < 1 || d_feat < 1 || d_proj < 1)
        throw FormatError("checkpoint: invalid dimensions");

    EncoderParams p;
    auto get_matrix = [&r](Index rows, Index cols) {
        Matrix m(rows, cols);
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j) m(i, j) = r.f64();
        return m;
    };
    auto get_vector = [&r](Index size) {
        Vector v(size);
        for (Index i = 0; i < size; ++i) v(i) = r.f64();
        return v;
    };
    p.W1 = get_matrix(d_in, h);
    p.b1 = get_vector(h);
    p.W2 = get_matrix(h, d_feat);
    p.b2 = get_vector(d_feat);
    p.Wp = get_matrix(d_feat, d_proj);
    r.expect_exhausted();
    return p;
}

void save_checkpoint(const std::filesystem::path& path, const EncoderParams& p) {
    write_file_bytes(path, encode_checkpoint(p));
}

EncoderParams load_checkpoint(const std::filesystem::path& path) {
    return decode_checkpoint(read_file_bytes(path));
}

// ----------------------------------------------------------------- score CSV

std::string encode_score_csv(const ScoreFile& s) {
    if (s.index.size() != s.labels.size() || s.index.size() != s.scores.size())
        throw DimensionError("encode_score_csv: column lengths differ");
    std::string out = "index,label,score\n";
    for (std::size_t i = 0; i < s.index.size(); ++i) {
        out += std::to_string(s.index[i]);
        out += ',';
        out += std::to_string(s.labels[i]);
        out += ',';
        out += format_g17(s.scores[i]);
        out += '\n';
    }
    return out;
}

ScoreFile decode_score_csv(std::string_view text) {
    ScoreFile s;
    std::size_t pos = 0;
    auto next_line = [&]() -> std::string_view {
        if (pos >= text.size()) return {};
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = (eol == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
        return line;
    };

    const std::string_view header = next_line();
    if (header != "index,label,score")
        throw FormatError("score csv: bad header \"" + std::string(header) + "\"");

    std::size_t line_no = 1;
    while (pos < text.size()) {
        const std::string_view line = next_line();
        ++line_no;
        if (line.empty()) continue;
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = (c1 == std::string_view::npos) ? std::string_view::npos
                                                              : line.find(',', c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos)
            throw FormatError("score csv: line " + std::to_string(line_no) + " is not index,label,score");
        try {
            s.index.push_back(std::stoll(std::string(line.substr(0, c1))));
            s.labels.push_back(static_cast<std::int32_t>(
                std::stol(std::string(line.substr(c1 + 1, c2 - c1 - 1)))));
            s.scores.push_back(std::stod(std::string(line.substr(c2 + 1))));
        } catch (const std::exception&) {
            throw FormatError("score csv: line " + std::to_string(line_no) + " has a malformed field");
        }
    }
    return s;
}

void write_score_csv(const std::filesystem::path& path, const ScoreFile& s) {
    write_file_bytes(path, encode_score_csv(s));
}

ScoreFile read_score_csv(const std::filesystem::path& path) {
    return decode_score_csv(read_file_bytes(path));
}

// ----------------------------------------------------------------- train log

std::string encode_train_log(const TrainLog& log) {
    std::string out = "epoch,lr,mean_loss\n";
    for (const EpochRecord& rec : log) {
        out += std::to_string(rec.epoch);
        out += ',';
        out += format_g17(rec.lr);
        out += ',';
        out += format_g17(rec.mean_loss);
        out += '\n';
    }
    return out;
}

void write_train_log(const std::filesystem::path& path, const TrainLog& log) {
    write_file_bytes(path, encode_train_log(log));
}

}  // namespace supeuclid
