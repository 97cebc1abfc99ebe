#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "supeuclid/trainer.hpp"
#include "supeuclid/types.hpp"

namespace supeuclid {

// --------------------------------------------------------------------------
// Embedding container (.semb), all integers little-endian:
//   magic "SEMB" | version u32 | n u64 | d u32 | has_labels u8 |
//   n*d float32 row-major | (if has_labels) n int32 labels (-1 = OoD).
// Total byte length is exactly computable from the header and is validated.
// Values are stored in float32; computation happens in double.
// --------------------------------------------------------------------------
inline constexpr std::uint32_t kEmbeddingVersion = 1;

struct EmbeddingData {
    Matrix X;  // n x d
    bool has_labels = false;
    std::vector<std::int32_t> labels;  // size n when has_labels
};

std::string encode_embedding(const EmbeddingData& e);
EmbeddingData decode_embedding(std::string_view bytes);
void write_embedding_file(const std::filesystem::path& path, const EmbeddingData& e);
EmbeddingData read_embedding_file(const std::filesystem::path& path);

// --------------------------------------------------------------------------
// Model checkpoint (.sepm):
//   magic "SEPM" | version u32 | d_in u32 | h u32 | d_feat u32 | d_proj u32 |
//   W1, b1, W2, b2, Wp as little-endian float64, row-major, in that order.
// --------------------------------------------------------------------------
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string encode_checkpoint(const EncoderParams& p);
EncoderParams decode_checkpoint(std::string_view bytes);
void save_checkpoint(const std::filesystem::path& path, const EncoderParams& p);
EncoderParams load_checkpoint(const std::filesystem::path& path);

// --------------------------------------------------------------------------
// Score CSV: header "index,label,score", one row per sample, scores rendered
// with 17 significant digits so parse -> render round-trips bit-exactly.
// --------------------------------------------------------------------------
struct ScoreFile {
    std::vector<std::int64_t> index;
    std::vector<std::int32_t> labels;  // -1 for OoD
    std::vector<double> scores;
};

std::string encode_score_csv(const ScoreFile& s);
ScoreFile decode_score_csv(std::string_view text);
void write_score_csv(const std::filesystem::path& path, const ScoreFile& s);
ScoreFile read_score_csv(const std::filesystem::path& path);

// Training log CSV: header "epoch,lr,mean_loss".
std::string encode_train_log(const TrainLog& log);
void write_train_log(const std::filesystem::path& path, const TrainLog& log);

// Shortest-exact decimal for doubles in text artifacts ("%.17g").
std::string format_g17(double v);

// Whole-file helpers; read throws IoError when the file is missing.
std::string read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::string_view bytes);

}  // namespace supeuclid
