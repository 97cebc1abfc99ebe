#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "supeuclid/data.hpp"
#include "supeuclid/metrics.hpp"
#include "supeuclid/trainer.hpp"
#include "supeuclid/types.hpp"

namespace supeuclid {

struct DataConfig {
    int k = 4;
    Index d_in = 8;
    Index n_per_class = 500;
    double class_sep = 6.0;
    double ood_offset = 30.0;
    Index n_ood = 500;
};

// One JSON document drives a run; no environment variables are consulted.
// Unknown keys are rejected so typos fail loudly. The output directory is
// never serialized: a run directory must not depend on its own name.
struct RunConfig {
    std::uint64_t seed = 42;
    ScoreSpace score_space = ScoreSpace::feature;
    bool normalize_features = false;
    DataConfig data;
    AugmentConfig augment;
    TrainConfig train;  // seed/score_space mirrored from the top level
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& cfg);

const char* score_space_name(ScoreSpace s);
ScoreSpace score_space_from_name(const std::string& name);

// --------------------------------------------------------------------------
// Subcommand bodies. Each writes its artifacts under `out` with the fixed
// names below and re-writes config.json, so a run directory is always
// self-describing and `pipeline` is byte-identical to running the stages
// by hand:
//   train.semb id_test.semb ood_test.semb   gen-data
//   checkpoint.sepm log.csv                 train
//   features_<split>.semb                   embed
//   scores_id.csv scores_ood.csv            score
//   report.json                             eval
// Failures surface as exceptions; the CLI maps them to exit codes.
// --------------------------------------------------------------------------

void cmd_gen_data(const RunConfig& cfg, const std::filesystem::path& out);

void cmd_train(const RunConfig& cfg, const std::filesystem::path& out,
               std::optional<std::filesystem::path> data_path = {});

void cmd_embed(const RunConfig& cfg, const std::filesystem::path& out, const std::string& split,
               std::optional<std::filesystem::path> checkpoint_path = {},
               std::optional<std::filesystem::path> data_path = {});

void cmd_score(const RunConfig& cfg, const std::filesystem::path& out, const std::string& split,
               std::optional<std::filesystem::path> train_features = {},
               std::optional<std::filesystem::path> test_features = {});

EvalReport cmd_eval(const RunConfig& cfg, const std::filesystem::path& out,
                    std::optional<std::filesystem::path> id_scores = {},
                    std::optional<std::filesystem::path> ood_scores = {});

EvalReport cmd_pipeline(const RunConfig& cfg, const std::filesystem::path& out);

// Scores externally produced embeddings with the same engine: fit prototypes
// on the labeled train file, score both test files, evaluate.
EvalReport cmd_ingest(const RunConfig& cfg, const std::filesystem::path& out,
                      const std::filesystem::path& train_features,
                      const std::filesystem::path& id_features,
                      const std::filesystem::path& ood_features);

}  // namespace supeuclid
