#include "supeuclid/pipeline.hpp"

#include <algorithm>
#include <iostream>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "supeuclid/error.hpp"
#include "supeuclid/io.hpp"
#include "supeuclid/numerics.hpp"
#include "supeuclid/scoring.hpp"

namespace supeuclid {

namespace fs = std::filesystem;
using nlohmann::json;

const char* score_space_name(ScoreSpace s) {
    return s == ScoreSpace::feature ? "feature" : "projection";
}

ScoreSpace score_space_from_name(const std::string& name) {
    if (name == "feature") return ScoreSpace::feature;
    if (name == "projection") return ScoreSpace::projection;
    throw ConfigError("score_space must be \"feature\" or \"projection\", got \"" + name + "\"");
}

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& scope) {
    for (const auto& item : obj.items()) {
        if (!allowed.contains(item.key()))
            throw ConfigError("unknown config key \"" + scope + item.key() + "\"");
    }
}

template <typename T>
void fetch(const json& obj, const char* key, const std::string& scope, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key \"" + scope + key + "\" has the wrong type");
    }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");

    RunConfig cfg;
    check_keys(root, {"seed", "score_space", "normalize_features", "data", "augment", "train"}, "");
    fetch(root, "seed", "", cfg.seed);
    fetch(root, "normalize_features", "", cfg.normalize_features);
    if (root.contains("score_space")) {
        std::string name;
        fetch(root, "score_space", "", name);
        cfg.score_space = score_space_from_name(name);
    }

    if (root.contains("data")) {
        const json& d = root.at("data");
        if (!d.is_object()) throw ConfigError("config key \"data\" must be an object");
        check_keys(d, {"k", "d_in", "n_per_class", "class_sep", "ood_offset", "n_ood"}, "data.");
        fetch(d, "k", "data.", cfg.data.k);
        fetch(d, "d_in", "data.", cfg.data.d_in);
        fetch(d, "n_per_class", "data.", cfg.data.n_per_class);
        fetch(d, "class_sep", "data.", cfg.data.class_sep);
        fetch(d, "ood_offset", "data.", cfg.data.ood_offset);
        fetch(d, "n_ood", "data.", cfg.data.n_ood);
    }

    if (root.contains("augment")) {
        const json& a = root.at("augment");
        if (!a.is_object()) throw ConfigError("config key \"augment\" must be an object");
        check_keys(a, {"mode", "noise_sigma", "crop_pad", "flip_prob"}, "augment.");
        if (a.contains("mode")) {
            std::string mode;
            fetch(a, "mode", "augment.", mode);
            if (mode == "gaussian_noise") cfg.augment.mode = AugmentMode::gaussian_noise;
            else if (mode == "crop_flip") cfg.augment.mode = AugmentMode::crop_flip;
            else throw ConfigError("augment.mode must be \"gaussian_noise\" or \"crop_flip\"");
        }
        fetch(a, "noise_sigma", "augment.", cfg.augment.noise_sigma);
        fetch(a, "crop_pad", "augment.", cfg.augment.crop_pad);
        fetch(a, "flip_prob", "augment.", cfg.augment.flip_prob);
    }

    if (root.contains("train")) {
        const json& t = root.at("train");
        if (!t.is_object()) throw ConfigError("config key \"train\" must be an object");
        check_keys(t,
                   {"epochs", "batch_size", "lr0", "momentum", "weight_decay", "gamma", "tau",
                    "hidden_dim", "feature_dim", "proj_dim"},
                   "train.");
        fetch(t, "epochs", "train.", cfg.train.epochs);
        fetch(t, "batch_size", "train.", cfg.train.batch_size);
        fetch(t, "lr0", "train.", cfg.train.lr0);
        fetch(t, "momentum", "train.", cfg.train.momentum);
        fetch(t, "weight_decay", "train.", cfg.train.weight_decay);
        fetch(t, "gamma", "train.", cfg.train.gamma);
        fetch(t, "tau", "train.", cfg.train.tau);
        fetch(t, "hidden_dim", "train.", cfg.train.hidden_dim);
        fetch(t, "feature_dim", "train.", cfg.train.feature_dim);
        fetch(t, "proj_dim", "train.", cfg.train.proj_dim);
    }

    cfg.train.seed = cfg.seed;
    cfg.train.score_space = cfg.score_space;
    return cfg;
}

RunConfig load_run_config(const fs::path& path) {
    return parse_run_config(read_file_bytes(path));
}

std::string run_config_to_json(const RunConfig& cfg) {
    json root;
    root["seed"] = cfg.seed;
    root["score_space"] = score_space_name(cfg.score_space);
    root["normalize_features"] = cfg.normalize_features;
    root["data"] = {{"k", cfg.data.k},
                    {"d_in", cfg.data.d_in},
                    {"n_per_class", cfg.data.n_per_class},
                    {"class_sep", cfg.data.class_sep},
                    {"ood_offset", cfg.data.ood_offset},
                    {"n_ood", cfg.data.n_ood}};
    root["augment"] = {{"mode", cfg.augment.mode == AugmentMode::gaussian_noise ? "gaussian_noise"
                                                                                : "crop_flip"},
                       {"noise_sigma", cfg.augment.noise_sigma},
                       {"crop_pad", cfg.augment.crop_pad},
                       {"flip_prob", cfg.augment.flip_prob}};
    root["train"] = {{"epochs", cfg.train.epochs},
                     {"batch_size", cfg.train.batch_size},
                     {"lr0", cfg.train.lr0},
                     {"momentum", cfg.train.momentum},
                     {"weight_decay", cfg.train.weight_decay},
                     {"gamma", cfg.train.gamma},
                     {"tau", cfg.train.tau},
                     {"hidden_dim", cfg.train.hidden_dim},
                     {"feature_dim", cfg.train.feature_dim},
                     {"proj_dim", cfg.train.proj_dim}};
    return root.dump(2) + "\n";
}

namespace {

void prepare_run_dir(const RunConfig& cfg, const fs::path& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create run directory " + out.string() + ": " + ec.message());
    write_file_bytes(out / "config.json", run_config_to_json(cfg));
}

EmbeddingData dataset_to_embedding(const Dataset& ds) {
    EmbeddingData e;
    e.X = ds.X;
    e.has_labels = true;
    e.labels.assign(ds.labels.begin(), ds.labels.end());
    return e;
}

Dataset embedding_to_dataset(const EmbeddingData& e, Split split, const std::string& origin) {
    Dataset ds;
    ds.X = e.X;
    ds.split = split;
    if (e.has_labels) {
        ds.labels.assign(e.labels.begin(), e.labels.end());
        int max_label = -1;
        for (const int y : ds.labels) max_label = std::max(max_label, y);
        ds.k = max_label + 1;
    } else {
        ds.labels.assign(static_cast<std::size_t>(ds.size()), kOodLabel);
        ds.k = 0;
    }
    if (static_cast<Index>(ds.labels.size()) != ds.size())
        throw FormatError(origin + ": label count does not match row count");
    return ds;
}

Matrix normalize_rows(const Matrix& F) {
    Matrix out(F.rows(), F.cols());
    for (Index i = 0; i < F.rows(); ++i) out.row(i) = l2_normalize(F.row(i)).transpose();
    return out;
}

std::string scores_name_for_split(const std::string& split) {
    if (split == "id_test") return "scores_id.csv";
    if (split == "ood_test") return "scores_ood.csv";
    throw ConfigError("score: split must be \"id_test\" or \"ood_test\", got \"" + split + "\"");
}

struct LabeledFeatures {
    Matrix F;
    std::vector<int> labels;  // may be all kOodLabel when the file is unlabeled
    bool has_labels = false;
};

LabeledFeatures read_features(const fs::path& path, bool normalize) {
    const EmbeddingData e = read_embedding_file(path);
    LabeledFeatures lf;
    lf.F = normalize ? normalize_rows(e.X) : e.X;
    lf.has_labels = e.has_labels;
    if (e.has_labels)
        lf.labels.assign(e.labels.begin(), e.labels.end());
    else
        lf.labels.assign(static_cast<std::size_t>(e.X.rows()), kOodLabel);
    return lf;
}

PrototypeSet fit_from_train_file(const fs::path& path, const RunConfig& cfg) {
    const LabeledFeatures tr = read_features(path, cfg.normalize_features);
    if (!tr.has_labels)
        throw InputError(path.string() + ": prototype fitting needs a labeled train file");
    int k = 0;
    for (const int y : tr.labels) k = std::max(k, y + 1);
    if (k < 2) throw InputError(path.string() + ": need labels for at least 2 classes");
    return fit_prototypes(tr.F, tr.labels, k, cfg.score_space);
}

ScoreFile make_score_file(const LabeledFeatures& lf, const PrototypeSet& protos) {
    const ScoreVector sv = score(lf.F, protos);
    ScoreFile sf;
    sf.index.resize(static_cast<std::size_t>(sv.scores.size()));
    sf.labels.resize(static_cast<std::size_t>(sv.scores.size()));
    sf.scores.resize(static_cast<std::size_t>(sv.scores.size()));
    for (Index i = 0; i < sv.scores.size(); ++i) {
        sf.index[static_cast<std::size_t>(i)] = i;
        sf.labels[static_cast<std::size_t>(i)] =
            static_cast<std::int32_t>(lf.labels[static_cast<std::size_t>(i)]);
        sf.scores[static_cast<std::size_t>(i)] = sv.scores(i);
    }
    return sf;
}

EvalReport eval_score_files(const ScoreFile& id_sf, const ScoreFile& ood_sf, const fs::path& out) {
    Vector id_scores = Eigen::Map<const Vector>(id_sf.scores.data(),
                                                static_cast<Index>(id_sf.scores.size()));
    Vector ood_scores = Eigen::Map<const Vector>(ood_sf.scores.data(),
                                                 static_cast<Index>(ood_sf.scores.size()));
    const EvalReport report = evaluate(id_scores, ood_scores);
    write_file_bytes(out / "report.json", report_to_json(report));
    std::cout << report_to_table(report);
    return report;
}

}  // namespace

void cmd_gen_data(const RunConfig& cfg, const fs::path& out) {
    prepare_run_dir(cfg, out);
    Rng rng(cfg.seed);
    const MixtureSplits splits =
        gen_gaussian_mixture(cfg.data.k, cfg.data.d_in, cfg.data.n_per_class, cfg.data.class_sep,
                             cfg.data.ood_offset, cfg.data.n_ood, rng);
    write_embedding_file(out / "train.semb", dataset_to_embedding(splits.train));
    write_embedding_file(out / "id_test.semb", dataset_to_embedding(splits.id_test));
    write_embedding_file(out / "ood_test.semb", dataset_to_embedding(splits.ood_test));
    std::cout << "wrote " << (out / "train.semb").string() << " (n=" << splits.train.size()
              << ", d=" << splits.train.dim() << "), id_test (n=" << splits.id_test.size()
              << "), ood_test (n=" << splits.ood_test.size() << ")\n";
}

void cmd_train(const RunConfig& cfg, const fs::path& out,
               std::optional<fs::path> data_path) {
    prepare_run_dir(cfg, out);
    const fs::path src = data_path.value_or(out / "train.semb");
    Dataset ds = embedding_to_dataset(read_embedding_file(src), Split::train, src.string());
    for (const int y : ds.labels)
        if (y < 0)
            throw InputError(src.string() + ": OoD sentinel label in training data");
    if (ds.k < 2) throw InputError(src.string() + ": training data must cover >= 2 classes");

    TrainConfig tc = cfg.train;
    tc.seed = cfg.seed;
    tc.score_space = cfg.score_space;
    const TrainResult result = train(ds, tc, cfg.augment);
    save_checkpoint(out / "checkpoint.sepm", result.params);
    write_train_log(out / "log.csv", result.log);
    std::cout << "trained " << tc.epochs << " epochs";
    if (!result.log.empty()) std::cout << ", final mean loss " << result.log.back().mean_loss;
    std::cout << ", wrote " << (out / "checkpoint.sepm").string() << "\n";
}

void cmd_embed(const RunConfig& cfg, const fs::path& out, const std::string& split,
               std::optional<fs::path> checkpoint_path, std::optional<fs::path> data_path) {
    if (split != "train" && split != "id_test" && split != "ood_test")
        throw ConfigError("embed: split must be train, id_test or ood_test, got \"" + split + "\"");
    prepare_run_dir(cfg, out);
    const fs::path ckpt_src = checkpoint_path.value_or(out / "checkpoint.sepm");
    const fs::path data_src = data_path.value_or(out / (split + ".semb"));
    const EncoderParams params = load_checkpoint(ckpt_src);
    const EmbeddingData data = read_embedding_file(data_src);
    if (data.X.cols() != params.d_in())
        throw DimensionError("embed: data dim " + std::to_string(data.X.cols()) +
                             " != checkpoint d_in " + std::to_string(params.d_in()));

    EmbeddingData features;
    features.X = encode(params, data.X, cfg.score_space);
    features.has_labels = data.has_labels;
    features.labels = data.labels;
    const fs::path dst = out / ("features_" + split + ".semb");
    write_embedding_file(dst, features);
    std::cout << "wrote " << dst.string() << " (n=" << features.X.rows()
              << ", d=" << features.X.cols() << ", space=" << score_space_name(cfg.score_space)
              << ")\n";
}

void cmd_score(const RunConfig& cfg, const fs::path& out, const std::string& split,
               std::optional<fs::path> train_features, std::optional<fs::path> test_features) {
    const std::string csv_name = scores_name_for_split(split);
    prepare_run_dir(cfg, out);
    const PrototypeSet protos =
        fit_from_train_file(train_features.value_or(out / "features_train.semb"), cfg);
    const fs::path test_src = test_features.value_or(out / ("features_" + split + ".semb"));
    const LabeledFeatures te = read_features(test_src, cfg.normalize_features);
    const ScoreFile sf = make_score_file(te, protos);
    write_score_csv(out / csv_name, sf);
    std::cout << "wrote " << (out / csv_name).string() << " (n=" << sf.scores.size() << ")\n";

    if (split == "id_test" && te.has_labels) {
        const std::vector<int> pred = predict_class(te.F, protos);
        Index correct = 0;
        for (std::size_t i = 0; i < pred.size(); ++i)
            if (pred[i] == te.labels[i]) ++correct;
        std::cout << "nearest-prototype accuracy on id_test: "
                  << static_cast<double>(correct) / static_cast<double>(pred.size()) << "\n";
    }
}

EvalReport cmd_eval(const RunConfig& cfg, const fs::path& out,
                    std::optional<fs::path> id_scores, std::optional<fs::path> ood_scores) {
    prepare_run_dir(cfg, out);
    const ScoreFile id_sf = read_score_csv(id_scores.value_or(out / "scores_id.csv"));
    const ScoreFile ood_sf = read_score_csv(ood_scores.value_or(out / "scores_ood.csv"));
    return eval_score_files(id_sf, ood_sf, out);
}

EvalReport cmd_pipeline(const RunConfig& cfg, const fs::path& out) {
    cmd_gen_data(cfg, out);
    cmd_train(cfg, out);
    cmd_embed(cfg, out, "train");
    cmd_embed(cfg, out, "id_test");
    cmd_embed(cfg, out, "ood_test");
    cmd_score(cfg, out, "id_test");
    cmd_score(cfg, out, "ood_test");
    return cmd_eval(cfg, out);
}

EvalReport cmd_ingest(const RunConfig& cfg, const fs::path& out,
                      const fs::path& train_features, const fs::path& id_features,
                      const fs::path& ood_features) {
    prepare_run_dir(cfg, out);
    const PrototypeSet protos = fit_from_train_file(train_features, cfg);
    const LabeledFeatures id_lf = read_features(id_features, cfg.normalize_features);
    const LabeledFeatures ood_lf = read_features(ood_features, cfg.normalize_features);
    if (id_lf.F.cols() != protos.mu.cols() || ood_lf.F.cols() != protos.mu.cols())
        throw DimensionError("ingest: feature dims (" + std::to_string(id_lf.F.cols()) + ", " +
                             std::to_string(ood_lf.F.cols()) + ") != train dim " +
                             std::to_string(protos.mu.cols()));
    const ScoreFile id_sf = make_score_file(id_lf, protos);
    const ScoreFile ood_sf = make_score_file(ood_lf, protos);
    write_score_csv(out / "scores_id.csv", id_sf);
    write_score_csv(out / "scores_ood.csv", ood_sf);
    return eval_score_files(id_sf, ood_sf, out);
}

}  // namespace supeuclid
