// supeuclid: contrastive training plus nearest-class-mean Euclidean scoring
// for out-of-distribution detection, as a composable pipeline of subcommands.
//
// Exit codes: 0 success, 2 config error, 3 missing/unreadable file,
// 4 dimension mismatch, 5 numeric failure, 1 anything else.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "supeuclid/error.hpp"
#include "supeuclid/io.hpp"
#include "supeuclid/pipeline.hpp"

namespace fs = std::filesystem;
using namespace supeuclid;

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string out_dir = "runs/default";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> score_space;
    bool normalize_features = false;
};

RunConfig resolve_config(const GlobalArgs& g) {
    RunConfig cfg;
    if (!g.config_path.empty()) cfg = load_run_config(g.config_path);
    if (g.seed) {
        cfg.seed = *g.seed;
        cfg.train.seed = *g.seed;
    }
    if (g.score_space) {
        cfg.score_space = score_space_from_name(*g.score_space);
        cfg.train.score_space = cfg.score_space;
    }
    if (g.normalize_features) cfg.normalize_features = true;
    return cfg;
}

std::optional<fs::path> opt_path(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return fs::path(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contrastive encoder training + minimum-Euclidean-distance OoD scoring"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "JSON run configuration");
    app.add_option("--seed", g.seed, "override the config seed");
    app.add_option("--out", g.out_dir, "run directory for artifacts");
    app.add_option("--score-space", g.score_space, "feature|projection")
        ->check(CLI::IsMember({"feature", "projection"}));
    app.add_flag("--normalize-features", g.normalize_features,
                 "L2-normalize features before prototype fitting and scoring");

    auto* gen = app.add_subcommand("gen-data", "generate the synthetic ID/OoD mixture");

    std::string train_data;
    auto* tr = app.add_subcommand("train", "train the encoder on <out>/train.semb");
    tr->add_option("--data", train_data, "training dataset (.semb), default <out>/train.semb");

    std::string embed_split = "train", embed_ckpt, embed_data;
    auto* em = app.add_subcommand("embed", "run a dataset through a checkpoint");
    em->add_option("--split", embed_split, "train|id_test|ood_test (names in/out files)");
    em->add_option("--checkpoint", embed_ckpt, "default <out>/checkpoint.sepm");
    em->add_option("--data", embed_data, "default <out>/<split>.semb");

    std::string score_split = "id_test", score_train_feats, score_test_feats;
    auto* sc = app.add_subcommand("score", "fit prototypes on train features and score a split");
    sc->add_option("--split", score_split, "id_test|ood_test");
    sc->add_option("--train-features", score_train_feats, "default <out>/features_train.semb");
    sc->add_option("--test-features", score_test_feats, "default <out>/features_<split>.semb");

    std::string eval_id, eval_ood;
    auto* ev = app.add_subcommand("eval", "AUROC/FPR95 report from two score CSVs");
    ev->add_option("--id-scores", eval_id, "default <out>/scores_id.csv");
    ev->add_option("--ood-scores", eval_ood, "default <out>/scores_ood.csv");

    auto* pl = app.add_subcommand("pipeline", "gen-data, train, embed, score and eval in one run");

    std::string ingest_train, ingest_id, ingest_ood;
    auto* in = app.add_subcommand("ingest", "score externally produced embedding files");
    in->add_option("--train", ingest_train, "labeled train features (.semb)")->required();
    in->add_option("--id", ingest_id, "ID test features (.semb)")->required();
    in->add_option("--ood", ingest_ood, "OoD test features (.semb)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = resolve_config(g);
        const fs::path out = g.out_dir;
        if (gen->parsed()) {
            cmd_gen_data(cfg, out);
        } else if (tr->parsed()) {
            cmd_train(cfg, out, opt_path(train_data));
        } else if (em->parsed()) {
            cmd_embed(cfg, out, embed_split, opt_path(embed_ckpt), opt_path(embed_data));
        } else if (sc->parsed()) {
            cmd_score(cfg, out, score_split, opt_path(score_train_feats), opt_path(score_test_feats));
        } else if (ev->parsed()) {
            cmd_eval(cfg, out, opt_path(eval_id), opt_path(eval_ood));
        } else if (pl->parsed()) {
            cmd_pipeline(cfg, out);
        } else if (in->parsed()) {
            cmd_ingest(cfg, out, ingest_train, ingest_id, ingest_ood);
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const DimensionError& e) {
        std::cerr << "dimension error: " << e.what() << "\n";
        return 4;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 5;
    } catch (const EmptyPositivesError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 5;
    } catch (const DegenerateVectorError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 5;
    } catch (const InvariantError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 5;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
