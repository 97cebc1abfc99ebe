#pragma once

#include <string>

#include "supeuclid/types.hpp"

namespace supeuclid {

// Detection-positive class is OoD throughout: TPR is OoD recall, FPR the
// fraction of ID samples wrongly flagged. Scores order "higher = more OoD".
struct EvalReport {
    double auroc = 0.0;
    double fpr95 = 0.0;
    Index n_id = 0;
    Index n_ood = 0;
    double threshold_at_tpr95 = 0.0;
};

// Exact tie-consistent AUROC:
//   (#{(i,j): ood_j > id_i} + 0.5 * #{ties}) / (n_id * n_ood),
// computed by sorting and counting so it equals the pairwise definition
// without tolerance, including under heavy ties.
double auroc(const Eigen::Ref<const Vector>& id_scores,
             const Eigen::Ref<const Vector>& ood_scores);

struct FprResult {
    double fpr = 0.0;
    double threshold = 0.0;
};

// A sample is flagged OoD when score > threshold. The threshold is the
// largest observed score still achieving #{ood > t}/n_ood >= tpr_target (the
// most permissive feasible choice); the FPR there is #{id > t}/n_id. When no
// observed score is feasible every ID sample is flagged regardless, and the
// threshold reports min(observed) - 1.
FprResult fpr_at_tpr(const Eigen::Ref<const Vector>& id_scores,
                     const Eigen::Ref<const Vector>& ood_scores, double tpr_target);

EvalReport evaluate(const Eigen::Ref<const Vector>& id_scores,
                    const Eigen::Ref<const Vector>& ood_scores);

// {auroc, fpr95, threshold, n_id, n_ood, convention:"ood-positive"}.
std::string report_to_json(const EvalReport& r);
std::string report_to_table(const EvalReport& r);

}  // namespace supeuclid
