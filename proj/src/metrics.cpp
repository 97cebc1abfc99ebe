#include "supeuclid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include <nlohmann/json.hpp>

#include "supeuclid/error.hpp"

namespace supeuclid {

namespace {

std::vector<double> checked_copy(const Eigen::Ref<const Vector>& v, const char* which) {
    if (v.size() == 0) throw InputError(std::string(which) + " score set is empty");
    std::vector<double> out(static_cast<std::size_t>(v.size()));
    for (Index i = 0; i < v.size(); ++i) {
        if (std::isnan(v(i)))
            throw InputError(std::string(which) + " scores contain NaN at index " +
                             std::to_string(i));
        out[static_cast<std::size_t>(i)] = v(i);
    }
    return out;
}

}  // namespace

double auroc(const Eigen::Ref<const Vector>& id_scores,
             const Eigen::Ref<const Vector>& ood_scores) {
    std::vector<double> id = checked_copy(id_scores, "id");
    const std::vector<double> ood = checked_copy(ood_scores, "ood");
    std::sort(id.begin(), id.end());

    // Counts are integers and halves, so the accumulation is exact and equals
    // the O(n^2) pairwise definition including tie credit.
    double favorable = 0.0;
    for (const double o : ood) {
        const auto lo = std::lower_bound(id.begin(), id.end(), o);
        const auto hi = std::upper_bound(id.begin(), id.end(), o);
        favorable += static_cast<double>(lo - id.begin());
        favorable += 0.5 * static_cast<double>(hi - lo);
    }
    return favorable / (static_cast<double>(id.size()) * static_cast<double>(ood.size()));
}

FprResult fpr_at_tpr(const Eigen::Ref<const Vector>& id_scores,
                     const Eigen::Ref<const Vector>& ood_scores, double tpr_target) {
    if (!(tpr_target > 0.0) || tpr_target > 1.0)
        throw InputError("fpr_at_tpr: tpr_target must be in (0, 1]");
    std::vector<double> id = checked_copy(id_scores, "id");
    std::vector<double> ood = checked_copy(ood_scores, "ood");
    const auto n_id = static_cast<double>(id.size());
    const auto n_ood = static_cast<Index>(ood.size());

    // Smallest flagged-OoD count whose recall clears the target, using the
    // same floating comparison an exhaustive threshold scan would.
    Index need = n_ood;
    for (Index c = 1; c <= n_ood; ++c) {
        if (static_cast<double>(c) / static_cast<double>(n_ood) >= tpr_target) {
            need = c;
            break;
        }
    }

    std::sort(ood.begin(), ood.end(), std::greater<>());
    const double o_star = ood[static_cast<std::size_t>(need - 1)];  // any t < o_star is feasible

    std::vector<double> observed(id);
    observed.insert(observed.end(), ood.begin(), ood.end());
    std::sort(observed.begin(), observed.end());

    double threshold;
    const auto first_ge = std::lower_bound(observed.begin(), observed.end(), o_star);
    if (first_ge == observed.begin()) {
        threshold = observed.front() - 1.0;  // no observed score is feasible
    } else {
        threshold = *(first_ge - 1);
    }

    std::sort(id.begin(), id.end());
    const auto flagged = id.end() - std::upper_bound(id.begin(), id.end(), threshold);
    return {static_cast<double>(flagged) / n_id, threshold};
}

EvalReport evaluate(const Eigen::Ref<const Vector>& id_scores,
                    const Eigen::Ref<const Vector>& ood_scores) {
    EvalReport r;
    r.auroc = auroc(id_scores, ood_scores);
    const FprResult f = fpr_at_tpr(id_scores, ood_scores, 0.95);
    r.fpr95 = f.fpr;
    r.threshold_at_tpr95 = f.threshold;
    r.n_id = id_scores.size();
    r.n_ood = ood_scores.size();
    return r;
}

std::string report_to_json(const EvalReport& r) {
    nlohmann::json j;
    j["auroc"] = r.auroc;
    j["fpr95"] = r.fpr95;
    j["threshold"] = r.threshold_at_tpr95;
    j["n_id"] = r.n_id;
    j["n_ood"] = r.n_ood;
    j["convention"] = "ood-positive";
    return j.dump(2) + "\n";
}

std::string report_to_table(const EvalReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%-12s %s\n"
                  "%-12s %.6f\n"
                  "%-12s %.6f\n"
                  "%-12s %.6g\n"
                  "%-12s %lld\n"
                  "%-12s %lld\n",
                  "convention", "ood-positive",
                  "auroc", r.auroc,
                  "fpr95", r.fpr95,
                  "threshold", r.threshold_at_tpr95,
                  "n_id", static_cast<long long>(r.n_id),
                  "n_ood", static_cast<long long>(r.n_ood));
    return buf;
}

}  // namespace supeuclid
