#include "fringe/estimators.hpp"

#include <algorithm>

namespace fringe {

const std::vector<std::string>& estimator_ids() {
    static const std::vector<std::string> ids = {
        "kreis", "psc", "gs", "evi", "rp", "ire",
        "mre",   "tse", "ddv", "gpsi", "slef", "qpp"};
    return ids;
}

bool estimator_needs_analytic(const std::string& id) {
    return id == "ire" || id == "mre";
}

StepEstimate run_estimator(const std::string& id, const NormalizedPair& pair,
                           const EstimatorParams& p) {
    if (estimator_needs_analytic(id) && !pair.has_analytic())
        throw ConfigError("estimator '" + id +
                          "' requires analytic maps; pair was normalized without them");
    if (id == "kreis") return estimate_kreis(pair, p.lowcut_radius);
    if (id == "psc") return estimate_psc(pair);
    if (id == "gs") return estimate_gs(pair);
    if (id == "evi") return estimate_evi(pair, p.extremum_guard);
    if (id == "rp") return estimate_rp(pair, p.n_samples, p.seed);
    if (id == "ire") return estimate_ire(pair, p.ire);
    if (id == "mre") return estimate_mre(pair);
    if (id == "tse") return estimate_tse(pair, p.tse_sigma);
    if (id == "ddv") return estimate_ddv(pair);
    if (id == "gpsi") return estimate_gpsi(pair);
    if (id == "slef") return estimate_slef(pair, p.slef_robust, p.slef_kappa);
    if (id == "lef") return estimate_lef_full(pair);
    if (id == "qpp") return estimate_qpp(pair, p.qpp_window, p.seed);
    throw ConfigError("unknown estimator id: " + id);
}

}  // namespace fringe
