#include "latentgp/orthant.hpp"

#include <cmath>
#include <limits>

#include "latentgp/normal_dist.hpp"
#include "latentgp/rng.hpp"

namespace latentgp {

double phi_halfline(double mean, double sd, int sign) {
    if (!(sd > 0.0)) throw ArgumentError("phi_halfline: sd must be positive");
    if (sign != 1 && sign != -1) throw ArgumentError("phi_halfline: sign must be +1 or -1");
    return std_normal_cdf(sign * mean / sd);
}

LikelihoodEstimate aggregate_replicate_logs(const std::vector<double>& log_probs) {
    const int r = static_cast<int>(log_probs.size());
    if (r < 1) throw ArgumentError("aggregate_replicate_logs: need at least one replicate");

    LikelihoodEstimate est;
    est.n_replicates = r;
    double max_log = -std::numeric_limits<double>::infinity();
    for (double lp : log_probs) max_log = std::max(max_log, lp);
    if (max_log == -std::numeric_limits<double>::infinity()) {
        est.log_value = max_log;
        est.mc_std_error = 0.0;
        est.degenerate = true;
        return est;
    }

    double sum = 0.0, sum_sq = 0.0;
    for (double lp : log_probs) {
        const double rel = std::exp(lp - max_log);
        sum += rel;
        sum_sq += rel * rel;
    }
    const double mean_rel = sum / r;
    est.log_value = max_log + std::log(mean_rel);
    if (r > 1) {
        const double var_rel = std::max(0.0, (sum_sq - r * mean_rel * mean_rel) / (r - 1));
        est.mc_std_error = std::sqrt(var_rel / r) * std::exp(max_log);
    }
    return est;
}

GhkContext::GhkContext(const LabelledDesign& design, const MeanBasis& basis, OrderingPlan plan)
    : plan_(std::move(plan)) {
    const int n = design.n();
    if (static_cast<int>(plan_.permutation.size()) != n) {
        throw ArgumentError("GhkContext: plan size does not match design");
    }
    Eigen::MatrixXd pts(n, design.dim());
    labels_.resize(n);
    for (int k = 0; k < n; ++k) {
        pts.row(k) = design.points().row(plan_.permutation[k]);
        labels_(k) = design.label(plan_.permutation[k]);
    }
    sq_dist_ = sq_dist_matrix(pts);
    H_ = basis.eval_rows(pts);
}

LikelihoodEstimate GhkContext::evaluate(const GpParams& params, int n_replicates,
                                        std::uint64_t seed) const {
    if (n_replicates < 1) throw ArgumentError("GhkContext: n_replicates must be >= 1");
    if (params.beta.size() != H_.cols()) {
        throw ArgumentError("GhkContext: beta length does not match the basis");
    }
    const int n = static_cast<int>(labels_.size());
    const CovMatrix cov = build_cov_from_sqdist(sq_dist_, params);
    const Eigen::MatrixXd& L = cov.chol_lower;
    const Eigen::VectorXd mean = H_ * params.beta;

    std::vector<double> log_probs(n_replicates);
    Eigen::VectorXd z(n);
    for (int r = 0; r < n_replicates; ++r) {
        Rng rng(substream_seed(seed, Stream::Likelihood, static_cast<std::uint64_t>(r)));
        double logp = 0.0;
        for (int j = 0; j < n; ++j) {
            double m = mean(j);
            for (int k = 0; k < j; ++k) m += L(j, k) * z(k);
            const double sd = L(j, j);
            const double log_mass = log_std_normal_cdf(labels_(j) * m / sd);
            logp += log_mass;
            if (logp == -std::numeric_limits<double>::infinity()) break;
            double zj = inv_std_normal_cdf_log(std::log(rng.uniform()) + log_mass);
            if (labels_(j) > 0) zj = -zj;
            z(j) = zj;
        }
        log_probs[r] = logp;
    }
    return aggregate_replicate_logs(log_probs);
}

LikelihoodEstimate orthant_log_likelihood(const LabelledDesign& design, const MeanBasis& basis,
                                          const GpParams& params, int n_replicates,
                                          std::uint64_t seed, const OrderingPlan* plan) {
    params.validate(basis.output_dim());
    if (plan != nullptr) {
        return GhkContext(design, basis, *plan).evaluate(params, n_replicates, seed);
    }
    return GhkContext(design, basis, reorder_for_boundary(design))
        .evaluate(params, n_replicates, seed);
}

}  // namespace latentgp
