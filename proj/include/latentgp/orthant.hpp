#pragma once

#include <cstdint>

#include "latentgp/core_gp.hpp"
#include "latentgp/design.hpp"
#include "latentgp/latent_sampler.hpp"

namespace latentgp {

// Monte Carlo estimate of the sign-constraint likelihood: the probability
// that the latent vector is negative at every -1 point and positive at every
// +1 point.
struct LikelihoodEstimate {
    double log_value = 0.0;     // log of the mean replicate probability
    double mc_std_error = 0.0;  // standard error of the probability estimate
    int n_replicates = 0;
    bool degenerate = false;    // every replicate carried zero mass
};

// Phi(-mean/sd) for sign -1, 1 - Phi(-mean/sd) for sign +1.
double phi_halfline(double mean, double sd, int sign);

// Folds per-replicate log probabilities into (log mean, std error); the
// log-sum is stabilised around the max so nothing underflows.
LikelihoodEstimate aggregate_replicate_logs(const std::vector<double>& log_probs);

// GHK-style sequential-conditioning estimator: each replicate walks the
// design in boundary-first order, multiplies the univariate half-line
// probabilities and conditions on a truncated draw at each step. Unbiased for
// the orthant probability; exact (zero variance) when the covariance is
// diagonal. Replicate r uses substream (seed, r), so replicates can be
// evaluated in any order.
LikelihoodEstimate orthant_log_likelihood(const LabelledDesign& design, const MeanBasis& basis,
                                          const GpParams& params, int n_replicates,
                                          std::uint64_t seed,
                                          const OrderingPlan* plan = nullptr);

// Fixed design/order, many theta evaluations (the MH hot loop): the permuted
// squared distances and basis rows are computed once.
class GhkContext {
public:
    GhkContext(const LabelledDesign& design, const MeanBasis& basis, OrderingPlan plan);

    LikelihoodEstimate evaluate(const GpParams& params, int n_replicates,
                                std::uint64_t seed) const;
    const OrderingPlan& plan() const { return plan_; }

private:
    OrderingPlan plan_;
    Eigen::MatrixXd sq_dist_;  // permuted order
    Eigen::MatrixXd H_;        // permuted basis rows
    Eigen::VectorXi labels_;   // permuted
};

}  // namespace latentgp
