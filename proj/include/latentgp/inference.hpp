#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latentgp/core_gp.hpp"
#include "latentgp/design.hpp"
#include "latentgp/orthant.hpp"

namespace latentgp {

// Independent Gaussian priors per mean coefficient, inverse-gamma priors on
// sigma2 and delta. The inverse-gamma on delta keeps the correlation length
// away from zero, where the latent process could flip sign between
// same-labelled neighbours.
struct PriorSpec {
    Eigen::VectorXd beta_mean;
    Eigen::VectorXd beta_sd;
    double sigma2_shape = 3.0;
    double sigma2_scale = 2.0;
    double delta_shape = 3.0;
    double delta_scale = 2.0;
    bool intercept_tight = false;  // beta_sd[0] pinned small (transformed-input fits)

    void validate(int basis_output_dim) const;
    double sigma2_prior_mean() const { return sigma2_scale / (sigma2_shape - 1.0); }
    double delta_prior_mean() const { return delta_scale / (delta_shape - 1.0); }
};

// Weakly informative defaults: beta ~ N(0, 3^2) per component (intercept sd
// 0.1 when tight), sigma2 prior mean 1 on scaled inputs, delta prior mean the
// squared median inter-point distance.
PriorSpec default_priors(const LabelledDesign& design, const MeanBasis& basis,
                         bool intercept_tight = false);

double median_sq_interpoint_distance(const LabelledDesign& design);

double log_inv_gamma_pdf(double x, double shape, double scale);
double log_normal_pdf(double x, double mean, double sd);
double log_prior(const GpParams& params, const PriorSpec& priors);

struct MhConfig {
    int n_iterations = 20000;
    int burn_in = 5000;
    int thin = 5;
    // One entry per beta component, then log sigma2, then log delta; empty
    // selects defaults scaled to the priors.
    Eigen::VectorXd step_sizes;
    int adapt_window = 50;  // burn-in Robbins-Monro batch; 0 disables
    int likelihood_replicates = 64;
    std::uint64_t seed = 1;
    bool disable_likelihood = false;  // testing hook: constant likelihood

    void validate() const;
};

struct ChainDraw {
    GpParams params;
    double log_posterior;  // log prior + realized log likelihood estimate
    bool accepted;         // proposal at this iteration was taken
};

struct Chain {
    std::vector<ChainDraw> draws;
    double acceptance_rate = 0.0;  // over post-burn-in iterations
    MhConfig config_echo;
};

// Random-walk Metropolis-Hastings on (beta, log sigma2, log delta). The GHK
// likelihood estimate is noisy, so this is pseudo-marginal MH: the realized
// estimate is stored with the accepted state, never recomputed for it. Step
// sizes adapt toward 0.3 acceptance during burn-in only, so the post-burn-in
// kernel is a fixed MH kernel. Deterministic given config.seed.
Chain mh_run(const LabelledDesign& design, const MeanBasis& basis, const PriorSpec& priors,
             const MhConfig& config);

// Rejection baseline: draw theta from the prior, simulate one latent
// realization at the design points, accept iff every sign matches its label.
struct AbcResult {
    std::vector<GpParams> accepted;
    std::vector<Eigen::VectorXd> accepted_latents;
    int n_proposals = 0;
    double acceptance_fraction = 0.0;
};

AbcResult abc_fit(const LabelledDesign& design, const MeanBasis& basis, const PriorSpec& priors,
                  int n_proposals, std::uint64_t seed);

// Draw with the maximal stored log posterior, earliest index on ties.
GpParams map_estimate(const Chain& chain);

struct ParamDiagnostic {
    std::string name;
    double mean = 0.0;
    double sd = 0.0;
    double ess = 0.0;
    double split_half_z = 0.0;  // |mean(first half) - mean(second half)| / sd
};

std::vector<ParamDiagnostic> chain_diagnostics(const Chain& chain);

// Autocorrelation-based effective sample size (Geyer initial positive
// sequence). A zero-variance series reports 1.
double effective_sample_size(const std::vector<double>& series);

}  // namespace latentgp
