#pragma once

#include <cstdint>
#include <vector>

#include "latentgp/core_gp.hpp"
#include "latentgp/design.hpp"

namespace latentgp {

// Boundary-first visit order: points close to the opposite class get sampled
// early, which keeps the later conditionals well behaved when the process has
// to change sign. The point numbering itself is arbitrary, so reordering does
// not change the sampled distribution.
struct OrderingPlan {
    std::vector<int> permutation;      // permutation[k] = design index visited at step k
    Eigen::VectorXd rationale_scores;  // per design point: distance to nearest opposite label
};

// Ascending distance-to-opposite-class, ties broken by original index.
// Single-class designs get the identity order (scores infinite).
OrderingPlan reorder_for_boundary(const LabelledDesign& design);

// One draw of the latent process at the design points, every sign matching
// its label. Values are stored in design order regardless of the plan.
struct LatentSample {
    Eigen::VectorXd values;
    GpParams params_used;
    std::uint64_t seed_used = 0;
};

// Draws the latent process under the hard sign constraints. The walk first
// fills each coordinate in plan order from its univariate conditional given the
// values fixed so far, truncated to the half-line matching the label by
// inverse cdf (identical in distribution to resampling until the sign agrees,
// but never stalls). A single pass leaves the early coordinates blind to the
// constraints on later ones, so refine_sweeps single-site sweeps -- each
// coordinate redrawn from its truncated conditional given ALL the others --
// polish the draw until ordering genuinely makes no difference. Throws
// NumericalError naming the offending point if a conditional leaves less than
// ~1e-300 mass on the required half-line.
LatentSample sequential_sign_sample(const LabelledDesign& design, const MeanBasis& basis,
                                    const GpParams& params, const OrderingPlan& plan,
                                    std::uint64_t seed, int refine_sweeps = 50);

// n_samples draws; member k uses param_draws[k % size] (a single-element
// vector reproduces the fixed-MAP default, a thinned chain gives the
// parameter-mixing variant) and its own substream of `seed`. Degenerate draws
// are skipped and counted; more than failure_budget skips is an error.
std::vector<LatentSample> latent_ensemble(const LabelledDesign& design, const MeanBasis& basis,
                                          const std::vector<GpParams>& param_draws, int n_samples,
                                          std::uint64_t seed, double failure_budget = 0.10);

}  // namespace latentgp
