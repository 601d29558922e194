#include "latentgp/latent_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

#include "latentgp/normal_dist.hpp"
#include "latentgp/rng.hpp"

namespace latentgp {

OrderingPlan reorder_for_boundary(const LabelledDesign& design) {
    const int n = design.n();
    OrderingPlan plan;
    plan.permutation.resize(n);
    std::iota(plan.permutation.begin(), plan.permutation.end(), 0);
    plan.rationale_scores =
        Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());

    if (!design.single_class()) {
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                if (design.label(j) == design.label(i)) continue;
                best = std::min(best, (design.points().row(i) - design.points().row(j)).norm());
            }
            plan.rationale_scores(i) = best;
        }
        std::stable_sort(plan.permutation.begin(), plan.permutation.end(), [&](int a, int b) {
            return plan.rationale_scores(a) < plan.rationale_scores(b);
        });
    }
    return plan;
}

namespace {

constexpr double kMinLogMass = -690.0;  // ~log(1e-300)

// log of the half-line mass Phi(sign * mean / sd).
double halfline_log_mass(double mean, double sd, int sign) {
    return log_std_normal_cdf(sign * mean / sd);
}

}  // namespace

namespace {

// Truncated draw on the half-line {sign * x > 0} for a N(m, sd^2)
// conditional; throws if the half-line carries less than ~1e-300 mass.
double draw_halfline(double m, double sd, int sign, Rng& rng, int design_index) {
    const double log_mass = halfline_log_mass(m, sd, sign);
    if (!(log_mass > kMinLogMass)) {
        std::ostringstream msg;
        msg << "sequential_sign_sample: conditional at design point " << design_index
            << " leaves log half-line mass " << log_mass
            << "; parameters are incompatible with the labels";
        throw NumericalError(msg.str());
    }
    const double target = std::log(rng.uniform()) + log_mass;
    double z = inv_std_normal_cdf_log(target);
    if (sign > 0) z = -z;  // reflected lower-tail draw
    double value = m + sd * z;
    if (!(value * sign > 0.0)) {
        // Rounding put the draw on the wrong side (mass was extreme but above
        // the cutoff); nudge to the open half-line.
        value = sign * std::max(std::abs(value), 1e-280 * sd);
    }
    return value;
}

}  // namespace

LatentSample sequential_sign_sample(const LabelledDesign& design, const MeanBasis& basis,
                                    const GpParams& params, const OrderingPlan& plan,
                                    std::uint64_t seed, int refine_sweeps) {
    const int n = design.n();
    params.validate(basis.output_dim());
    if (static_cast<int>(plan.permutation.size()) != n) {
        throw ArgumentError("sequential_sign_sample: plan size does not match design");
    }
    if (refine_sweeps < 0) throw ArgumentError("sequential_sign_sample: refine_sweeps >= 0");

    Eigen::MatrixXd perm_pts(n, design.dim());
    Eigen::VectorXi perm_labels(n);
    for (int k = 0; k < n; ++k) {
        perm_pts.row(k) = design.points().row(plan.permutation[k]);
        perm_labels(k) = design.label(plan.permutation[k]);
    }

    const CovMatrix cov = build_cov(perm_pts, params);
    const Eigen::VectorXd mean = mean_vector(perm_pts, basis, params.beta);
    SequentialGaussian walk(mean, cov);
    Rng rng(seed);

    // Pass 1: boundary-first sequential conditioning with truncation.
    Eigen::VectorXd vals(n);  // plan order
    for (int k = 0; k < n; ++k) {
        const auto [m, sd] = walk.next_conditional();
        vals(k) = draw_halfline(m, sd, perm_labels(k), rng, plan.permutation[k]);
        walk.fix(vals(k));
    }

    // Refinement: redraw each coordinate from its truncated conditional given
    // all the others. The single pass above never lets early coordinates see
    // the later constraints; these sweeps remove that transient, so the draw
    // targets the sign-constrained process itself and the visit order washes
    // out.
    if (refine_sweeps > 0) {
        const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
        const Eigen::MatrixXd linv =
            cov.chol_lower.triangularView<Eigen::Lower>().solve(ident);
        const Eigen::MatrixXd precision = linv.transpose() * linv;
        Eigen::VectorXd resid = vals - mean;
        for (int sweep = 0; sweep < refine_sweeps; ++sweep) {
            for (int k = 0; k < n; ++k) {
                const double pkk = precision(k, k);
                const double dot = precision.row(k).dot(resid) - pkk * resid(k);
                const double m = mean(k) - dot / pkk;
                const double sd = std::sqrt(1.0 / pkk);
                const double v =
                    draw_halfline(m, sd, perm_labels(k), rng, plan.permutation[k]);
                resid(k) = v - mean(k);
            }
        }
        vals = mean + resid;
    }

    Eigen::VectorXd values(n);
    for (int k = 0; k < n; ++k) values(plan.permutation[k]) = vals(k);
    return LatentSample{std::move(values), params, seed};
}

std::vector<LatentSample> latent_ensemble(const LabelledDesign& design, const MeanBasis& basis,
                                          const std::vector<GpParams>& param_draws, int n_samples,
                                          std::uint64_t seed, double failure_budget) {
    if (param_draws.empty()) throw ArgumentError("latent_ensemble: no parameter draws supplied");
    if (n_samples < 1) throw ArgumentError("latent_ensemble: n_samples must be >= 1");

    const OrderingPlan plan = reorder_for_boundary(design);
    std::vector<LatentSample> out;
    out.reserve(n_samples);
    int failures = 0;
    const int budget = static_cast<int>(std::floor(failure_budget * n_samples));
    for (int k = 0; k < n_samples; ++k) {
        const GpParams& p = param_draws[k % param_draws.size()];
        const std::uint64_t sub = substream_seed(seed, Stream::Ensemble, static_cast<std::uint64_t>(k));
        try {
            out.push_back(sequential_sign_sample(design, basis, p, plan, sub));
        } catch (const NumericalError& e) {
            ++failures;
            std::cerr << "latent_ensemble: skipping member " << k << ": " << e.what() << "\n";
            if (failures > budget) {
                std::ostringstream msg;
                msg << "latent_ensemble: " << failures << " of " << n_samples
                    << " draws degenerate (budget " << budget << "); last: " << e.what();
                throw NumericalError(msg.str());
            }
        }
    }
    return out;
}

}  // namespace latentgp
