#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "latentgp/inference.hpp"
#include "latentgp/latent_sampler.hpp"

namespace latentgp {

// Per-test-point summary. p_region1 is the probability the latent process is
// negative there (region 1 under the global convention), averaged over the
// ensemble: mean over members of Phi(-m*/s*). latent_mean is the ensemble
// mean of the conditional means, latent_sd the total within+between spread.
struct PredictiveSummary {
    Eigen::VectorXd point;  // original units
    double latent_mean = 0.0;
    double latent_sd = 0.0;
    double p_region1 = 0.0;
};

// Conditions the GP on each ensemble member's latent values. Members sharing
// identical parameters (the fixed-MAP default) share one factorization.
class EnsemblePredictor {
public:
    EnsemblePredictor(const LabelledDesign& design, const MeanBasis& basis,
                      std::vector<LatentSample> ensemble);

    int n_members() const { return static_cast<int>(members_.size()); }
    const LabelledDesign& design() const { return design_; }

    PredictiveSummary at_model(const Eigen::VectorXd& model_point) const;
    PredictiveSummary at_original(const Eigen::VectorXd& original_point) const;

    // Conditional mean of one member's process at a model-space point.
    double member_mean(int member, const Eigen::VectorXd& model_point) const;

    // Means of every member at one point (cheaper than repeated member_mean).
    Eigen::VectorXd member_means(const Eigen::VectorXd& model_point) const;

private:
    struct Group {
        GpParams params;
        CovMatrix cov;
        std::vector<int> members;
    };
    struct Member {
        int group = 0;
        Eigen::VectorXd alpha;  // C^-1 (eta - H beta)
        const Eigen::VectorXd* values = nullptr;
    };

    LabelledDesign design_;
    MeanBasis basis_;
    std::vector<LatentSample> ensemble_;
    std::vector<Group> groups_;
    std::vector<Member> members_;
};

std::vector<PredictiveSummary> class_probability(const Eigen::MatrixXd& test_points_original,
                                                 const LabelledDesign& design,
                                                 const MeanBasis& basis,
                                                 const std::vector<LatentSample>& ensemble);

// Boundary between the regions: in 1d the root of p_region1 = 0.5 with a
// credible interval from per-member latent zero crossings; in 2d the 0.5
// level set of the probability field as polylines. Coordinates are original
// units.
struct BoundaryEstimate {
    int dimension = 1;
    double root = 0.0;
    std::pair<double, double> credible_interval{0.0, 0.0};
    std::vector<std::vector<Eigen::Vector2d>> polylines;
    std::vector<bool> closed;  // per polyline
};

// Bisection of p_region1(x) - 0.5 over the interval (original units) to 1e-4
// absolute in scaled x; the credible interval is the 2.5%/97.5% quantiles of
// per-member roots. Throws ArgumentError naming the interval if p_region1
// does not cross 0.5 on it.
BoundaryEstimate boundary_1d(const LabelledDesign& design, const MeanBasis& basis,
                             const std::vector<LatentSample>& ensemble,
                             std::pair<double, double> search_interval_original);

// Regular lattice of predictive summaries over a 2d box.
struct SummaryGrid {
    Eigen::VectorXd x1;         // axis coordinates, original units
    Eigen::VectorXd x2;
    Eigen::MatrixXd p_region1;  // (x1.size() x x2.size())
    Eigen::MatrixXd latent_mean;
    Eigen::MatrixXd latent_sd;
};

SummaryGrid predict_grid_2d(const LabelledDesign& design, const MeanBasis& basis,
                            const std::vector<LatentSample>& ensemble, int resolution,
                            const Eigen::MatrixXd& box_original);

// Marching squares on the 0.5 level of p_region1. Saddle cells are
// disambiguated by the cell-centre average. Vertices sit on grid cell edges;
// chains are merged into open or closed polylines.
BoundaryEstimate boundary_contour_2d(const SummaryGrid& grid);

// Leave-one-out misclassification: for each point, draw latent ensembles over
// the remaining points and count the fraction of members whose conditional
// mean at the held-out point carries the wrong sign.
struct MisclassificationReport {
    Eigen::VectorXd per_point_rate;
    int n_resamples = 0;
};

// Full pipeline variant per the module contract: fits once on the full design
// (or refits per fold when refit_per_fold is set -- affordable only for small
// n) and then scores every fold.
MisclassificationReport loo_misclassification(const LabelledDesign& design, const MeanBasis& basis,
                                              const PriorSpec& priors, const MhConfig& config,
                                              int n_resamples, bool refit_per_fold = false);

// Scoring against fixed parameters (e.g. a stored MAP estimate).
MisclassificationReport loo_from_params(const LabelledDesign& design, const MeanBasis& basis,
                                        const GpParams& params, int n_resamples,
                                        std::uint64_t seed);

// 1d input shift placing an approximate boundary location at zero, so a tight
// prior on the linear-mean intercept expresses "the latent crosses zero at
// the boundary". The returned design works in shifted original units
// (scale 1); the record inverts reported boundaries.
struct InputTransform {
    double shift = 0.0;
    double to_transformed(double original) const { return original - shift; }
    double to_original(double transformed) const { return transformed + shift; }
};

std::pair<LabelledDesign, InputTransform> transform_inputs(const LabelledDesign& design,
                                                           double approx_boundary_original);

}  // namespace latentgp
