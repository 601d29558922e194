#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "latentgp/core_gp.hpp"
#include "latentgp/design.hpp"

namespace latentgp {

// A synthetic two-region problem: a total classification rule over an input
// box plus a generated labelled design. `truth` returns 1 or 2 in the
// problem's own region naming; `region1_label` is the sign stored for
// region-1 points (-1 under the global convention; santner_ring keeps +1, see
// its description).
struct SyntheticProblem {
    std::string name;
    int dimension = 1;
    Eigen::MatrixXd ranges;  // dimension x 2, columns (lo, hi)
    std::function<int(const Eigen::VectorXd&)> truth;  // original units -> 1 | 2
    int region1_label = -1;
    BasisKind default_basis = BasisKind::Linear;
    std::string description;

    int truth_sign(const Eigen::VectorXd& original) const {
        return truth(original) == 1 ? region1_label : -region1_label;
    }
};

struct GeneratedProblem {
    SyntheticProblem problem;
    LabelledDesign design;
};

// Constants of the ring test function: region 1 is the annulus
// c1_sq <= x1^2 + x2^2 <= c2_sq. a and Q parameterize the (unused here)
// real-valued response on the annulus.
struct SantnerParams {
    Eigen::Vector2d a{3.0, 5.0};
    Eigen::Matrix2d Q{{2.0, 1.5}, {1.5, 4.0}};
    double c1_sq = 0.0625;  // 0.25^2
    double c2_sq = 0.5625;  // 0.75^2
};

// 12 fixed points on [0,20]; [0,6] is region 1 (negative), [8,20] region 2
// (positive), nothing inside the (6,8) gap. The scoring rule puts the true
// boundary at the gap midpoint x=7 by convention.
GeneratedProblem step_1d();

// The four gap-adjacent points of step_1d ({4,6} negative, {8,10} positive);
// handy as a minimal two-sided design.
GeneratedProblem step_1d_inner4();

// 20-point Latin hypercube on [-1,7]^2, region 1 where x1 < 3.
GeneratedProblem halfplane_2d(std::uint64_t seed);

// 50-point Latin hypercube on [-1.25,1.25]^2. Region 1 is the annulus
// between the two circles. NOTE the sign flip: this example stores region-1
// (annulus) points as POSITIVE, the opposite of the global region1<->negative
// convention, so that the majority region carries the negative sign as in the
// originating test problem. Exported CSVs therefore show the annulus as
// region 2.
GeneratedProblem santner_ring(std::uint64_t seed);

// 20-point Latin hypercube on [0.1,0.2] x [10,200] (the bistable
// neural-population setup: NKB concentration x firing rate), modelled on a
// [0,1]^2 scale. The real system is a coupled-ODE simulator that is not
// shipped here; the labels come from a documented smooth stand-in boundary
// chosen so the default seed gives exactly 5 region-1 points.
GeneratedProblem kndy_stand_in(std::uint64_t seed);

// Stratified Latin hypercube: each axis is split into n equal bins, one point
// per bin per dimension, uniform jitter within bins.
Eigen::MatrixXd latin_hypercube(int n, const Eigen::MatrixXd& ranges, std::uint64_t seed);

// Demo dispatch by name; throws ArgumentError listing valid names.
GeneratedProblem make_demo(const std::string& name, std::uint64_t seed);
const std::vector<std::string>& demo_names();

}  // namespace latentgp
