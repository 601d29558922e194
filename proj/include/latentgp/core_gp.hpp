#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "latentgp/common.hpp"

namespace latentgp {

// Mean basis h(x): Constant -> [1], Linear -> [1, x_1, ..., x_d].
enum class BasisKind { Constant, Linear };

struct MeanBasis {
    BasisKind kind = BasisKind::Linear;
    int input_dim = 1;

    int output_dim() const { return kind == BasisKind::Constant ? 1 : input_dim + 1; }
    Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
    // One row h(x_i)^T per point.
    Eigen::MatrixXd eval_rows(const Eigen::MatrixXd& points) const;
};

// theta = (beta, sigma2, delta). delta is in squared-distance units:
// corr(a,b) = exp(-|a-b|^2 / delta), exactly this parameterization (no /2,
// delta not squared -- other conventions exist, this library uses this one).
struct GpParams {
    Eigen::VectorXd beta;
    double sigma2 = 1.0;
    double delta = 1.0;

    void validate(int basis_output_dim) const;
};

double sq_exp_corr(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double delta);

// Entry i of the result is h(points.row(i))^T beta.
Eigen::VectorXd mean_vector(const Eigen::MatrixXd& points, const MeanBasis& basis,
                            const Eigen::VectorXd& beta);

// Pairwise squared Euclidean distances; reusable across repeated covariance
// builds with different parameters.
Eigen::MatrixXd sq_dist_matrix(const Eigen::MatrixXd& points);

// sigma2 * corr + jitter * I, with the lower Cholesky factor attached.
struct CovMatrix {
    Eigen::MatrixXd m;
    double jitter = 0.0;
    Eigen::MatrixXd chol_lower;
};

// jitter < 0 requests the default starting value 1e-8*sigma2. If the matrix
// does not factor at the requested jitter it is escalated x10 at a time up to
// 1e-4*sigma2 before a NumericalError reports the last value tried.
CovMatrix build_cov(const Eigen::MatrixXd& points, const GpParams& params, double jitter = -1.0);
CovMatrix build_cov_from_sqdist(const Eigen::MatrixXd& sq_dist, const GpParams& params,
                                double jitter = -1.0);

// Gaussian conditioning:
//   E[t|o]   = E[t] + S_to S_oo^-1 (o - E[o])
//   var[t|o] = S_tt - S_to S_oo^-1 S_ot
struct ConditionalNormal {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

ConditionalNormal conditional_normal(const Eigen::VectorXd& joint_mean,
                                     const Eigen::MatrixXd& joint_cov,
                                     const std::vector<int>& observed_idx,
                                     const Eigen::VectorXd& observed_vals,
                                     const std::vector<int>& target_idx);

// Walks a joint Gaussian one coordinate at a time in storage order.
// next_conditional() is the exact univariate conditional of the current
// coordinate given all values fixed so far -- the same distribution repeated
// conditional_normal calls would give, but O(n) per step off one Cholesky
// factor. fix() pins the coordinate and advances.
class SequentialGaussian {
public:
    SequentialGaussian(Eigen::VectorXd mean, const CovMatrix& cov);

    int size() const { return static_cast<int>(mean_.size()); }
    int step() const { return step_; }
    bool done() const { return step_ >= size(); }
    std::pair<double, double> next_conditional() const;  // (mean, sd)
    void fix(double value);
    void reset() { step_ = 0; }

private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd L_;
    Eigen::VectorXd z_;
    int step_ = 0;
};

}  // namespace latentgp
