#include "latentgp/core_gp.hpp"

#include <cmath>
#include <sstream>

namespace latentgp {

Eigen::VectorXd MeanBasis::eval(const Eigen::VectorXd& x) const {
    if (x.size() != input_dim) {
        throw ArgumentError("MeanBasis::eval: point dimension mismatch");
    }
    Eigen::VectorXd h(output_dim());
    h(0) = 1.0;
    if (kind == BasisKind::Linear) h.tail(input_dim) = x;
    return h;
}

Eigen::MatrixXd MeanBasis::eval_rows(const Eigen::MatrixXd& points) const {
    if (points.cols() != input_dim) {
        throw ArgumentError("MeanBasis::eval_rows: point dimension mismatch");
    }
    Eigen::MatrixXd H(points.rows(), output_dim());
    H.col(0).setOnes();
    if (kind == BasisKind::Linear) H.rightCols(input_dim) = points;
    return H;
}

void GpParams::validate(int basis_output_dim) const {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw ArgumentError("GpParams: sigma2 must be positive and finite");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw ArgumentError("GpParams: delta must be positive and finite");
    }
    if (beta.size() != basis_output_dim) {
        throw ArgumentError("GpParams: beta length does not match the basis output dimension");
    }
}

double sq_exp_corr(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double delta) {
    if (a.size() != b.size()) throw ArgumentError("sq_exp_corr: dimension mismatch");
    if (!(delta > 0.0)) throw ArgumentError("sq_exp_corr: delta must be positive");
    return std::exp(-(a - b).squaredNorm() / delta);
}

Eigen::VectorXd mean_vector(const Eigen::MatrixXd& points, const MeanBasis& basis,
                            const Eigen::VectorXd& beta) {
    if (beta.size() != basis.output_dim()) {
        throw ArgumentError("mean_vector: beta length does not match the basis output dimension");
    }
    return basis.eval_rows(points) * beta;
}

Eigen::MatrixXd sq_dist_matrix(const Eigen::MatrixXd& points) {
    const int n = static_cast<int>(points.rows());
    Eigen::MatrixXd d2(n, n);
    for (int i = 0; i < n; ++i) {
        d2(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            const double v = (points.row(i) - points.row(j)).squaredNorm();
            d2(i, j) = v;
            d2(j, i) = v;
        }
    }
    return d2;
}

namespace {

// A "successful" LLT with non-finite or non-positive pivots is still a
// failure for our purposes.
bool try_cholesky(const Eigen::MatrixXd& m, Eigen::MatrixXd& lower) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) return false;
    lower = llt.matrixL();
    for (int i = 0; i < lower.rows(); ++i) {
        if (!(lower(i, i) > 0.0) || !std::isfinite(lower(i, i))) return false;
    }
    return true;
}

}  // namespace

CovMatrix build_cov_from_sqdist(const Eigen::MatrixXd& sq_dist, const GpParams& params,
                                double jitter) {
    if (sq_dist.rows() != sq_dist.cols() || sq_dist.rows() < 1) {
        throw ArgumentError("build_cov: need a square distance matrix with n >= 1");
    }
    if (!(params.sigma2 > 0.0) || !(params.delta > 0.0)) {
        throw ArgumentError("build_cov: sigma2 and delta must be positive");
    }
    const int n = static_cast<int>(sq_dist.rows());
    CovMatrix cov;
    cov.m = params.sigma2 * (-sq_dist / params.delta).array().exp().matrix();

    double j = jitter >= 0.0 ? jitter : 1e-8 * params.sigma2;
    const double j_max = 1e-4 * params.sigma2;
    for (;;) {
        cov.jitter = j;
        if (j > 0.0) {
            Eigen::MatrixXd jm = cov.m;
            jm.diagonal().array() += j;
            if (try_cholesky(jm, cov.chol_lower)) {
                cov.m = std::move(jm);
                return cov;
            }
        } else if (try_cholesky(cov.m, cov.chol_lower)) {
            return cov;
        }
        if (j >= j_max) {
            std::ostringstream msg;
            msg << "build_cov: covariance (n=" << n << ", sigma2=" << params.sigma2
                << ", delta=" << params.delta << ") not positive definite; final jitter tried "
                << j;
            throw NumericalError(msg.str());
        }
        j = j > 0.0 ? j * 10.0 : 1e-8 * params.sigma2;
        if (j > j_max) j = j_max;
    }
}

CovMatrix build_cov(const Eigen::MatrixXd& points, const GpParams& params, double jitter) {
    return build_cov_from_sqdist(sq_dist_matrix(points), params, jitter);
}

ConditionalNormal conditional_normal(const Eigen::VectorXd& joint_mean,
                                     const Eigen::MatrixXd& joint_cov,
                                     const std::vector<int>& observed_idx,
                                     const Eigen::VectorXd& observed_vals,
                                     const std::vector<int>& target_idx) {
    const int n = static_cast<int>(joint_mean.size());
    if (joint_cov.rows() != n || joint_cov.cols() != n) {
        throw ArgumentError("conditional_normal: mean/covariance size mismatch");
    }
    if (static_cast<int>(observed_idx.size()) != observed_vals.size()) {
        throw ArgumentError("conditional_normal: observed index/value size mismatch");
    }
    std::vector<char> seen(n, 0);
    for (int i : observed_idx) {
        if (i < 0 || i >= n) throw ArgumentError("conditional_normal: observed index out of range");
        seen[i] = 1;
    }
    for (int i : target_idx) {
        if (i < 0 || i >= n) throw ArgumentError("conditional_normal: target index out of range");
        if (seen[i]) throw ArgumentError("conditional_normal: index sets must be disjoint");
    }

    const int no = static_cast<int>(observed_idx.size());
    const int nt = static_cast<int>(target_idx.size());
    ConditionalNormal out;
    if (no == 0) {
        out.mean.resize(nt);
        out.cov.resize(nt, nt);
        for (int a = 0; a < nt; ++a) {
            out.mean(a) = joint_mean(target_idx[a]);
            for (int b = 0; b < nt; ++b) out.cov(a, b) = joint_cov(target_idx[a], target_idx[b]);
        }
        return out;
    }

    Eigen::MatrixXd S_oo(no, no), S_to(nt, no), S_tt(nt, nt);
    Eigen::VectorXd mu_o(no), mu_t(nt);
    for (int a = 0; a < no; ++a) {
        mu_o(a) = joint_mean(observed_idx[a]);
        for (int b = 0; b < no; ++b) S_oo(a, b) = joint_cov(observed_idx[a], observed_idx[b]);
    }
    for (int a = 0; a < nt; ++a) {
        mu_t(a) = joint_mean(target_idx[a]);
        for (int b = 0; b < no; ++b) S_to(a, b) = joint_cov(target_idx[a], observed_idx[b]);
        for (int b = 0; b < nt; ++b) S_tt(a, b) = joint_cov(target_idx[a], target_idx[b]);
    }

    Eigen::LLT<Eigen::MatrixXd> llt(S_oo);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("conditional_normal: observed covariance block is singular");
    }
    const Eigen::MatrixXd w = llt.solve(S_to.transpose());  // S_oo^-1 S_ot
    out.mean = mu_t + S_to * llt.solve(observed_vals - mu_o);
    out.cov = S_tt - S_to * w;
    // Schur complement is PSD in exact arithmetic; scrub rounding noise.
    for (int a = 0; a < nt; ++a) {
        if (out.cov(a, a) < 0.0) out.cov(a, a) = 0.0;
    }
    return out;
}

SequentialGaussian::SequentialGaussian(Eigen::VectorXd mean, const CovMatrix& cov)
    : mean_(std::move(mean)), L_(cov.chol_lower), z_(Eigen::VectorXd::Zero(mean_.size())) {
    if (L_.rows() != mean_.size()) {
        throw ArgumentError("SequentialGaussian: mean/covariance size mismatch");
    }
}

std::pair<double, double> SequentialGaussian::next_conditional() const {
    if (step_ >= size()) throw ArgumentError("SequentialGaussian: walk already complete");
    double m = mean_(step_);
    for (int k = 0; k < step_; ++k) m += L_(step_, k) * z_(k);
    return {m, L_(step_, step_)};
}

void SequentialGaussian::fix(double value) {
    const auto [m, sd] = next_conditional();
    z_(step_) = (value - m) / sd;
    ++step_;
}

}  // namespace latentgp
