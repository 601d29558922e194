#pragma once

#include <Eigen/Dense>
#include <vector>

#include "latentgp/common.hpp"

namespace latentgp {

// Per-dimension affine map between original units and the model's working
// coordinates: original = offset + scale .* model.
struct ScaleInfo {
    Eigen::VectorXd offset;
    Eigen::VectorXd scale;

    static ScaleInfo identity(int dim);

    int dim() const { return static_cast<int>(offset.size()); }
    Eigen::VectorXd to_model(const Eigen::VectorXd& original) const;
    Eigen::VectorXd to_original(const Eigen::VectorXd& model) const;
    Eigen::MatrixXd rows_to_model(const Eigen::MatrixXd& original) const;
    Eigen::MatrixXd rows_to_original(const Eigen::MatrixXd& model) const;
};

// Input points with their +-1 region labels; the only training data the model
// ever sees. Global sign convention: region 1 <-> negative, region 2 <->
// positive. Points are held in model space (the unit box for designs built
// from raw data); scale_info maps back to original units for reporting.
class LabelledDesign {
public:
    LabelledDesign(Eigen::MatrixXd model_points, Eigen::VectorXi labels, ScaleInfo scale);

    // Scales each dimension of the raw data onto [0,1] using its own hull.
    static LabelledDesign from_original(const Eigen::MatrixXd& points,
                                        const Eigen::VectorXi& labels);

    int n() const { return static_cast<int>(points_.rows()); }
    int dim() const { return static_cast<int>(points_.cols()); }
    const Eigen::MatrixXd& points() const { return points_; }
    Eigen::VectorXd point(int i) const { return points_.row(i); }
    Eigen::MatrixXd original_points() const { return scale_.rows_to_original(points_); }
    int label(int i) const { return labels_(i); }
    const Eigen::VectorXi& labels() const { return labels_; }
    const ScaleInfo& scale_info() const { return scale_; }

    // All labels share one sign: legal, but boundary estimation is moot.
    bool single_class() const { return single_class_; }

    LabelledDesign without_point(int drop) const;

private:
    Eigen::MatrixXd points_;
    Eigen::VectorXi labels_;
    ScaleInfo scale_;
    bool single_class_ = false;
};

}  // namespace latentgp
