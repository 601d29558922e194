#include "latentgp/design.hpp"

#include <cmath>
#include <sstream>

namespace latentgp {

ScaleInfo ScaleInfo::identity(int dim) {
    return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
}

Eigen::VectorXd ScaleInfo::to_model(const Eigen::VectorXd& original) const {
    return ((original - offset).array() / scale.array()).matrix();
}

Eigen::VectorXd ScaleInfo::to_original(const Eigen::VectorXd& model) const {
    return offset + (model.array() * scale.array()).matrix();
}

Eigen::MatrixXd ScaleInfo::rows_to_model(const Eigen::MatrixXd& original) const {
    Eigen::MatrixXd out(original.rows(), original.cols());
    for (int i = 0; i < original.rows(); ++i) {
        out.row(i) = to_model(original.row(i).transpose()).transpose();
    }
    return out;
}

Eigen::MatrixXd ScaleInfo::rows_to_original(const Eigen::MatrixXd& model) const {
    Eigen::MatrixXd out(model.rows(), model.cols());
    for (int i = 0; i < model.rows(); ++i) {
        out.row(i) = to_original(model.row(i).transpose()).transpose();
    }
    return out;
}

LabelledDesign::LabelledDesign(Eigen::MatrixXd model_points, Eigen::VectorXi labels,
                               ScaleInfo scale)
    : points_(std::move(model_points)), labels_(std::move(labels)), scale_(std::move(scale)) {
    const int n = static_cast<int>(points_.rows());
    const int d = static_cast<int>(points_.cols());
    if (n < 1 || d < 1) throw ArgumentError("LabelledDesign: need n >= 1 points with d >= 1");
    if (labels_.size() != n) throw ArgumentError("LabelledDesign: label/point count mismatch");
    if (scale_.dim() != d) throw ArgumentError("LabelledDesign: scale dimension mismatch");
    if (!points_.allFinite()) throw ArgumentError("LabelledDesign: coordinates must be finite");

    bool saw_neg = false, saw_pos = false;
    for (int i = 0; i < n; ++i) {
        if (labels_(i) != 1 && labels_(i) != -1) {
            throw ArgumentError("LabelledDesign: labels must be +1 or -1");
        }
        (labels_(i) < 0 ? saw_neg : saw_pos) = true;
    }
    single_class_ = !(saw_neg && saw_pos);

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (labels_(i) != labels_(j) && points_.row(i) == points_.row(j)) {
                std::ostringstream msg;
                msg << "LabelledDesign: points " << i << " and " << j
                    << " are identical but carry opposite labels";
                throw ArgumentError(msg.str());
            }
        }
    }
}

LabelledDesign LabelledDesign::from_original(const Eigen::MatrixXd& points,
                                             const Eigen::VectorXi& labels) {
    if (points.rows() < 1) throw ArgumentError("LabelledDesign: need at least one point");
    const int d = static_cast<int>(points.cols());
    ScaleInfo s;
    s.offset = points.colwise().minCoeff();
    s.scale.resize(d);
    const Eigen::VectorXd hi = points.colwise().maxCoeff();
    for (int k = 0; k < d; ++k) {
        const double range = hi(k) - s.offset(k);
        s.scale(k) = range > 0.0 ? range : 1.0;  // degenerate dimension: keep offset only
    }
    return LabelledDesign(s.rows_to_model(points), labels, s);
}

LabelledDesign LabelledDesign::without_point(int drop) const {
    if (drop < 0 || drop >= n()) throw ArgumentError("LabelledDesign: drop index out of range");
    if (n() < 2) throw ArgumentError("LabelledDesign: cannot drop the only point");
    Eigen::MatrixXd pts(n() - 1, dim());
    Eigen::VectorXi lbl(n() - 1);
    int r = 0;
    for (int i = 0; i < n(); ++i) {
        if (i == drop) continue;
        pts.row(r) = points_.row(i);
        lbl(r) = labels_(i);
        ++r;
    }
    return LabelledDesign(std::move(pts), std::move(lbl), scale_);
}

}  // namespace latentgp
