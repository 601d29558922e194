#include "latentgp/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "latentgp/normal_dist.hpp"
#include "latentgp/rng.hpp"

namespace latentgp {

namespace {

constexpr double kCoincidentSqDist = 1e-20;  // model-space squared distance

double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw ArgumentError("quantile: empty sample");
    std::sort(v.begin(), v.end());
    const double pos = q * (static_cast<double>(v.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace

EnsemblePredictor::EnsemblePredictor(const LabelledDesign& design, const MeanBasis& basis,
                                     std::vector<LatentSample> ensemble)
    : design_(design), basis_(basis), ensemble_(std::move(ensemble)) {
    if (ensemble_.empty()) throw ArgumentError("EnsemblePredictor: empty ensemble");
    if (basis_.input_dim != design_.dim()) {
        throw ArgumentError("EnsemblePredictor: basis dimension mismatch");
    }

    // Group members by identical parameters so the MAP-sourced default costs
    // one factorization total.
    std::map<std::tuple<double, double, std::string>, int> group_of;
    const Eigen::MatrixXd H = basis_.eval_rows(design_.points());
    members_.resize(ensemble_.size());
    for (std::size_t k = 0; k < ensemble_.size(); ++k) {
        const LatentSample& s = ensemble_[k];
        if (s.values.size() != design_.n()) {
            throw ArgumentError("EnsemblePredictor: member size does not match design");
        }
        std::string beta_key(reinterpret_cast<const char*>(s.params_used.beta.data()),
                             s.params_used.beta.size() * sizeof(double));
        auto key = std::make_tuple(s.params_used.sigma2, s.params_used.delta, std::move(beta_key));
        auto [it, inserted] = group_of.try_emplace(key, static_cast<int>(groups_.size()));
        if (inserted) {
            Group g;
            g.params = s.params_used;
            g.cov = build_cov(design_.points(), s.params_used);
            groups_.push_back(std::move(g));
        }
        const int gi = it->second;
        groups_[gi].members.push_back(static_cast<int>(k));

        Member m;
        m.group = gi;
        m.values = &ensemble_[k].values;
        const Eigen::VectorXd resid = s.values - H * s.params_used.beta;
        const auto& L = groups_[gi].cov.chol_lower;
        Eigen::VectorXd w = L.triangularView<Eigen::Lower>().solve(resid);
        m.alpha = L.transpose().triangularView<Eigen::Upper>().solve(w);
        members_[k] = std::move(m);
    }
}

PredictiveSummary EnsemblePredictor::at_model(const Eigen::VectorXd& model_point) const {
    PredictiveSummary out;
    out.point = design_.scale_info().to_original(model_point);

    // Coincident with a design point: conditioning is exact there, the sign
    // is pinned by the hard constraint, and the label decides the class.
    int coincident = -1;
    for (int i = 0; i < design_.n(); ++i) {
        if ((design_.points().row(i).transpose() - model_point).squaredNorm() <
            kCoincidentSqDist) {
            coincident = i;
            break;
        }
    }
    if (coincident >= 0) {
        double mean = 0.0, m2 = 0.0;
        for (const auto& s : ensemble_) {
            const double v = s.values(coincident);
            mean += v;
            m2 += v * v;
        }
        mean /= n_members();
        const double var = std::max(0.0, m2 / n_members() - mean * mean);
        out.latent_mean = mean;
        out.latent_sd = std::max(std::sqrt(var), 1e-12);
        out.p_region1 = design_.label(coincident) < 0 ? 1.0 : 0.0;
        return out;
    }

    const Eigen::VectorXd h = basis_.eval(model_point);
    double p_sum = 0.0, mean_sum = 0.0, mean_sq = 0.0, var_sum = 0.0;
    for (const auto& g : groups_) {
        const int n = design_.n();
        Eigen::VectorXd r(n);
        for (int i = 0; i < n; ++i) {
            r(i) = g.params.sigma2 *
                   std::exp(-(design_.points().row(i).transpose() - model_point).squaredNorm() /
                            g.params.delta);
        }
        const Eigen::VectorXd w = g.cov.chol_lower.triangularView<Eigen::Lower>().solve(r);
        double s2 = g.params.sigma2 - w.squaredNorm();
        s2 = std::max(s2, 1e-12 * g.params.sigma2);
        const double sd = std::sqrt(s2);
        const double prior_mean = h.dot(g.params.beta);
        for (int k : g.members) {
            const double m = prior_mean + r.dot(members_[k].alpha);
            p_sum += std_normal_cdf(-m / sd);
            mean_sum += m;
            mean_sq += m * m;
            var_sum += s2;
        }
    }
    const double nm = n_members();
    out.p_region1 = p_sum / nm;
    out.latent_mean = mean_sum / nm;
    const double between = std::max(0.0, mean_sq / nm - out.latent_mean * out.latent_mean);
    out.latent_sd = std::sqrt(var_sum / nm + between);
    return out;
}

PredictiveSummary EnsemblePredictor::at_original(const Eigen::VectorXd& original_point) const {
    return at_model(design_.scale_info().to_model(original_point));
}

double EnsemblePredictor::member_mean(int member, const Eigen::VectorXd& model_point) const {
    const Member& m = members_.at(member);
    const Group& g = groups_[m.group];
    const int n = design_.n();
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) {
        r(i) = g.params.sigma2 *
               std::exp(-(design_.points().row(i).transpose() - model_point).squaredNorm() /
                        g.params.delta);
    }
    return basis_.eval(model_point).dot(g.params.beta) + r.dot(m.alpha);
}

Eigen::VectorXd EnsemblePredictor::member_means(const Eigen::VectorXd& model_point) const {
    Eigen::VectorXd out(n_members());
    const Eigen::VectorXd h = basis_.eval(model_point);
    const int n = design_.n();
    Eigen::VectorXd r(n);
    for (const auto& g : groups_) {
        for (int i = 0; i < n; ++i) {
            r(i) = g.params.sigma2 *
                   std::exp(-(design_.points().row(i).transpose() - model_point).squaredNorm() /
                            g.params.delta);
        }
        const double prior_mean = h.dot(g.params.beta);
        for (int k : g.members) out(k) = prior_mean + r.dot(members_[k].alpha);
    }
    return out;
}

std::vector<PredictiveSummary> class_probability(const Eigen::MatrixXd& test_points_original,
                                                 const LabelledDesign& design,
                                                 const MeanBasis& basis,
                                                 const std::vector<LatentSample>& ensemble) {
    const EnsemblePredictor pred(design, basis, ensemble);
    std::vector<PredictiveSummary> out;
    out.reserve(test_points_original.rows());
    for (int i = 0; i < test_points_original.rows(); ++i) {
        out.push_back(pred.at_original(test_points_original.row(i).transpose()));
    }
    return out;
}

BoundaryEstimate boundary_1d(const LabelledDesign& design, const MeanBasis& basis,
                             const std::vector<LatentSample>& ensemble,
                             std::pair<double, double> search_interval_original) {
    if (design.dim() != 1) throw ArgumentError("boundary_1d: design must be one-dimensional");
    const EnsemblePredictor pred(design, basis, ensemble);
    const ScaleInfo& sc = design.scale_info();

    const auto to_model = [&](double x) {
        Eigen::VectorXd v(1);
        v(0) = x;
        return sc.to_model(v)(0);
    };
    const auto to_original = [&](double m) {
        Eigen::VectorXd v(1);
        v(0) = m;
        return sc.to_original(v)(0);
    };
    const auto p_at = [&](double model_x) {
        Eigen::VectorXd v(1);
        v(0) = model_x;
        return pred.at_model(v).p_region1;
    };

    double a = to_model(search_interval_original.first);
    double b = to_model(search_interval_original.second);
    if (a > b) std::swap(a, b);
    const double fa = p_at(a) - 0.5, fb = p_at(b) - 0.5;
    if (fa == 0.0 && fb == 0.0) {
        throw ArgumentError("boundary_1d: p_region1 is flat at 0.5 on the interval");
    }
    if (fa * fb > 0.0) {
        std::ostringstream msg;
        msg << "boundary_1d: p_region1 does not cross 0.5 on ["
            << search_interval_original.first << ", " << search_interval_original.second << "]";
        throw ArgumentError(msg.str());
    }

    const auto bisect = [](auto f, double lo, double hi, double f_lo) {
        for (int it = 0; it < 200 && hi - lo > 1e-4; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if (fm == 0.0) return mid;
            if ((f_lo < 0.0) == (fm < 0.0)) {
                lo = mid;
                f_lo = fm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };

    BoundaryEstimate out;
    out.dimension = 1;
    out.root = to_original(bisect([&](double x) { return p_at(x) - 0.5; }, a, b, fa));

    // Per-member latent zero crossings for the credible interval.
    std::vector<double> roots;
    Eigen::VectorXd va(1), vb(1);
    va(0) = a;
    vb(0) = b;
    const Eigen::VectorXd ma = pred.member_means(va), mb = pred.member_means(vb);
    for (int k = 0; k < pred.n_members(); ++k) {
        if (ma(k) == 0.0) {
            roots.push_back(to_original(a));
            continue;
        }
        if (ma(k) * mb(k) > 0.0) continue;  // no crossing for this member
        const double r = bisect([&](double x) {
            Eigen::VectorXd v(1);
            v(0) = x;
            return pred.member_mean(k, v);
        }, a, b, ma(k));
        roots.push_back(to_original(r));
    }
    if (roots.empty()) {
        out.credible_interval = {out.root, out.root};
    } else {
        out.credible_interval = {quantile(roots, 0.025), quantile(roots, 0.975)};
    }
    return out;
}

SummaryGrid predict_grid_2d(const LabelledDesign& design, const MeanBasis& basis,
                            const std::vector<LatentSample>& ensemble, int resolution,
                            const Eigen::MatrixXd& box_original) {
    if (design.dim() != 2) throw ArgumentError("predict_grid_2d: design must be two-dimensional");
    if (resolution < 2) throw ArgumentError("predict_grid_2d: resolution must be >= 2");
    if (box_original.rows() != 2 || box_original.cols() != 2) {
        throw ArgumentError("predict_grid_2d: box must be 2 x 2");
    }
    const EnsemblePredictor pred(design, basis, ensemble);

    SummaryGrid grid;
    grid.x1.setLinSpaced(resolution, box_original(0, 0), box_original(0, 1));
    grid.x2.setLinSpaced(resolution, box_original(1, 0), box_original(1, 1));
    grid.p_region1.resize(resolution, resolution);
    grid.latent_mean.resize(resolution, resolution);
    grid.latent_sd.resize(resolution, resolution);
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            Eigen::VectorXd x(2);
            x << grid.x1(i), grid.x2(j);
            const PredictiveSummary s = pred.at_original(x);
            grid.p_region1(i, j) = s.p_region1;
            grid.latent_mean(i, j) = s.latent_mean;
            grid.latent_sd(i, j) = s.latent_sd;
        }
    }
    return grid;
}

namespace {

// Grid edge identifiers for marching-squares stitching: a crossing vertex
// lives on exactly one lattice edge.
struct EdgeKey {
    int i, j;
    bool horizontal;  // true: edge from (i,j) to (i+1,j); false: to (i,j+1)
    bool operator<(const EdgeKey& o) const {
        return std::tie(i, j, horizontal) < std::tie(o.i, o.j, o.horizontal);
    }
};

struct Segment {
    EdgeKey a, b;
};

Eigen::Vector2d edge_point(const SummaryGrid& g, const Eigen::MatrixXd& f, const EdgeKey& e) {
    const double f0 = f(e.i, e.j);
    const double f1 = e.horizontal ? f(e.i + 1, e.j) : f(e.i, e.j + 1);
    double t = f0 / (f0 - f1);
    if (!std::isfinite(t)) t = 0.5;
    t = std::clamp(t, 0.0, 1.0);
    if (e.horizontal) {
        const double x = g.x1(e.i) + t * (g.x1(e.i + 1) - g.x1(e.i));
        return {x, g.x2(e.j)};
    }
    const double y = g.x2(e.j) + t * (g.x2(e.j + 1) - g.x2(e.j));
    return {g.x1(e.i), y};
}

}  // namespace

BoundaryEstimate boundary_contour_2d(const SummaryGrid& grid) {
    const int n1 = static_cast<int>(grid.x1.size());
    const int n2 = static_cast<int>(grid.x2.size());
    if (n1 < 2 || n2 < 2) throw ArgumentError("boundary_contour_2d: grid must be at least 2x2");

    const Eigen::MatrixXd f = grid.p_region1.array() - 0.5;
    std::vector<Segment> segments;

    for (int i = 0; i + 1 < n1; ++i) {
        for (int j = 0; j + 1 < n2; ++j) {
            const bool b00 = f(i, j) > 0.0;
            const bool b10 = f(i + 1, j) > 0.0;
            const bool b11 = f(i + 1, j + 1) > 0.0;
            const bool b01 = f(i, j + 1) > 0.0;
            const int code = (b00 ? 1 : 0) | (b10 ? 2 : 0) | (b11 ? 4 : 0) | (b01 ? 8 : 0);
            if (code == 0 || code == 15) continue;

            const EdgeKey bottom{i, j, true};
            const EdgeKey top{i, j + 1, true};
            const EdgeKey left{i, j, false};
            const EdgeKey right{i + 1, j, false};

            switch (code) {
                case 1: case 14: segments.push_back({bottom, left}); break;
                case 2: case 13: segments.push_back({bottom, right}); break;
                case 4: case 11: segments.push_back({right, top}); break;
                case 8: case 7: segments.push_back({top, left}); break;
                case 3: case 12: segments.push_back({left, right}); break;
                case 6: case 9: segments.push_back({bottom, top}); break;
                case 5: case 10: {
                    // Saddle: resolve with the cell-centre average.
                    const double centre =
                        0.25 * (f(i, j) + f(i + 1, j) + f(i, j + 1) + f(i + 1, j + 1));
                    const bool centre_in = centre > 0.0;
                    if ((code == 5) == centre_in) {
                        segments.push_back({bottom, right});
                        segments.push_back({top, left});
                    } else {
                        segments.push_back({bottom, left});
                        segments.push_back({right, top});
                    }
                    break;
                }
                default: break;
            }
        }
    }

    BoundaryEstimate out;
    out.dimension = 2;
    if (segments.empty()) return out;

    // Stitch segments into chains via shared lattice edges.
    std::multimap<EdgeKey, int> by_edge;
    for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
        by_edge.emplace(segments[s].a, s);
        by_edge.emplace(segments[s].b, s);
    }
    std::vector<bool> used(segments.size(), false);

    const auto walk = [&](int start, const EdgeKey& start_edge) {
        std::vector<EdgeKey> chain;
        chain.push_back(start_edge);
        int seg = start;
        EdgeKey cur = start_edge;
        for (;;) {
            used[seg] = true;
            const EdgeKey next =
                (segments[seg].a < cur || cur < segments[seg].a) ? segments[seg].a
                                                                 : segments[seg].b;
            chain.push_back(next);
            int cont = -1;
            auto [lo, hi] = by_edge.equal_range(next);
            for (auto it = lo; it != hi; ++it) {
                if (!used[it->second]) {
                    cont = it->second;
                    break;
                }
            }
            if (cont < 0) break;
            seg = cont;
            cur = next;
        }
        return chain;
    };

    const auto edge_degree = [&](const EdgeKey& e) {
        int deg = 0;
        auto [lo, hi] = by_edge.equal_range(e);
        for (auto it = lo; it != hi; ++it) ++deg;
        return deg;
    };

    // Open chains first (their endpoints touch the grid border), then loops.
    for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
        if (used[s]) continue;
        EdgeKey start = segments[s].a;
        if (edge_degree(segments[s].a) != 1 && edge_degree(segments[s].b) == 1) {
            start = segments[s].b;
        }
        if (edge_degree(start) != 1) continue;  // part of a loop, handled below
        const auto chain = walk(s, start);
        std::vector<Eigen::Vector2d> poly;
        poly.reserve(chain.size());
        for (const auto& e : chain) poly.push_back(edge_point(grid, f, e));
        out.polylines.push_back(std::move(poly));
        out.closed.push_back(false);
    }
    for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
        if (used[s]) continue;
        const auto chain = walk(s, segments[s].a);
        std::vector<Eigen::Vector2d> poly;
        poly.reserve(chain.size());
        for (const auto& e : chain) poly.push_back(edge_point(grid, f, e));
        out.polylines.push_back(std::move(poly));
        out.closed.push_back(true);
    }
    return out;
}

MisclassificationReport loo_from_params(const LabelledDesign& design, const MeanBasis& basis,
                                        const GpParams& params, int n_resamples,
                                        std::uint64_t seed) {
    if (design.n() < 3) throw ArgumentError("loo_from_params: need at least 3 points");
    if (n_resamples < 1) throw ArgumentError("loo_from_params: n_resamples must be >= 1");

    MisclassificationReport report;
    report.n_resamples = n_resamples;
    report.per_point_rate.resize(design.n());

    for (int i = 0; i < design.n(); ++i) {
        const LabelledDesign fold = design.without_point(i);
        const auto ensemble =
            latent_ensemble(fold, basis, {params}, n_resamples,
                            substream_seed(seed, Stream::Loo, static_cast<std::uint64_t>(i)));
        const EnsemblePredictor pred(fold, basis, ensemble);
        const Eigen::VectorXd means = pred.member_means(design.point(i));
        int wrong = 0;
        for (int k = 0; k < means.size(); ++k) {
            const int predicted = means(k) < 0.0 ? -1 : 1;
            if (predicted != design.label(i)) ++wrong;
        }
        report.per_point_rate(i) =
            means.size() > 0 ? static_cast<double>(wrong) / static_cast<double>(means.size()) : 0.0;
    }
    return report;
}

MisclassificationReport loo_misclassification(const LabelledDesign& design, const MeanBasis& basis,
                                              const PriorSpec& priors, const MhConfig& config,
                                              int n_resamples, bool refit_per_fold) {
    if (design.n() < 3) throw ArgumentError("loo_misclassification: need at least 3 points");
    if (!refit_per_fold) {
        const Chain chain = mh_run(design, basis, priors, config);
        return loo_from_params(design, basis, map_estimate(chain), n_resamples,
                               substream_seed(config.seed, Stream::Loo));
    }

    MisclassificationReport report;
    report.n_resamples = n_resamples;
    report.per_point_rate.resize(design.n());
    for (int i = 0; i < design.n(); ++i) {
        const LabelledDesign fold = design.without_point(i);
        MhConfig fold_config = config;
        fold_config.seed = substream_seed(config.seed, Stream::Fit, static_cast<std::uint64_t>(i));
        const Chain chain = mh_run(fold, basis, priors, fold_config);
        const auto ensemble = latent_ensemble(
            fold, basis, {map_estimate(chain)}, n_resamples,
            substream_seed(config.seed, Stream::Loo, static_cast<std::uint64_t>(i)));
        const EnsemblePredictor pred(fold, basis, ensemble);
        const Eigen::VectorXd means = pred.member_means(design.point(i));
        int wrong = 0;
        for (int k = 0; k < means.size(); ++k) {
            if ((means(k) < 0.0 ? -1 : 1) != design.label(i)) ++wrong;
        }
        report.per_point_rate(i) =
            means.size() > 0 ? static_cast<double>(wrong) / static_cast<double>(means.size()) : 0.0;
    }
    return report;
}

std::pair<LabelledDesign, InputTransform> transform_inputs(const LabelledDesign& design,
                                                           double approx_boundary_original) {
    if (design.dim() != 1) throw ArgumentError("transform_inputs: only 1d designs supported");
    const Eigen::MatrixXd orig = design.original_points();
    const double lo = orig.col(0).minCoeff(), hi = orig.col(0).maxCoeff();
    if (!(approx_boundary_original > lo && approx_boundary_original < hi)) {
        throw ArgumentError("transform_inputs: boundary location must lie inside the input range");
    }
    InputTransform tr{approx_boundary_original};
    ScaleInfo sc;
    sc.offset = Eigen::VectorXd::Constant(1, tr.shift);
    sc.scale = Eigen::VectorXd::Ones(1);
    Eigen::MatrixXd shifted = (orig.array() - tr.shift).matrix();
    return {LabelledDesign(std::move(shifted), design.labels(), sc), tr};
}

}  // namespace latentgp
