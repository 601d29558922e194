#include "latentgp/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latentgp/latent_sampler.hpp"
#include "latentgp/normal_dist.hpp"
#include "latentgp/rng.hpp"

namespace latentgp {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093453;
}  // namespace

void PriorSpec::validate(int basis_output_dim) const {
    if (beta_mean.size() != basis_output_dim || beta_sd.size() != basis_output_dim) {
        throw ArgumentError("PriorSpec: beta prior length does not match the basis");
    }
    if ((beta_sd.array() <= 0.0).any()) throw ArgumentError("PriorSpec: beta_sd must be positive");
    for (double v : {sigma2_shape, sigma2_scale, delta_shape, delta_scale}) {
        if (!(v > 0.0)) throw ArgumentError("PriorSpec: shapes and scales must be positive");
    }
}

double median_sq_interpoint_distance(const LabelledDesign& design) {
    const int n = design.n();
    std::vector<double> d2;
    d2.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            d2.push_back((design.points().row(i) - design.points().row(j)).squaredNorm());
        }
    }
    if (d2.empty()) return 1.0;
    std::sort(d2.begin(), d2.end());
    const std::size_t m = d2.size();
    const double med = (m % 2 == 1) ? d2[m / 2] : 0.5 * (d2[m / 2 - 1] + d2[m / 2]);
    return med > 0.0 ? med : 1.0;
}

PriorSpec default_priors(const LabelledDesign& design, const MeanBasis& basis,
                         bool intercept_tight) {
    PriorSpec p;
    const int dim = basis.output_dim();
    p.beta_mean = Eigen::VectorXd::Zero(dim);
    p.beta_sd = Eigen::VectorXd::Constant(dim, 3.0);
    p.intercept_tight = intercept_tight;
    if (intercept_tight) p.beta_sd(0) = 0.1;
    p.sigma2_shape = 3.0;
    p.sigma2_scale = 2.0;  // prior mean 1 on scaled inputs
    p.delta_shape = 3.0;
    p.delta_scale = (p.delta_shape - 1.0) * median_sq_interpoint_distance(design);
    return p;
}

double log_inv_gamma_pdf(double x, double shape, double scale) {
    if (!(x > 0.0)) return kNegInf;
    return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - scale / x;
}

double log_normal_pdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return -0.5 * z * z - std::log(sd) - 0.5 * kLog2Pi;
}

double log_prior(const GpParams& params, const PriorSpec& priors) {
    if (!(params.sigma2 > 0.0) || !(params.delta > 0.0)) return kNegInf;
    double lp = log_inv_gamma_pdf(params.sigma2, priors.sigma2_shape, priors.sigma2_scale) +
                log_inv_gamma_pdf(params.delta, priors.delta_shape, priors.delta_scale);
    for (int i = 0; i < params.beta.size(); ++i) {
        lp += log_normal_pdf(params.beta(i), priors.beta_mean(i), priors.beta_sd(i));
    }
    return lp;
}

void MhConfig::validate() const {
    if (n_iterations < 1) throw ArgumentError("MhConfig: n_iterations must be >= 1");
    if (burn_in < 0 || burn_in >= n_iterations) {
        throw ArgumentError("MhConfig: need 0 <= burn_in < n_iterations");
    }
    if (thin < 1) throw ArgumentError("MhConfig: thin must be >= 1");
    if (adapt_window < 0) throw ArgumentError("MhConfig: adapt_window must be >= 0");
    if (likelihood_replicates < 1) {
        throw ArgumentError("MhConfig: likelihood_replicates must be >= 1");
    }
    if (step_sizes.size() > 0 && (step_sizes.array() <= 0.0).any()) {
        throw ArgumentError("MhConfig: step sizes must be positive");
    }
}

Chain mh_run(const LabelledDesign& design, const MeanBasis& basis, const PriorSpec& priors,
             const MhConfig& config) {
    config.validate();
    const int p = basis.output_dim();
    priors.validate(p);

    const OrderingPlan plan = reorder_for_boundary(design);
    const GhkContext ctx(design, basis, plan);

    Eigen::VectorXd steps = config.step_sizes;
    if (steps.size() == 0) {
        steps.resize(p + 2);
        for (int i = 0; i < p; ++i) steps(i) = 0.5 * priors.beta_sd(i);
        steps(p) = 0.6;      // log sigma2
        steps(p + 1) = 0.6;  // log delta
    } else if (steps.size() != p + 2) {
        throw ArgumentError("mh_run: step_sizes must have one entry per beta component + 2");
    }

    // State in transformed coordinates u = (beta, log sigma2, log delta); the
    // acceptance ratio includes the log-scale Jacobian, the stored
    // log_posterior does not (it is the density over theta itself, which is
    // what the MAP extraction wants).
    GpParams cur;
    cur.beta = priors.beta_mean;
    cur.sigma2 = priors.sigma2_prior_mean();
    cur.delta = priors.delta_prior_mean();

    Rng rng(substream_seed(config.seed, Stream::Fit));

    const auto likelihood = [&](const GpParams& theta, std::uint64_t iter) -> double {
        if (config.disable_likelihood) return 0.0;
        try {
            return ctx
                .evaluate(theta, config.likelihood_replicates,
                          substream_seed(config.seed, Stream::Likelihood, iter))
                .log_value;
        } catch (const NumericalError&) {
            return kNegInf;  // unfactorizable proposal: reject
        }
    };

    double cur_log_prior = log_prior(cur, priors);
    double cur_log_like = likelihood(cur, 0);
    double scale = 1.0;

    Chain chain;
    chain.config_echo = config;
    chain.draws.reserve((config.n_iterations - config.burn_in) / config.thin);

    int batch_accepts = 0, batch_count = 0, batch_index = 0;
    long post_accepts = 0;

    for (int t = 1; t <= config.n_iterations; ++t) {
        GpParams prop;
        prop.beta.resize(p);
        for (int i = 0; i < p; ++i) prop.beta(i) = cur.beta(i) + scale * steps(i) * rng.normal();
        const double d_ls2 = scale * steps(p) * rng.normal();
        const double d_ld = scale * steps(p + 1) * rng.normal();
        prop.sigma2 = cur.sigma2 * std::exp(d_ls2);
        prop.delta = cur.delta * std::exp(d_ld);

        const double prop_log_prior = log_prior(prop, priors);
        bool accepted = false;
        if (prop_log_prior > kNegInf && std::isfinite(prop.sigma2) && std::isfinite(prop.delta) &&
            prop.sigma2 > 0.0 && prop.delta > 0.0) {
            const double prop_log_like = likelihood(prop, static_cast<std::uint64_t>(t));
            const double log_ratio =
                (prop_log_prior + prop_log_like + std::log(prop.sigma2) + std::log(prop.delta)) -
                (cur_log_prior + cur_log_like + std::log(cur.sigma2) + std::log(cur.delta));
            if (std::log(rng.uniform()) < log_ratio) {
                cur = prop;
                cur_log_prior = prop_log_prior;
                cur_log_like = prop_log_like;
                accepted = true;
            }
        }

        if (t <= config.burn_in) {
            if (config.adapt_window > 0) {
                batch_accepts += accepted ? 1 : 0;
                if (++batch_count == config.adapt_window) {
                    ++batch_index;
                    const double rate = static_cast<double>(batch_accepts) / batch_count;
                    scale *= std::exp((rate - 0.3) / std::sqrt(static_cast<double>(batch_index)));
                    scale = std::clamp(scale, 1e-4, 1e2);
                    batch_accepts = 0;
                    batch_count = 0;
                }
            }
        } else {
            post_accepts += accepted ? 1 : 0;
            if ((t - config.burn_in) % config.thin == 0) {
                chain.draws.push_back(ChainDraw{cur, cur_log_prior + cur_log_like, accepted});
            }
        }
    }

    const int post_iters = config.n_iterations - config.burn_in;
    chain.acceptance_rate = post_iters > 0 ? static_cast<double>(post_accepts) / post_iters : 0.0;
    return chain;
}

AbcResult abc_fit(const LabelledDesign& design, const MeanBasis& basis, const PriorSpec& priors,
                  int n_proposals, std::uint64_t seed) {
    if (n_proposals < 1) throw ArgumentError("abc_fit: n_proposals must be >= 1");
    const int p = basis.output_dim();
    priors.validate(p);

    const Eigen::MatrixXd H = basis.eval_rows(design.points());
    const Eigen::MatrixXd d2 = sq_dist_matrix(design.points());
    const int n = design.n();

    AbcResult result;
    result.n_proposals = n_proposals;
    for (int k = 0; k < n_proposals; ++k) {
        Rng rng(substream_seed(seed, Stream::Abc, static_cast<std::uint64_t>(k)));
        GpParams theta;
        theta.beta.resize(p);
        for (int i = 0; i < p; ++i) theta.beta(i) = rng.normal(priors.beta_mean(i), priors.beta_sd(i));
        theta.sigma2 = rng.inverse_gamma(priors.sigma2_shape, priors.sigma2_scale);
        theta.delta = rng.inverse_gamma(priors.delta_shape, priors.delta_scale);

        CovMatrix cov;
        try {
            cov = build_cov_from_sqdist(d2, theta);
        } catch (const NumericalError&) {
            continue;  // unfactorizable draw counts as a rejection
        }
        Eigen::VectorXd z(n);
        for (int i = 0; i < n; ++i) z(i) = rng.normal();
        const Eigen::VectorXd eta = H * theta.beta + cov.chol_lower * z;

        bool match = true;
        for (int i = 0; i < n && match; ++i) match = eta(i) * design.label(i) > 0.0;
        if (match) {
            result.accepted.push_back(std::move(theta));
            result.accepted_latents.push_back(eta);
        }
    }
    result.acceptance_fraction =
        static_cast<double>(result.accepted.size()) / static_cast<double>(n_proposals);
    return result;
}

GpParams map_estimate(const Chain& chain) {
    if (chain.draws.empty()) throw ArgumentError("map_estimate: chain is empty");
    int best = 0;
    for (int i = 1; i < static_cast<int>(chain.draws.size()); ++i) {
        if (chain.draws[i].log_posterior > chain.draws[best].log_posterior) best = i;
    }
    return chain.draws[best].params;
}

double effective_sample_size(const std::vector<double>& series) {
    const int n = static_cast<int>(series.size());
    if (n < 1) throw ArgumentError("effective_sample_size: empty series");
    if (n == 1) return 1.0;

    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= n;

    const auto autocov = [&](int lag) {
        double g = 0.0;
        for (int i = 0; i + lag < n; ++i) g += (series[i] - mean) * (series[i + lag] - mean);
        return g / n;
    };

    const double g0 = autocov(0);
    if (!(g0 > 0.0)) return 1.0;  // constant chain

    // Geyer: sum gamma(2m)+gamma(2m+1) pairs while positive, forcing the
    // pair sums monotone non-increasing. tau = (2*sum_pairs - g0) / g0.
    double sum_pairs = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int m = 0; 2 * m + 1 < n; ++m) {
        double pair = autocov(2 * m) + autocov(2 * m + 1);
        if (pair <= 0.0) break;
        pair = std::min(pair, prev);
        sum_pairs += pair;
        prev = pair;
    }
    if (sum_pairs <= 0.0) sum_pairs = g0;
    const double tau = std::max(1.0, (2.0 * sum_pairs - g0) / g0);
    return std::clamp(n / tau, 1.0, static_cast<double>(n));
}

namespace {

ParamDiagnostic diagnose(const std::string& name, const std::vector<double>& series) {
    ParamDiagnostic d;
    d.name = name;
    const int n = static_cast<int>(series.size());
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    var = n > 1 ? var / (n - 1) : 0.0;
    d.mean = mean;
    d.sd = std::sqrt(var);
    d.ess = effective_sample_size(series);
    if (d.sd > 0.0 && n >= 2) {
        const int half = n / 2;
        double m1 = 0.0, m2 = 0.0;
        for (int i = 0; i < half; ++i) m1 += series[i];
        for (int i = half; i < n; ++i) m2 += series[i];
        m1 /= half;
        m2 /= (n - half);
        d.split_half_z = std::abs(m1 - m2) / d.sd;
    }
    return d;
}

}  // namespace

std::vector<ParamDiagnostic> chain_diagnostics(const Chain& chain) {
    if (chain.draws.empty()) throw ArgumentError("chain_diagnostics: chain is empty");
    const int p = static_cast<int>(chain.draws.front().params.beta.size());
    const int n = static_cast<int>(chain.draws.size());

    std::vector<ParamDiagnostic> out;
    std::vector<double> series(n);
    for (int i = 0; i < p; ++i) {
        for (int k = 0; k < n; ++k) series[k] = chain.draws[k].params.beta(i);
        out.push_back(diagnose("beta_" + std::to_string(i), series));
    }
    for (int k = 0; k < n; ++k) series[k] = chain.draws[k].params.sigma2;
    out.push_back(diagnose("sigma2", series));
    for (int k = 0; k < n; ++k) series[k] = chain.draws[k].params.delta;
    out.push_back(diagnose("delta", series));
    return out;
}

}  // namespace latentgp
