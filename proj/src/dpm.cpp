#include "dxa/dpm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dxa/errors.hpp"

namespace dxa {

namespace {

constexpr int kJitterAttempts = 6;

Eigen::LLT<Eigen::MatrixXd> robust_llt(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return llt;
  const double base = std::max(1e-300, m.diagonal().cwiseAbs().mean());
  double jitter = 1e-12 * base;
  for (int k = 0; k < kJitterAttempts; ++k, jitter *= 100.0) {
    llt.compute(m + jitter * Eigen::MatrixXd::Identity(m.rows(), m.cols()));
    if (llt.info() == Eigen::Success) return llt;
  }
  throw NumericError(std::string("Cholesky factorization failed for ") + what);
}

Eigen::VectorXd standard_normal_vector(int p, Rng& rng) {
  Eigen::VectorXd e(p);
  for (int k = 0; k < p; ++k) e[k] = rng.normal();
  return e;
}

// Draw from N(P^{-1} b, P^{-1}) given the precision P.
Eigen::VectorXd draw_from_precision(const Eigen::MatrixXd& precision, const Eigen::VectorXd& b, Rng& rng,
                                    const char* what) {
  const auto llt = robust_llt(precision, what);
  Eigen::VectorXd mean = llt.solve(b);
  Eigen::VectorXd e = standard_normal_vector(static_cast<int>(b.size()), rng);
  // If P = L L^T then L^{-T} e has covariance P^{-1}.
  return mean + llt.matrixU().solve(e);
}

struct ClusterStats {
  Eigen::MatrixXd xtx;
  Eigen::VectorXd xtz;
  double ztz = 0.0;
  int n = 0;
};

double dot(const double* a, const double* b, int p) {
  double s = 0.0;
  for (int k = 0; k < p; ++k) s += a[k] * b[k];
  return s;
}

void refresh_cluster(Cluster& c, const ClusterStats& st, const BaseMeasureHyper& h,
                     const Eigen::MatrixXd& sigma0_inv, const Eigen::VectorXd& sigma0_inv_beta0, Rng& rng) {
  const int p = h.dim();
  // beta | sigma2
  Eigen::MatrixXd precision = sigma0_inv + st.xtx / c.sigma2;
  Eigen::VectorXd b = sigma0_inv_beta0 + st.xtz / c.sigma2;
  Eigen::VectorXd beta = draw_from_precision(precision, b, rng, "cluster coefficient precision");
  // sigma2 | beta
  const double ssr = std::max(0.0, st.ztz - 2.0 * beta.dot(st.xtz) + beta.dot(st.xtx * beta));
  c.sigma2 = draw_inverse_gamma(h.ig_shape + 0.5 * st.n, h.ig_scale + 0.5 * ssr, rng);
  c.beta.assign(beta.data(), beta.data() + p);
}

void refresh_hyper(DpmState& s, Rng& rng) {
  auto& h = s.hyper;
  const int p = h.dim();
  const int k = static_cast<int>(s.clusters.size());
  Eigen::MatrixXd betas(p, k);
  for (int j = 0; j < k; ++j) betas.col(j) = Eigen::Map<const Eigen::VectorXd>(s.clusters[j].beta.data(), p);

  // beta0 | betas, Sigma0
  const Eigen::MatrixXd sigma0_inv = robust_llt(h.Sigma0, "Sigma0").solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd prior_inv = robust_llt(h.prior_cov, "beta0 prior covariance").solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::MatrixXd precision = prior_inv + k * sigma0_inv;
  Eigen::VectorXd b = prior_inv * h.prior_mean + sigma0_inv * betas.rowwise().sum();
  h.beta0 = draw_from_precision(precision, b, rng, "beta0 posterior precision");

  // Sigma0 | betas, beta0
  Eigen::MatrixXd centered = betas.colwise() - h.beta0;
  Eigen::MatrixXd scale = h.iwish_scale + centered * centered.transpose();
  h.Sigma0 = draw_inverse_wishart(h.iwish_df + k, scale, rng);
}

// Lower Cholesky factor of Sigma0, flattened row-major for the hot loop.
struct BaseSampler {
  int p = 1;
  std::vector<double> chol;
  std::vector<double> mean;
  std::vector<double> e;
  double ig_shape = 1.0;
  double ig_scale = 1.0;

  explicit BaseSampler(const BaseMeasureHyper& h)
      : p(h.dim()), chol(static_cast<std::size_t>(p * p)), mean(h.beta0.data(), h.beta0.data() + p),
        e(static_cast<std::size_t>(p)), ig_shape(h.ig_shape), ig_scale(h.ig_scale) {
    const Eigen::MatrixXd l = robust_llt(h.Sigma0, "Sigma0").matrixL();
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c) chol[static_cast<std::size_t>(r * p + c)] = l(r, c);
  }

  void draw(Rng& rng, double* beta, double& sigma2) {
    for (int k = 0; k < p; ++k) e[static_cast<std::size_t>(k)] = rng.normal();
    for (int r = 0; r < p; ++r) {
      double v = mean[static_cast<std::size_t>(r)];
      for (int c = 0; c <= r; ++c) v += chol[static_cast<std::size_t>(r * p + c)] * e[static_cast<std::size_t>(c)];
      beta[r] = v;
    }
    sigma2 = draw_inverse_gamma(ig_shape, ig_scale, rng);
  }
};

}  // namespace

BaseMeasureHyper BaseMeasureHyper::defaults(int p) {
  if (p < 1) throw DomainError("base measure dimension must be >= 1");
  BaseMeasureHyper h;
  h.beta0 = Eigen::VectorXd::Zero(p);
  h.Sigma0 = Eigen::MatrixXd::Identity(p, p);
  h.prior_mean = Eigen::VectorXd::Zero(p);
  h.prior_cov = Eigen::MatrixXd::Identity(p, p);
  h.iwish_df = p + 2.0;
  h.iwish_scale = Eigen::MatrixXd::Identity(p, p);
  return h;
}

BaseMeasureHyper BaseMeasureHyper::literal(int p) {
  auto h = defaults(p);
  h.ig_scale = 50.0;
  h.iwish_df = 1.0;
  return h;
}

void validate(const BaseMeasureHyper& h) {
  const int p = h.dim();
  if (p < 1) throw DomainError("base measure dimension must be >= 1");
  if (h.Sigma0.rows() != p || h.Sigma0.cols() != p || h.prior_mean.size() != p || h.prior_cov.rows() != p ||
      h.prior_cov.cols() != p || h.iwish_scale.rows() != p || h.iwish_scale.cols() != p)
    throw DomainError("base measure hyperparameters have inconsistent dimensions");
  if (!(h.ig_shape > 0.0) || !(h.ig_scale > 0.0)) throw DomainError("inverse-gamma parameters must be positive");
  if (!(h.iwish_df > 0.0)) throw DomainError("inverse-Wishart degrees of freedom must be positive");
  Eigen::LLT<Eigen::MatrixXd> llt(h.Sigma0);
  if (llt.info() != Eigen::Success) throw DomainError("Sigma0 must be symmetric positive definite");
}

void validate(const McmcConfig& cfg) {
  if (cfg.burn_in < 0 || cfg.thin < 1 || cfg.n_keep < 1 || cfg.m_aux < 1 || cfg.n_predictive < 1)
    throw DomainError("MCMC configuration requires burn_in >= 0 and positive thin, n_keep, m_aux, n_predictive");
}

Eigen::VectorXd draw_mvn(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov, Rng& rng) {
  const auto llt = robust_llt(cov, "normal covariance");
  return mean + llt.matrixL() * standard_normal_vector(static_cast<int>(mean.size()), rng);
}

// Bartlett decomposition of W ~ Wishart(df, scale^{-1}); returns W^{-1}.
Eigen::MatrixXd draw_inverse_wishart(double df, const Eigen::MatrixXd& scale, Rng& rng) {
  const int p = static_cast<int>(scale.rows());
  if (!(df > p - 1)) throw NumericError("inverse-Wishart degrees of freedom must exceed p - 1");
  const Eigen::MatrixXd scale_inv = robust_llt(scale, "inverse-Wishart scale").solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd l = robust_llt(scale_inv, "inverse-Wishart scale inverse").matrixL();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    a(i, i) = std::sqrt(rng.chi_squared(df - i));
    for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  const Eigen::MatrixXd la = l * a;
  const Eigen::MatrixXd w = la * la.transpose();
  Eigen::MatrixXd out = robust_llt(w, "Wishart draw").solve(Eigen::MatrixXd::Identity(p, p));
  return 0.5 * (out + out.transpose());
}

double draw_inverse_gamma(double shape, double scale, Rng& rng) {
  double g = rng.gamma(shape);
  // Shape-1 gammas can underflow to zero; the variance would be infinite.
  g = std::max(g, std::numeric_limits<double>::min());
  return scale / g;
}

void check_state(const DpmState& s, const RegressionData& data) {
  if (s.assignments.size() != data.n()) throw DomainError("state and data sizes differ");
  std::vector<int> counts(s.clusters.size(), 0);
  for (int a : s.assignments) {
    if (a < 0 || static_cast<std::size_t>(a) >= s.clusters.size())
      throw DomainError("observation assigned to a missing cluster");
    ++counts[static_cast<std::size_t>(a)];
  }
  for (std::size_t j = 0; j < s.clusters.size(); ++j) {
    if (counts[j] != s.clusters[j].size || counts[j] == 0) throw DomainError("cluster sizes are inconsistent");
    if (!(s.clusters[j].sigma2 > 0.0)) throw DomainError("cluster variance must be positive");
  }
}

DpmState initial_state(const RegressionData& data, BaseMeasureHyper hyper, Rng& rng, double alpha) {
  validate(hyper);
  if (data.p != hyper.dim()) throw DomainError("design dimension does not match the base measure");
  if (data.n() == 0) throw DataError("no observations");
  DpmState s;
  s.hyper = std::move(hyper);
  s.alpha = alpha;
  s.assignments.assign(data.n(), 0);
  Cluster c;
  c.size = static_cast<int>(data.n());
  c.sigma2 = 1.0;
  c.beta.assign(static_cast<std::size_t>(data.p), 0.0);
  s.clusters.push_back(c);

  const int p = data.p;
  ClusterStats st{Eigen::MatrixXd::Zero(p, p), Eigen::VectorXd::Zero(p), 0.0, c.size};
  for (std::size_t i = 0; i < data.n(); ++i) {
    Eigen::Map<const Eigen::VectorXd> x(data.row(i), p);
    st.xtx.noalias() += x * x.transpose();
    st.xtz += data.z[i] * x;
    st.ztz += data.z[i] * data.z[i];
  }
  const auto& h = s.hyper;
  const Eigen::MatrixXd sigma0_inv = robust_llt(h.Sigma0, "Sigma0").solve(Eigen::MatrixXd::Identity(p, p));
  refresh_cluster(s.clusters[0], st, h, sigma0_inv, sigma0_inv * h.beta0, rng);
  return s;
}

void neal8_sweep(DpmState& s, const RegressionData& data, int m_aux, Rng& rng) {
  if (m_aux < 1) throw DomainError("Algorithm 8 needs at least one auxiliary component");
  const int p = data.p;
  const std::size_t n = data.n();
  if (s.assignments.size() != n || p != s.hyper.dim()) throw DomainError("state does not match data");

  BaseSampler g0(s.hyper);
  const double log_aux_weight = std::log(s.alpha / m_aux);
  const std::size_t m = static_cast<std::size_t>(m_aux);

  std::vector<double> aux_beta(m * static_cast<std::size_t>(p));
  std::vector<double> aux_sigma2(m);
  std::vector<double> logw;
  std::vector<std::size_t> free_slots;
  thread_local std::vector<double> log_count;
  for (std::size_t k = log_count.size(); k <= n; ++k) log_count.push_back(std::log(static_cast<double>(k)));

  // Per-cluster cached -log(sigma) and 1/sigma2.
  std::vector<double> neg_log_sd(s.clusters.size());
  std::vector<double> inv_var(s.clusters.size());
  auto cache = [&](std::size_t j) {
    if (j >= neg_log_sd.size()) {
      neg_log_sd.resize(j + 1);
      inv_var.resize(j + 1);
    }
    neg_log_sd[j] = -0.5 * std::log(s.clusters[j].sigma2);
    inv_var[j] = 1.0 / s.clusters[j].sigma2;
  };
  for (std::size_t j = 0; j < s.clusters.size(); ++j) cache(j);

  for (std::size_t i = 0; i < n; ++i) {
    const double* x = data.row(i);
    const double z = data.z[i];
    const auto c = static_cast<std::size_t>(s.assignments[i]);
    Cluster& own = s.clusters[c];
    --own.size;

    std::size_t first_fresh = 0;
    if (own.size == 0) {
      // Singleton: its parameters become the first auxiliary component.
      std::copy(own.beta.begin(), own.beta.end(), aux_beta.begin());
      aux_sigma2[0] = own.sigma2;
      first_fresh = 1;
      free_slots.push_back(c);
    }
    for (std::size_t k = first_fresh; k < m; ++k)
      g0.draw(rng, aux_beta.data() + k * static_cast<std::size_t>(p), aux_sigma2[k]);

    const std::size_t kc = s.clusters.size();
    logw.assign(kc + m, -std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < kc; ++j) {
      const Cluster& cl = s.clusters[j];
      if (cl.size == 0) continue;
      const double r = z - dot(x, cl.beta.data(), p);
      logw[j] = log_count[static_cast<std::size_t>(cl.size)] + neg_log_sd[j] - 0.5 * r * r * inv_var[j];
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double r = z - dot(x, aux_beta.data() + k * static_cast<std::size_t>(p), p);
      logw[kc + k] = log_aux_weight - 0.5 * std::log(aux_sigma2[k]) - 0.5 * r * r / aux_sigma2[k];
    }
    const std::size_t pick = rng.categorical_log(logw.data(), logw.size());

    std::size_t target;
    if (pick < kc) {
      target = pick;
    } else {
      const std::size_t k = pick - kc;
      if (!free_slots.empty()) {
        target = free_slots.back();
        free_slots.pop_back();
      } else {
        target = s.clusters.size();
        s.clusters.emplace_back();
      }
      Cluster& fresh = s.clusters[target];
      fresh.beta.assign(aux_beta.begin() + static_cast<std::ptrdiff_t>(k * static_cast<std::size_t>(p)),
                        aux_beta.begin() + static_cast<std::ptrdiff_t>((k + 1) * static_cast<std::size_t>(p)));
      fresh.sigma2 = aux_sigma2[k];
      fresh.size = 0;
      cache(target);
    }
    ++s.clusters[target].size;
    s.assignments[i] = static_cast<int>(target);
  }

  // Compact away empty clusters, keeping the relative order of survivors.
  std::vector<int> relabel(s.clusters.size(), -1);
  std::vector<Cluster> kept;
  kept.reserve(s.clusters.size());
  for (std::size_t j = 0; j < s.clusters.size(); ++j) {
    if (s.clusters[j].size == 0) continue;
    relabel[j] = static_cast<int>(kept.size());
    kept.push_back(std::move(s.clusters[j]));
  }
  s.clusters = std::move(kept);
  for (int& a : s.assignments) a = relabel[static_cast<std::size_t>(a)];

  // Cluster parameters given memberships.
  std::vector<ClusterStats> stats(s.clusters.size(),
                                  ClusterStats{Eigen::MatrixXd::Zero(p, p), Eigen::VectorXd::Zero(p), 0.0, 0});
  for (std::size_t i = 0; i < n; ++i) {
    auto& st = stats[static_cast<std::size_t>(s.assignments[i])];
    Eigen::Map<const Eigen::VectorXd> x(data.row(i), p);
    st.xtx.noalias() += x * x.transpose();
    st.xtz += data.z[i] * x;
    st.ztz += data.z[i] * data.z[i];
    ++st.n;
  }
  const auto& h = s.hyper;
  const Eigen::MatrixXd sigma0_inv = robust_llt(h.Sigma0, "Sigma0").solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::VectorXd sigma0_inv_beta0 = sigma0_inv * h.beta0;
  for (std::size_t j = 0; j < s.clusters.size(); ++j)
    refresh_cluster(s.clusters[j], stats[j], h, sigma0_inv, sigma0_inv_beta0, rng);

  if (s.hyper.update_hyper) refresh_hyper(s, rng);
}

PosteriorPredictive predictive_from_state(const DpmState& s, std::size_t n_obs, int n_predictive,
                                          const Standardization& standardization, Rng& rng) {
  const int p = s.hyper.dim();
  PosteriorPredictive out;
  out.p = p;
  out.n_obs = n_obs;
  out.alpha = s.alpha;
  out.standardization = standardization;
  out.n_occupied = s.clusters.size();
  const double denom = static_cast<double>(n_obs) + s.alpha;
  for (const auto& c : s.clusters) {
    out.weights.push_back(c.size / denom);
    out.betas.insert(out.betas.end(), c.beta.begin(), c.beta.end());
    out.sigmas.push_back(std::sqrt(c.sigma2));
  }
  BaseSampler g0(s.hyper);
  const double w = s.alpha / denom / n_predictive;
  std::vector<double> beta(static_cast<std::size_t>(p));
  for (int k = 0; k < n_predictive; ++k) {
    double sigma2;
    g0.draw(rng, beta.data(), sigma2);
    out.weights.push_back(w);
    out.betas.insert(out.betas.end(), beta.begin(), beta.end());
    out.sigmas.push_back(std::sqrt(sigma2));
  }
  // Renormalize away rounding so the weights sum to 1.
  double total = 0.0;
  for (double v : out.weights) total += v;
  for (double& v : out.weights) v /= total;
  return out;
}

namespace {

PosteriorFit run_chain(const RegressionData& data, const McmcConfig& cfg, BaseMeasureHyper hyper,
                       const Standardization& standardization, const std::optional<BSplineBasis>& basis) {
  validate(cfg);
  Rng master(cfg.seed);
  Rng chain = master.split(1);
  Rng predictive = master.split(2);
  DpmState state = initial_state(data, std::move(hyper), chain);

  PosteriorFit fit;
  fit.standardization = standardization;
  fit.draws.reserve(static_cast<std::size_t>(cfg.n_keep));
  const int total = cfg.total_iterations();
  for (int it = 1; it <= total; ++it) {
    neal8_sweep(state, data, cfg.m_aux, chain);
    if (it > cfg.burn_in && (it - cfg.burn_in) % cfg.thin == 0) {
      auto draw = predictive_from_state(state, data.n(), cfg.n_predictive, standardization, predictive);
      draw.basis = basis;
      fit.draws.push_back(std::move(draw));
      fit.occupied.push_back(static_cast<int>(state.clusters.size()));
    }
  }
  return fit;
}

}  // namespace

PosteriorFit fit_dpm(std::span<const double> ys, const McmcConfig& cfg, BaseMeasureHyper hyper) {
  if (ys.size() < 10) throw DataError("DPM fit needs at least 10 observations");
  if (hyper.dim() != 1) throw DomainError("unconditional fit needs a one-dimensional base measure");
  auto [z, standardization] = standardize(ys);
  RegressionData data;
  data.p = 1;
  data.design.assign(z.size(), 1.0);
  data.z = std::move(z);
  return run_chain(data, cfg, std::move(hyper), standardization, std::nullopt);
}

PosteriorFit fit_dpm(std::span<const double> ys, const McmcConfig& cfg) {
  return fit_dpm(ys, cfg, BaseMeasureHyper::defaults(1));
}

PosteriorFit fit_ddp(std::span<const double> ys, std::span<const double> xs, const McmcConfig& cfg,
                     BaseMeasureHyper hyper, const BSplineBasis& basis) {
  if (ys.size() != xs.size()) throw DomainError("biomarker and covariate lengths differ");
  if (ys.size() < 20) throw DataError("DDP fit needs at least 20 observations");
  if (hyper.dim() != basis.dimension()) throw DomainError("base measure dimension must equal the B-spline dimension");
  for (double x : xs)
    if (!(x >= -1.0 && x <= 1.0)) throw DomainError("covariate must be rescaled to [-1, 1]");
  auto [z, standardization] = standardize(ys);
  RegressionData data;
  data.p = basis.dimension();
  data.design.resize(xs.size() * static_cast<std::size_t>(data.p));
  for (std::size_t i = 0; i < xs.size(); ++i) basis.evaluate(xs[i], data.design.data() + i * data.p);
  data.z = std::move(z);
  return run_chain(data, cfg, std::move(hyper), standardization, basis);
}

PosteriorFit fit_ddp(std::span<const double> ys, std::span<const double> xs, const McmcConfig& cfg,
                     const BSplineBasis& basis) {
  return fit_ddp(ys, xs, cfg, BaseMeasureHyper::defaults(basis.dimension()), basis);
}

}  // namespace dxa
