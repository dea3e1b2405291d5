// SPDX-License-Identifier: Apache-2.0
#include "uqx/methods.hpp"

#include <cmath>
#include <memory>
#include <set>

#include "uqx/crr.hpp"
#include "uqx/errors.hpp"
#include "uqx/gibbs.hpp"
#include "uqx/myula.hpp"
#include "uqx/oracle.hpp"
#include "uqx/pnp_ula.hpp"
#include "uqx/protocol.hpp"
#include "uqx/sapg.hpp"

namespace uqx {

namespace {

// Typed access to [method] parameters with error accumulation.
class Params {
 public:
  Params(const std::map<std::string, std::string>& kv, std::vector<std::string>& errors)
      : kv_(kv), errors_(errors) {}

  std::string str(const std::string& key, const std::string& fallback) {
    seen_.insert(key);
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }

  double real(const std::string& key, double fallback) {
    const std::string v = str(key, "");
    if (v.empty()) return fallback;
    try {
      std::size_t used = 0;
      const double out = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
      return out;
    } catch (const std::exception&) {
      errors_.push_back("[method] " + key + ": expected a number, got '" + v + "'");
      return fallback;
    }
  }

  int integer(const std::string& key, int fallback) {
    const std::string v = str(key, "");
    if (v.empty()) return fallback;
    try {
      std::size_t used = 0;
      const long out = std::stol(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
      return static_cast<int>(out);
    } catch (const std::exception&) {
      errors_.push_back("[method] " + key + ": expected an integer, got '" + v + "'");
      return fallback;
    }
  }

  bool boolean(const std::string& key, bool fallback) {
    const std::string v = str(key, "");
    if (v.empty()) return fallback;
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    errors_.push_back("[method] " + key + ": expected on/off, got '" + v + "'");
    return fallback;
  }

  void finish(const char* method) {
    for (const auto& [key, value] : kv_) {
      (void)value;
      if (!seen_.count(key))
        errors_.push_back("[method] " + key + ": unknown parameter for " + method);
    }
    if (!errors_.empty()) throw ConfigError(std::move(errors_));
  }

 private:
  const std::map<std::string, std::string>& kv_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

ChainConfig chain_config(Params& p, int default_samples, double step_size) {
  ChainConfig cc;
  cc.n_samples = p.integer("n_samples", default_samples);
  cc.thinning = p.integer("thinning", 1);
  // Burn-in default: 20% extra steps on top of the sampling phase.
  const int default_burnin = static_cast<int>(
      std::ceil(0.2 * static_cast<double>(cc.n_samples) * cc.thinning));
  cc.n_burnin = p.integer("burnin", default_burnin);
  cc.step_size = step_size;
  return cc;
}

// Explicit step_size wins; otherwise step_scale (default 0.5) of 1/L.
double resolve_step(Params& p, double lipschitz) {
  const double explicit_step = p.real("step_size", -1.0);
  const double scale = p.real("step_scale", 0.5);
  if (explicit_step > 0.0) return explicit_step;
  if (lipschitz <= 0.0) return scale;
  return scale / lipschitz;
}

GaussianPrior prior_from_params(Params& p, int h, int w) {
  const std::string kind = p.str("prior", "iid");
  if (kind == "iid")
    return GaussianPrior::iid(h, w, p.real("var", 1.0), p.real("prior_mean", 0.0));
  if (kind == "smooth")
    return GaussianPrior::smooth_field(h, w, p.real("scale", 1.0), p.real("ridge", 0.1));
  throw ConfigError({"[method] prior: must be 'iid' or 'smooth'"});
}

}  // namespace

Dataset build_dataset(const RunConfig& cfg) {
  if (cfg.dataset_source == "directory") return load_dataset(cfg.dataset_path);

  GaussianPrior prior =
      cfg.synth_prior == "iid"
          ? GaussianPrior::iid(cfg.synth_height, cfg.synth_width, cfg.synth_scale,
                               cfg.synth_mean)
          : GaussianPrior::smooth_field(cfg.synth_height, cfg.synth_width,
                                        cfg.synth_scale, cfg.synth_ridge);
  if (cfg.synth_prior == "smooth" && cfg.synth_mean != 0.0)
    for (double& v : prior.mean.pixels) v = cfg.synth_mean;

  if (cfg.synth_tail_dof <= 0.0)
    return make_gaussian_dataset(prior, cfg.synth_count, cfg.synth_seed);

  // Heavier-tailed truth: per-image precision g ~ Gamma(dof/2, dof/2) scale
  // mixture over the Gaussian field (Student-t marginals with `dof` d.o.f.).
  Dataset ds;
  RngStream root(cfg.synth_seed);
  const double half_dof = cfg.synth_tail_dof / 2.0;
  for (int i = 0; i < cfg.synth_count; ++i) {
    RngStream sub = root.child(static_cast<std::uint64_t>(i));
    Image x = prior.draw(sub);
    const double g = sub.gamma(half_dof, half_dof);
    const double boost = 1.0 / std::sqrt(g);
    for (int j = 0; j < x.size(); ++j) {
      const double mu = prior.mean.pixels[j];
      x.pixels[j] = mu + (x.pixels[j] - mu) * boost;
    }
    ds.items.push_back(std::move(x));
    ds.labels.push_back("synthetic-t-" + std::to_string(i));
  }
  return ds;
}

ObservationModel build_model(const RunConfig& cfg, const Dataset& ds) {
  ObservationModel m;
  if (cfg.kernel == "uniform3")
    m.kernel = BlurKernel::uniform(3);
  else if (cfg.kernel == "uniform5")
    m.kernel = BlurKernel::uniform(5);
  else if (cfg.kernel == "identity")
    m.kernel = BlurKernel::identity();
  else
    throw ConfigError({"[model] kernel: unknown preset '" + cfg.kernel + "'"});

  if (cfg.has_sigma) {
    m.noise_sigma = cfg.sigma;
  } else {
    // BSNR mode: sigma from the average blurred-pixel variance across the
    // dataset, one sigma for the whole run.
    if (ds.items.empty()) throw InvalidArgument("build_model: empty dataset");
    double var_sum = 0.0;
    for (const auto& x : ds.items) {
      const Image hx = convolve_circular(x, m.kernel);
      double mean = 0.0;
      for (double v : hx.pixels) mean += v;
      mean /= hx.size();
      double var = 0.0;
      for (double v : hx.pixels) var += (v - mean) * (v - mean);
      var_sum += var / hx.size();
    }
    const double avg_var = var_sum / static_cast<double>(ds.items.size());
    if (avg_var <= 1e-24)
      throw DegenerateInput("build_model: dataset has zero blurred variance");
    m.noise_sigma = std::sqrt(avg_var * std::pow(10.0, -cfg.bsnr_db / 10.0));
  }
  m.validate();
  return m;
}

BuiltMethod build_method(const RunConfig& cfg, const ObservationModel& m, int height,
                         int width) {
  std::vector<std::string> errors;
  Params p(cfg.method_params, errors);
  BuiltMethod built;
  built.label = cfg.name;

  const double lik_lipschitz = [&] {
    double maxmag2 = 0.0;
    for (const auto& t : m.transfer(height, width)) maxmag2 = std::max(maxmag2, std::norm(t));
    return maxmag2 / (m.noise_sigma * m.noise_sigma);
  }();

  if (cfg.method == "exact-gaussian") {
    auto prior = std::make_shared<GaussianPrior>(prior_from_params(p, height, width));
    ChainConfig cc;
    cc.n_samples = p.integer("n_samples", 1000);
    p.finish("exact-gaussian");
    ObservationModel model = m;
    built.supports_hpd = true;
    built.factory = [prior, cc, model](const Image& y, RngStream rng) {
      MethodRun run;
      run.chain = exact_gaussian_sampler(y, *prior, model, cc, rng);
      auto lik = std::make_shared<GaussianLikelihood>(GaussianLikelihood::make(y, model));
      const GaussianPrior* pr = prior.get();
      auto keep = prior;
      run.potential = [lik, pr, keep](const Image& x) {
        return lik->log_density(x) + pr->log_density_unnorm(x);
      };
      return run;
    };
    return built;
  }

  if (cfg.method == "gibbs-gmrf") {
    const double delta0 = p.real("delta", 1.0);
    const double dc_ridge = p.real("dc_ridge", 1e-5);
    GibbsHyperPriors hyper;
    hyper.a_delta = p.real("a_delta", hyper.a_delta);
    hyper.b_delta = p.real("b_delta", hyper.b_delta);
    hyper.a_gamma = p.real("a_gamma", hyper.a_gamma);
    hyper.b_gamma = p.real("b_gamma", hyper.b_gamma);
    GibbsOptions opt;
    opt.sample_delta = p.boolean("sample_delta", true);
    opt.sample_gamma = p.boolean("sample_gamma", true);
    ChainConfig cc = chain_config(p, 20000, 0.0);
    p.finish("gibbs-gmrf");
    auto prior = std::make_shared<GmrfPrior>(
        GmrfPrior::laplacian(height, width, delta0, dc_ridge));
    ObservationModel model = m;
    const bool frozen = !opt.sample_delta && !opt.sample_gamma;
    built.supports_hpd = frozen;
    built.factory = [prior, hyper, opt, cc, model, frozen](const Image& y, RngStream rng) {
      MethodRun run;
      run.chain = gibbs_gmrf(y, model, *prior, hyper, cc, rng, opt);
      if (frozen) {
        auto lik = std::make_shared<GaussianLikelihood>(GaussianLikelihood::make(y, model));
        auto pr = prior;
        const double gamma0 =
            opt.gamma_init > 0.0 ? opt.gamma_init
                                 : 1.0 / (model.noise_sigma * model.noise_sigma);
        const double sigma2 = model.noise_sigma * model.noise_sigma;
        run.potential = [lik, pr, gamma0, sigma2](const Image& x) {
          // Rescale the likelihood term to the frozen noise precision.
          return gamma0 * sigma2 * lik->log_density(x) - gmrf_potential(x, *pr);
        };
      }
      return run;
    };
    return built;
  }

  if (cfg.method == "tv-sapg") {
    const double theta = p.real("theta", 0.1);
    const double lambda_lo = p.real("lambda_min", 1e-3);
    const double lambda_hi = p.real("lambda_max", 1e3);
    const double step = resolve_step(p, lik_lipschitz + 1.0 / theta);
    ChainConfig cc = chain_config(p, 20000, step);
    p.finish("tv-sapg");
    ObservationModel model = m;
    built.supports_hpd = true;
    built.factory = [theta, lambda_lo, lambda_hi, cc, model](const Image& y,
                                                             RngStream rng) {
      SapgResult sr = sapg_tv(y, model, theta, lambda_lo, lambda_hi, cc, rng);
      MethodRun run;
      run.chain = std::move(sr.chain);
      run.info.emplace_back("lambda_hat", sr.lambda_hat);
      if (sr.boundary_warning) run.info.emplace_back("lambda_at_bound", 1.0);
      const double lambda_hat = sr.lambda_hat;
      auto lik = std::make_shared<GaussianLikelihood>(GaussianLikelihood::make(y, model));
      run.potential = [lik, lambda_hat](const Image& x) {
        return lik->log_density(x) - lambda_hat * TvPotential::tv(x);
      };
      return run;
    };
    return built;
  }

  if (cfg.method == "crr") {
    const std::string weights = p.str("weights", "builtin");
    const double lambda = p.real("lambda", 5.0);
    const double huber_delta = p.real("huber_delta", 0.05);
    auto model_ptr = std::make_shared<CrrModel>(
        weights == "builtin" ? CrrModel::builtin(lambda, huber_delta) : load_crr(weights));
    if (weights != "builtin" && p.str("lambda", "") != "")
      model_ptr->lambda = lambda;  // config override of the file's weight
    const double prior_lip = crr_grad_lipschitz(*model_ptr, height, width);
    const double step = resolve_step(p, lik_lipschitz + prior_lip);
    ChainConfig cc = chain_config(p, 40000, step);
    p.finish("crr");
    ObservationModel model = m;
    built.supports_hpd = true;
    built.factory = [model_ptr, cc, model](const Image& y, RngStream rng) {
      auto lik = std::make_shared<GaussianLikelihood>(GaussianLikelihood::make(y, model));
      const CrrModel& crr = *model_ptr;
      DriftFn drift = [lik, &crr](const Image& x) {
        Image g = lik->grad(x);
        axpy(g, -1.0, crr_grad(x, crr));
        return g;
      };
      auto keep = model_ptr;
      PotentialFn potential = [lik, keep](const Image& x) {
        return lik->log_density(x) - crr_potential(x, *keep);
      };
      MethodRun run;
      run.chain = ula_chain(drift, &potential, y, cc, rng);
      run.potential = potential;
      return run;
    };
    return built;
  }

  if (cfg.method == "pnp-ula") {
    DenoiserSpec spec;
    const std::string kind = p.str("denoiser", "gaussian-mmse");
    if (kind == "gaussian-mmse")
      spec.kind = DenoiserSpec::Kind::gaussian_mmse;
    else if (kind == "smoothing")
      spec.kind = DenoiserSpec::Kind::smoothing;
    else if (kind == "external")
      spec.kind = DenoiserSpec::Kind::external;
    else
      errors.push_back("[method] denoiser: unknown kind '" + kind + "'");
    spec.epsilon = p.real("epsilon", 0.05);
    spec.mmse_prior_var = p.real("prior_var", 1.0);
    spec.endpoint = p.str("endpoint", "");
    const double box_lo = p.real("box_lo", -0.5);
    const double box_hi = p.real("box_hi", 1.5);
    const double lambda_proj = p.real("lambda_proj", 1.0);
    const double step =
        resolve_step(p, lik_lipschitz + 1.0 / spec.epsilon + 1.0 / lambda_proj);
    ChainConfig cc = chain_config(p, 50000, step);
    p.finish("pnp-ula");
    ObservationModel model = m;
    built.supports_hpd = false;
    built.factory = [spec, box_lo, box_hi, lambda_proj, cc, model](const Image& y,
                                                                   RngStream rng) {
      MethodRun run;
      run.chain = pnp_ula(y, model, spec, box_lo, box_hi, lambda_proj, cc, rng);
      return run;
    };
    return built;
  }

  if (cfg.method == "external") {
    const std::string endpoint = p.str("endpoint", "");
    if (endpoint.empty()) errors.push_back("[method] endpoint: required for external");
    const int n_samples = p.integer("n_samples", 100);
    p.finish("external");
    built.supports_hpd = false;
    built.factory = [endpoint, n_samples](const Image& y, RngStream) {
      auto client = proto::Client::connect(endpoint);
      MethodRun run;
      run.chain.samples = client->sample(y, static_cast<std::uint32_t>(n_samples));
      run.chain.n_steps = n_samples;
      run.chain.finalize_moments();
      return run;
    };
    return built;
  }

  errors.push_back("[method] name: unknown method '" + cfg.method + "'");
  throw ConfigError(std::move(errors));
}

}  // namespace uqx
