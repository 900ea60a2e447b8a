#include "lab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "json.hpp"

namespace lab {

namespace {

using nlohmann::json;

ComplexMatrix observable_matrix(const std::string& name) {
  if (name == "sx") return pauli_x();
  return pauli_z();
}

std::string out_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

HypothesisOptions hypothesis_options(const ExperimentConfig& cfg) {
  HypothesisOptions opts;
  opts.structure_tol = cfg.hypothesis_tolerance;
  opts.cb.seed = cfg.seed;
  return opts;
}

std::vector<double> upper_cb_from_report(const HypothesisReport& report) {
  std::vector<double> cb;
  cb.reserve(report.cb_norm_table.size());
  for (const auto& e : report.cb_norm_table) cb.push_back(e.cb_upper);
  return cb;
}

int run_check(const ExperimentConfig& cfg, const std::string& out_dir) {
  LatticeModel model = build_from_config(cfg);
  HypothesisReport report = evaluate_hypotheses(model, hypothesis_options(cfg));
  write_file_atomic(out_path(out_dir, "report.json"), report.to_json() + "\n");
  return report.passed ? kOk : kHypothesisFailure;
}

int run_lightcone(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.site_pairs.empty())
    throw ConfigError("lightcone: site_pairs required");
  LatticeModel model = build_from_config(cfg);
  HypothesisReport report = evaluate_hypotheses(model, hypothesis_options(cfg));
  write_file_atomic(out_path(out_dir, "report.json"), report.to_json() + "\n");
  if (!report.passed) return kHypothesisFailure;

  const ComplexMatrix obs = observable_matrix(cfg.observable);
  EnvelopeParams params = envelope_from_report(
      model, report, cfg.F, spectral_norm(obs), spectral_norm(obs), 1);
  write_file_atomic(
      out_path(out_dir, "envelope_params.json"),
      json{{"alpha", params.alpha},
           {"beta", params.beta},
           {"nu", params.nu},
           {"mu", params.mu},
           {"f_norm", params.f_norm},
           {"c_mu", params.c_mu},
           {"l_mu_norm", params.l_mu_norm},
           {"norm_a", params.norm_a},
           {"norm_b", params.norm_b},
           {"min_support", params.min_support},
           {"params_digest", params.digest()}}
              .dump(2) +
          "\n");

  const std::vector<double> grid = cfg.t_grid.make();
  // one evolution per distinct left site
  std::vector<PropagationRecord> records;
  std::vector<int> left_sites;
  for (const auto& [a, b] : cfg.site_pairs)
    if (std::find(left_sites.begin(), left_sites.end(), a) == left_sites.end())
      left_sites.push_back(a);
  EvolutionPlan plan;
  plan.method = model.op_space_dim() <= 256 ? EvolutionPlan::Method::dense_expm
                                            : EvolutionPlan::Method::integrate;
  for (int a : left_sites) {
    LocalObservable A{obs, Support({a})};
    std::vector<LocalObservable> Bs;
    for (const auto& [pa, pb] : cfg.site_pairs)
      if (pa == a) Bs.push_back({obs, Support({pb})});
    auto points = commutator_profile(model, A, Bs, grid, plan);
    for (const auto& pt : points) {
      PropagationRecord r;
      r.experiment = "lightcone";
      r.n_sites = model.n_sites;
      r.site_a = pt.site_a;
      r.site_b = pt.site_b;
      r.distance = pt.distance;
      r.t = pt.t;
      r.empirical_norm = pt.empirical_norm;
      r.envelope_value = lr_envelope(pt.t, pt.distance, params);
      r.params_digest = params.digest();
      records.push_back(std::move(r));
    }
  }
  emit_csv(out_path(out_dir, "lightcone.csv"), std::move(records));
  return kOk;
}

int run_localization(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.model.family != "hamiltonian_depolarizing")
    throw ConfigError("localization: model family must be hamiltonian_depolarizing");
  if (cfg.gammas.empty()) throw ConfigError("localization: gammas required");
  if (cfg.site_pairs.empty()) throw ConfigError("localization: site_pairs required");

  const auto params = json::parse(cfg.model.params_json);
  const std::string kind_s = params.value("h_kind", "random");
  const HamiltonianKind kind = kind_s == "heisenberg"
                                   ? HamiltonianKind::heisenberg
                                   : HamiltonianKind::random;

  // assumption checks on a small window
  const int window = std::min(cfg.model.n_sites, 4);
  LocalizationModel window_model =
      build_hamiltonian_depolarizing(window, cfg.gammas.front(), kind, cfg.seed);
  LocalizationCheck assumptions = localization_assumptions(window_model.model);

  const ComplexMatrix obs = observable_matrix(cfg.observable);
  const std::vector<double> grid = cfg.t_grid.make();

  std::vector<PropagationRecord> records;
  json summary;
  summary["assumptions"] = {{"passed", assumptions.passed},
                            {"commutation_residual", assumptions.commutation_residual},
                            {"projection_residual", assumptions.projection_residual},
                            {"window_sites", window}};
  json sweep = json::array();

  EnvelopeFit fit;
  double v_bound = 0.0;
  for (std::size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
    const double gamma = cfg.gammas[gi];
    LocalizationModel lm = build_hamiltonian_depolarizing(
        cfg.model.n_sites, gamma, kind, cfg.seed);
    v_bound = 2.0 * lm.max_h_norm;
    EvolutionPlan plan;
    plan.method = lm.model.op_space_dim() <= 256
                      ? EvolutionPlan::Method::dense_expm
                      : EvolutionPlan::Method::integrate;
    plan.rel_tol = 1e-10;
    plan.abs_tol = 1e-13;

    std::vector<ProfilePoint> all_points;
    std::vector<int> left_sites;
    for (const auto& [a, b] : cfg.site_pairs)
      if (std::find(left_sites.begin(), left_sites.end(), a) == left_sites.end())
        left_sites.push_back(a);
    for (int a : left_sites) {
      LocalObservable A{obs, Support({a})};
      std::vector<LocalObservable> Bs;
      for (const auto& [pa, pb] : cfg.site_pairs)
        if (pa == a) Bs.push_back({obs, Support({pb})});
      auto points = commutator_profile(lm.model, A, Bs, grid, plan);
      all_points.insert(all_points.end(), points.begin(), points.end());
    }
    if (gi == 0) fit = fit_localization_envelope(all_points, v_bound, gamma);

    double sup = 0.0, peak_t = 0.0;
    for (const auto& pt : all_points)
      if (pt.empirical_norm > sup) {
        sup = pt.empirical_norm;
        peak_t = pt.t;
      }
    // lambda = gamma comparison: every non-steady mode of the small window
    // decays at least at the claimed rate
    double window_gap = 0.0;
    if (window_model.model.op_space_dim() <= 256) {
      LocalizationModel wm =
          build_hamiltonian_depolarizing(window, gamma, kind, cfg.seed);
      window_gap = dissipative_gap(wm.model);
    }
    sweep.push_back({{"gamma", gamma},
                     {"sup_norm", sup},
                     {"peak_t", peak_t},
                     {"v_bound", v_bound},
                     {"window_gap", window_gap},
                     {"gap_at_least_gamma", window_gap >= gamma - 1e-9}});

    LocalizationParams lp;
    lp.lambda = gamma;
    lp.v = v_bound;
    lp.xi = fit.xi;
    lp.c_prime = fit.c_prime;
    lp.norm_a = spectral_norm(obs);
    lp.norm_b = spectral_norm(obs);
    char label[64];
    std::snprintf(label, sizeof(label), "localization:gamma=%g", gamma);
    for (const auto& pt : all_points) {
      PropagationRecord r;
      r.experiment = label;
      r.n_sites = cfg.model.n_sites;
      r.site_a = pt.site_a;
      r.site_b = pt.site_b;
      r.distance = pt.distance;
      r.t = pt.t;
      r.empirical_norm = pt.empirical_norm;
      r.envelope_value = localization_envelope(pt.t, pt.distance, lp);
      r.params_digest = "gamma=" + format_double(gamma);
      records.push_back(std::move(r));
    }
  }
  summary["sweep"] = sweep;
  summary["fit"] = {{"c_prime", fit.c_prime},
                    {"xi", fit.xi},
                    {"points_used", fit.points_used}};
  write_file_atomic(out_path(out_dir, "localization.json"), summary.dump(2) + "\n");
  emit_csv(out_path(out_dir, "localization.csv"), std::move(records));
  return assumptions.passed ? kOk : kHypothesisFailure;
}

int run_clustering(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.model.family != "mixture_depolarizing")
    throw ConfigError("clustering: model family must be mixture_depolarizing");
  LatticeModel model = build_from_config(cfg);
  validate_model(model);

  SteadyState ss = steady_state(model);
  json report;
  report["steady_state"] = {{"residual_trace_norm", ss.residual_trace_norm},
                            {"min_eigenvalue", ss.min_eigenvalue},
                            {"kernel_dim", ss.kernel_dim},
                            {"unique", ss.unique}};

  // per-term frustration-freeness residuals
  json term_res = json::array();
  double worst_term = 0.0;
  const int d = static_cast<int>(model.hilbert_dim());
  for (const auto& term : model.terms) {
    LocalSuperPlan plan =
        make_local_super_plan(hs_adjoint(term.heisenberg_action), term.support,
                              model.n_sites, model.local_dim);
    ComplexVector v = vec(ss.rho);
    ComplexVector res(v.size());
    apply_local_super(plan, v.data(), res.data(), /*accumulate=*/false);
    const double r = trace_norm(devec(res, d));
    worst_term = std::max(worst_term, r);
    term_res.push_back({{"label", term.label}, {"residual", r}});
  }
  report["term_residuals"] = term_res;
  report["frustration_free"] = worst_term <= 1e-10;

  const double gap = dissipative_gap(model);
  report["gap"] = gap;

  // correlation table against the clustering envelope
  std::vector<PropagationRecord> records;
  const double xi = cfg.clustering_xi;
  const double v_fit = cfg.clustering_v;
  const std::vector<std::pair<std::string, ComplexMatrix>> obs = {
      {"z", pauli_z()}, {"x", pauli_x()}};
  for (const auto& [na, oa] : obs)
    for (const auto& [nb, ob] : obs)
      for (int i = 0; i < model.n_sites; ++i)
        for (int j = i + 1; j < model.n_sites; ++j) {
          PropagationRecord r;
          r.experiment = "clustering:" + na + nb;
          r.n_sites = model.n_sites;
          r.site_a = i;
          r.site_b = j;
          r.distance = j - i;
          r.t = 0.0;
          r.empirical_norm = correlation(model, ss.rho, {oa, Support({i})},
                                         {ob, Support({j})});
          r.envelope_value = gap > 0 ? clustering_envelope(
                                           j - i, xi, v_fit, gap,
                                           spectral_norm(oa), spectral_norm(ob))
                                     : 0.0;
          r.params_digest = "xi=" + format_double(xi) + ";v=" + format_double(v_fit);
          records.push_back(std::move(r));
        }
  emit_csv(out_path(out_dir, "clustering.csv"), std::move(records));

  // the two readings of the propagation residual (I_X vs I_X*), evaluated
  // against a local observable at the first site
  json lrb2 = json::array();
  {
    LocalObservable A{pauli_z(), Support({0})};
    ComplexMatrix A_emb = embed(A.op, A.support, model.n_sites, model.local_dim);
    std::vector<double> ts{0.5, 1.0};
    EvolutionPlan plan;
    plan.method = model.op_space_dim() <= 4096
                      ? EvolutionPlan::Method::dense_expm
                      : EvolutionPlan::Method::integrate;
    auto evolved = evolve_sequence(model, A_emb, ts, plan);
    // Schrodinger side evolves A rho
    LatticeModel adj = model;
    for (auto& term : adj.terms)
      term.heisenberg_action = hs_adjoint(term.heisenberg_action);
    auto evolved_adj = evolve_sequence(adj, A_emb * ss.rho, ts, plan);
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
      for (const auto& term : model.terms) {
        if (term.support.intersects(A.support)) continue;
        ComplexMatrix IX = embedded_super_matrix(
            term.heisenberg_action, term.support, model.n_sites, model.local_dim);
        ComplexMatrix IXs = embedded_super_matrix(
            hs_adjoint(term.heisenberg_action), term.support, model.n_sites,
            model.local_dim);
        lrb2.push_back(
            {{"t", ts[ti]},
             {"term", term.label},
             {"heisenberg_norm",
              spectral_norm(devec(IX * vec(evolved[ti]), d))},
             {"schrodinger_state_norm",
              trace_norm(devec(IXs * vec(evolved_adj[ti]), d))}});
      }
    }
  }
  report["propagation_residuals"] = lrb2;
  write_file_atomic(out_path(out_dir, "clustering.json"), report.dump(2) + "\n");
  return (worst_term <= 1e-10 && ss.residual_trace_norm <= 1e-10)
             ? kOk
             : kHypothesisFailure;
}

int run_ultralocal(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.model.family != "twirl_chain")
    throw ConfigError("ultralocal: model family must be twirl_chain");
  LatticeModel model = build_from_config(cfg);

  const auto params = json::parse(cfg.model.params_json);
  const std::string group_s = params.value("group", "pauli");
  auto reps = twirl_group_reps(group_s == "z2" ? TwirlGroup::z2
                                               : TwirlGroup::pauli);
  bool covariant = true;
  for (const auto& term : model.terms)
    covariant = covariant && covariance_check(term, reps);

  const int center = model.n_sites / 2;
  LocalObservable A{observable_matrix(cfg.observable), Support({center})};
  EvolutionPlan plan;
  plan.method = model.op_space_dim() <= 4096 ? EvolutionPlan::Method::dense_expm
                                             : EvolutionPlan::Method::integrate;
  json rows = json::array();
  double worst = 0.0;
  for (double t : cfg.t_grid.make()) {
    const double r = ultra_locality_residual(model, A, t, plan);
    worst = std::max(worst, r);
    rows.push_back({{"t", t}, {"residual", r}});
  }
  json report;
  report["covariant"] = covariant;
  report["site"] = center;
  report["residuals"] = rows;
  report["max_residual"] = worst;
  write_file_atomic(out_path(out_dir, "ultralocal.json"), report.dump(2) + "\n");
  return covariant ? kOk : kHypothesisFailure;
}

}  // namespace

EnvelopeParams envelope_from_report(const LatticeModel& model,
                                    const HypothesisReport& report,
                                    const FSpec& fspec, double norm_a,
                                    double norm_b, int min_support) {
  ReproducingFunction F = make_reproducing_function(
      fspec.form, fspec.a, fspec.p, fspec.mu, model.n_sites);
  EnvelopeParams p;
  p.alpha = report.alpha;
  p.beta = report.beta;
  p.nu = report.nu;
  p.mu = fspec.mu;
  p.f_norm = F.f_norm_cache;
  p.c_mu = F.c_mu_cache;
  p.l_mu_norm = l_mu_norm(model, F, fspec.mu, upper_cb_from_report(report));
  p.norm_a = norm_a;
  p.norm_b = norm_b;
  p.min_support = min_support;
  validate_params(p);
  return p;
}

EnvelopeFit fit_localization_envelope(const std::vector<ProfilePoint>& points,
                                      double v, double lambda) {
  // peak time per distance: only the rising part enters the fit
  std::vector<std::pair<int, double>> peak_t;
  for (const auto& pt : points) {
    bool found = false;
    for (auto& [d, tp] : peak_t)
      if (d == pt.distance) found = true;
    if (!found) {
      double best = 0.0, best_t = 0.0;
      for (const auto& q : points)
        if (q.distance == pt.distance && q.empirical_norm > best) {
          best = q.empirical_norm;
          best_t = q.t;
        }
      peak_t.emplace_back(pt.distance, best_t);
    }
  }
  auto peak_of = [&](int d) {
    for (const auto& [dd, tp] : peak_t)
      if (dd == d) return tp;
    return 0.0;
  };

  // regress ln m against x = (v - lambda) t - d
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& pt : points) {
    if (pt.empirical_norm < 1e-9 || pt.t > peak_of(pt.distance) || pt.t <= 0)
      continue;
    const double x = (v - lambda) * pt.t - pt.distance;
    const double y = std::log(pt.empirical_norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  EnvelopeFit fit;
  fit.points_used = n;
  if (n >= 2 && sxx * n - sx * sx > 1e-12) {
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    if (slope > 1e-6) {
      fit.xi = 1.0 / slope;
      fit.c_prime = std::exp(intercept);
    }
  }
  // the envelope must dominate the data it was fitted to
  for (const auto& pt : points) {
    if (pt.empirical_norm <= 0) continue;
    LocalizationParams lp{lambda, v, fit.xi, fit.c_prime, 1.0, 1.0};
    const double env = localization_envelope(pt.t, pt.distance, lp);
    if (env < pt.empirical_norm && env > 0)
      fit.c_prime *= pt.empirical_norm / env;
  }
  return fit;
}

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  if (cfg.experiment == "check") return run_check(cfg, out_dir);
  if (cfg.experiment == "lightcone") return run_lightcone(cfg, out_dir);
  if (cfg.experiment == "localization") return run_localization(cfg, out_dir);
  if (cfg.experiment == "clustering") return run_clustering(cfg, out_dir);
  if (cfg.experiment == "ultralocal") return run_ultralocal(cfg, out_dir);
  throw ConfigError("unknown experiment " + cfg.experiment);
}

}  // namespace lab
