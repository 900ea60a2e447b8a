#include "lab/envelope.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lab {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

double ReproducingFunction::operator()(double r) const {
  switch (form) {
    case Form::power:
      return std::pow(1.0 + r, -p);
    case Form::exponential:
      return std::exp(-a * r);
    case Form::exp_power:
      return std::exp(-a * r) * std::pow(1.0 + r, -p);
  }
  return 0.0;
}

ReproducingFunction make_reproducing_function(ReproducingFunction::Form form,
                                              double a, double p, double mu,
                                              int lattice_size) {
  require(mu >= 0.0, "reproducing function: mu must be nonnegative");
  require(lattice_size >= 1, "reproducing function: empty lattice");
  ReproducingFunction F;
  F.form = form;
  F.a = a;
  F.p = p;
  F.mu = mu;
  F.lattice_size = lattice_size;
  F.f_norm_cache = f_norm(F, lattice_size);
  F.c_mu_cache = c_mu(F, mu, lattice_size);
  return F;
}

double f_norm(const ReproducingFunction& F, int n) {
  require(n >= 1, "f_norm: n must be >= 1");
  double best = 0.0;
  for (int x = 0; x < n; ++x) {
    double s = 0.0;
    for (int y = 0; y < n; ++y) s += F(std::abs(x - y));
    best = std::max(best, s);
  }
  return best;
}

double c_mu(const ReproducingFunction& F, double mu, int n) {
  require(mu >= 0.0, "c_mu: mu must be nonnegative");
  auto Fm = [&](double r) { return std::exp(-mu * r) * F(r); };
  double best = 0.0;
  for (int x = 0; x < n; ++x)
    for (int z = 0; z < n; ++z) {
      const double denom = Fm(std::abs(x - z));
      double s = 0.0;
      for (int y = 0; y < n; ++y)
        s += Fm(std::abs(x - y)) * Fm(std::abs(y - z));
      best = std::max(best, s / denom);
    }
  return best;
}

double c_mu_literal(const ReproducingFunction& F, double mu, int n) {
  // Exponent telescopes to -mu d(y,z); the F(d(x,y)) factors cancel.
  double best = 0.0;
  for (int y = 0; y < n; ++y) {
    double s = 0.0;
    for (int z = 0; z < n; ++z)
      s += F(std::abs(y - z)) * std::exp(-mu * std::abs(y - z));
    best = std::max(best, s);
  }
  return best;
}

double l_mu_norm(const LatticeModel& model, const ReproducingFunction& F,
                 double mu, const std::vector<double>& term_cb_norms) {
  require(term_cb_norms.size() == model.terms.size(),
          "l_mu_norm: missing cb-norm");
  double best = 0.0;
  for (int x = 0; x < model.n_sites; ++x)
    for (int y = 0; y < model.n_sites; ++y) {
      double s = 0.0;
      for (std::size_t k = 0; k < model.terms.size(); ++k) {
        const Support& sup = model.terms[k].support;
        if (!sup.contains(x) || !sup.contains(y)) continue;
        const double d = std::abs(x - y);
        s += term_cb_norms[k] * std::exp(mu * d) / F(d);
      }
      best = std::max(best, s);
    }
  return best;
}

double l_mu_norm(const LatticeModel& model, const ReproducingFunction& F,
                 double mu, CbMode mode, const CbOptions& opts) {
  std::vector<double> cb;
  cb.reserve(model.terms.size());
  for (const auto& term : model.terms)
    cb.push_back(cb_norm(term.heisenberg_action, mode, opts));
  return l_mu_norm(model, F, mu, cb);
}

std::string EnvelopeParams::digest() const {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%d",
                alpha, beta, nu, mu, f_norm, c_mu, l_mu_norm, norm_a, norm_b,
                min_support);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char* c = buf; *c; ++c) {
    h ^= static_cast<unsigned char>(*c);
    h *= 0x100000001b3ull;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return std::string(out);
}

void validate_params(const EnvelopeParams& p) {
  require(p.alpha >= 0 && p.beta >= 0 && p.nu >= 0 && p.mu >= 0 &&
              p.f_norm >= 0 && p.c_mu > 0 && p.l_mu_norm >= 0 &&
              p.norm_a >= 0 && p.norm_b >= 0 && p.min_support >= 1,
          "envelope params: negative parameter");
  require(!(p.beta > 0 && p.nu <= 0), "envelope params: nu must be > 0 when beta > 0");
}

double velocity(double t, const EnvelopeParams& p) {
  return (p.alpha + p.beta * std::exp(-p.nu * t)) * p.c_mu * p.l_mu_norm;
}

double integrated_velocity(double t, const EnvelopeParams& p) {
  double damped = 0.0;
  if (p.beta > 0.0) damped = p.beta * (1.0 - std::exp(-p.nu * t)) / p.nu;
  return p.c_mu * p.l_mu_norm * (p.alpha * t + damped);
}

double lr_envelope(double t, double dist, const EnvelopeParams& p) {
  const double pre =
      2.0 * (p.f_norm / p.c_mu) * p.norm_a * p.norm_b * p.min_support;
  return pre * std::expm1(integrated_velocity(t, p)) * std::exp(-p.mu * dist);
}

double lr_envelope_log(double t, double dist, const EnvelopeParams& p) {
  const double pre =
      2.0 * (p.f_norm / p.c_mu) * p.norm_a * p.norm_b * p.min_support;
  const double E = integrated_velocity(t, p);
  double log_expm1;
  if (E <= 0.0)
    log_expm1 = -std::numeric_limits<double>::infinity();
  else if (E > 36.0)
    log_expm1 = E;  // expm1(E) == exp(E) to double precision
  else
    log_expm1 = std::log(std::expm1(E));
  return std::log(pre) + log_expm1 - p.mu * dist;
}

double localization_envelope(double t, double dist,
                             const LocalizationParams& p) {
  return p.c_prime * p.norm_a * p.norm_b *
         std::exp((-p.lambda * t + p.v * t - dist) / p.xi);
}

double clustering_envelope(double dist, double xi, double v, double lambda_gap,
                           double norm_a, double norm_b) {
  require(xi > 0 && lambda_gap > 0 && v >= 0, "clustering_envelope: bad parameters");
  return norm_a * norm_b * std::exp(-dist / (xi + v / lambda_gap));
}

}  // namespace lab
