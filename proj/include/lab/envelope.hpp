#pragma once

// Reproducing-function machinery and the closed-form bounds: ||F||, C_mu,
// ||L||_mu, the time-dependent velocity, the light-cone envelope and the
// localization / clustering envelopes.

#include <string>

#include "lab/hypothesis.hpp"
#include "lab/lattice_model.hpp"

namespace lab {

struct ReproducingFunction {
  enum class Form { power, exponential, exp_power };
  Form form = Form::exp_power;
  double a = 0.5;  // exponential rate (exponential / exp_power forms)
  double p = 2.0;  // power-law exponent (power / exp_power forms)
  double mu = 0.0;
  int lattice_size = 0;
  double f_norm_cache = 0.0;
  double c_mu_cache = 0.0;

  double operator()(double r) const;
};

/// Builds the function and fills the cached ||F|| and C_mu for the chain.
ReproducingFunction make_reproducing_function(ReproducingFunction::Form form,
                                              double a, double p, double mu,
                                              int lattice_size);

/// sup_x sum_y F(d(x,y)) on the finite chain [0, n).
double f_norm(const ReproducingFunction& F, int n);

/// Convolution constant sup_{x,z} sum_y F_mu(d(x,y)) F_mu(d(y,z)) / F_mu(d(x,z))
/// with F_mu(r) = exp(-mu r) F(r).
double c_mu(const ReproducingFunction& F, double mu, int n);

/// The degenerate quantity obtained by reading the constant's defining
/// display verbatim (its exponent telescopes); kept for comparison only.
double c_mu_literal(const ReproducingFunction& F, double mu, int n);

/// sup_{x,y} sum_{Z containing x and y} ||I_Z||_cb e^{mu d(x,y)} / F(d(x,y)),
/// with the cb norms supplied per term (same order as model.terms).
double l_mu_norm(const LatticeModel& model, const ReproducingFunction& F,
                 double mu, const std::vector<double>& term_cb_norms);

/// Convenience overload computing the cb norms in the requested mode.
double l_mu_norm(const LatticeModel& model, const ReproducingFunction& F,
                 double mu, CbMode mode, const CbOptions& opts = {});

struct EnvelopeParams {
  double alpha = 0.0;
  double beta = 0.0;
  double nu = 0.0;
  double mu = 0.0;
  double f_norm = 0.0;
  double c_mu = 0.0;
  double l_mu_norm = 0.0;
  double norm_a = 1.0;
  double norm_b = 1.0;
  int min_support = 1;

  /// FNV-1a hash of the canonical serialization; identifies a parameter set
  /// in experiment records.
  std::string digest() const;
};

/// Throws unless all parameters are admissible (nonnegative, nu > 0 when
/// beta > 0).
void validate_params(const EnvelopeParams& p);

/// v(t) = [alpha + beta e^{-nu t}] C_mu ||L||_mu
double velocity(double t, const EnvelopeParams& p);

/// int_0^t v = C_mu ||L||_mu [alpha t + beta (1 - e^{-nu t}) / nu]
double integrated_velocity(double t, const EnvelopeParams& p);

/// 2 (||F||/C_mu) ||A|| ||B|| min_support (e^{int v} - 1) e^{-mu d}
double lr_envelope(double t, double dist, const EnvelopeParams& p);

/// log of lr_envelope, finite even where the linear value overflows;
/// -inf at t = 0.
double lr_envelope_log(double t, double dist, const EnvelopeParams& p);

struct LocalizationParams {
  double lambda = 0.0;  // dissipation rate
  double v = 0.0;       // interaction velocity
  double xi = 1.0;      // decay length
  double c_prime = 1.0;
  double norm_a = 1.0;
  double norm_b = 1.0;
};

/// C' ||A|| ||B|| exp((-lambda t + v t - d) / xi)
double localization_envelope(double t, double dist, const LocalizationParams& p);

/// ||A|| ||B|| exp(-d / (xi + v / lambda_gap))
double clustering_envelope(double dist, double xi, double v, double lambda_gap,
                           double norm_a, double norm_b);

}  // namespace lab
