#pragma once

// Named experiments behind the CLI: hypothesis check, light cone,
// localization sweep, clustering and ultra-locality.

#include <string>

#include "lab/config.hpp"
#include "lab/csv.hpp"
#include "lab/dynamics.hpp"
#include "lab/models.hpp"

namespace lab {

/// CLI exit codes (the machine contract).
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kHypothesisFailure = 3,
  kNumericFailure = 4,
};

/// Envelope parameters assembled from a hypothesis report and a reproducing
/// function, using the conservative bracket sides (Choi-trace uppers inside
/// ||L||_mu and the numerators, ascent lowers in the denominators).
EnvelopeParams envelope_from_report(const LatticeModel& model,
                                    const HypothesisReport& report,
                                    const FSpec& fspec, double norm_a,
                                    double norm_b, int min_support);

/// Least-squares fit of ln m = ln C' + ((v - lambda) t - d) / xi over the
/// rising part of a profile; returns (c_prime, xi).
struct EnvelopeFit {
  double c_prime = 1.0;
  double xi = 1.0;
  int points_used = 0;
};
EnvelopeFit fit_localization_envelope(const std::vector<ProfilePoint>& points,
                                      double v, double lambda);

/// Runs the configured experiment, writing outputs under `out_dir`.
/// Returns an ExitCode.
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace lab
