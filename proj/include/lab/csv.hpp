#pragma once

// The shared CSV schema for experiment records, plus atomic file writing.

#include <string>
#include <vector>

namespace lab {

struct PropagationRecord {
  std::string experiment;
  int n_sites = 0;
  int site_a = 0;
  int site_b = 0;
  int distance = 0;
  double t = 0.0;
  double empirical_norm = 0.0;
  double envelope_value = 0.0;
  std::string params_digest;
};

inline constexpr const char* kCsvHeader =
    "experiment,n_sites,site_a,site_b,distance,t,empirical_norm,"
    "envelope_value,params_digest";

/// Full-precision decimal rendering that round-trips doubles exactly.
std::string format_double(double x);

/// Writes records sorted by (distance, t), LF line endings, atomically
/// (temp file + rename).
void emit_csv(const std::string& path, std::vector<PropagationRecord> records);

std::vector<PropagationRecord> parse_csv(const std::string& path);

/// Atomic text-file write (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace lab
