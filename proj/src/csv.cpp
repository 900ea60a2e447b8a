#include "lab/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lab {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void emit_csv(const std::string& path, std::vector<PropagationRecord> records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const PropagationRecord& a, const PropagationRecord& b) {
                     if (a.distance != b.distance) return a.distance < b.distance;
                     return a.t < b.t;
                   });
  std::string out;
  out += kCsvHeader;
  out += '\n';
  for (const auto& r : records) {
    out += r.experiment;
    out += ',' + std::to_string(r.n_sites);
    out += ',' + std::to_string(r.site_a);
    out += ',' + std::to_string(r.site_b);
    out += ',' + std::to_string(r.distance);
    out += ',' + format_double(r.t);
    out += ',' + format_double(r.empirical_norm);
    out += ',' + format_double(r.envelope_value);
    out += ',' + r.params_digest;
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<PropagationRecord> parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV " + path);
  if (line != kCsvHeader)
    throw std::runtime_error("unexpected CSV header in " + path);
  std::vector<PropagationRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    PropagationRecord r;
    auto next = [&]() {
      if (!std::getline(ss, field, ','))
        throw std::runtime_error("short CSV row in " + path);
      return field;
    };
    r.experiment = next();
    r.n_sites = std::stoi(next());
    r.site_a = std::stoi(next());
    r.site_b = std::stoi(next());
    r.distance = std::stoi(next());
    r.t = std::stod(next());
    r.empirical_norm = std::stod(next());
    r.envelope_value = std::stod(next());
    r.params_digest = next();
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace lab
