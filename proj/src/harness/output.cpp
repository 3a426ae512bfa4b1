#include <charconv>
#include <fstream>
#include <ostream>

#include "arbandit/harness.hpp"
#include "arbandit/kernels.hpp"

namespace arb {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_results_csv(std::ostream& os, const std::vector<ExperimentResult>& results) {
  os << "regime,k,policy,mean_normalized_regret,std_normalized_regret,instances_used,"
        "instances_excluded\n";
  for (const auto& r : results) {
    for (const auto& p : r.policies) {
      os << format_double(r.regime) << ',' << r.arms << ',' << p.name << ','
         << format_double(p.stats.mean) << ',' << format_double(p.stats.stddev) << ',' << p.used
         << ',' << p.excluded << '\n';
    }
  }
}

void write_table_csv(std::ostream& os, const std::vector<ExperimentResult>& results,
                     const std::string& field) {
  if (results.empty()) return;
  os << "regime,k";
  for (const auto& p : results.front().policies) os << ',' << p.name;
  os << '\n';
  for (const auto& r : results) {
    os << format_double(r.regime) << ',' << r.arms;
    for (const auto& p : r.policies)
      os << ',' << format_double(field == "std" ? p.stats.stddev : p.stats.mean);
    os << '\n';
  }
}

void write_robustness_csv(std::ostream& os, const std::vector<RobustnessRow>& rows) {
  os << "policy,p,mean,min,q1,median,q3,max,instances_used\n";
  for (const auto& r : rows) {
    os << r.policy << ',' << format_double(r.pct) << ',' << format_double(r.stats.mean);
    if (r.normalized.empty()) {
      os << ",,,,,,0\n";
      continue;
    }
    for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) os << ',' << format_double(quantile(r.normalized, q));
    os << ',' << r.normalized.size() << '\n';
  }
}

nlohmann::json manifest_base(const std::string& command) {
  return {{"tool", "arbandit"},
          {"version", "1.0.0"},
          {"command", command},
          {"simd_isa", std::string(simd::isa_name(simd::active_isa()))}};
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace arb
