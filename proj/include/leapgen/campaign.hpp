#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "leapgen/leap.hpp"
#include "leapgen/scheme.hpp"

namespace leapgen {

enum class Mode { leap, rej, single_pass };
enum class Statistic { core_size, height, leaves, cherries, path_length, deficit };

std::string mode_name(Mode m);
Mode parse_mode(const std::string& s);
std::string statistic_name(Statistic s);
Statistic parse_statistic(const std::string& s);

struct Campaign {
  std::string cls = "motzkin";
  std::uint64_t n = 100;
  std::uint64_t count = 1000;
  std::uint64_t seed = 1;
  Mode mode = Mode::leap;
  int accel_order = 1;
  double accel_a = 0.5;
  Statistic stat = Statistic::core_size;
  unsigned threads = 1;
};

// throws std::invalid_argument for bad class/statistic/mode combinations
void validate_campaign(const Campaign& c, const SchemeSpec& spec);

struct Histogram {
  std::map<std::int64_t, std::uint64_t> buckets;
  std::vector<std::pair<std::string, std::string>> meta;  // insertion order

  std::uint64_t total() const;
  std::string meta_value(const std::string& key) const;
  bool operator==(const Histogram& o) const { return buckets == o.buckets && meta == o.meta; }
};

struct CampaignTotals {
  std::uint64_t trials = 0, successes = 0, b_draws = 0;
};

// samples are split into fixed chunks; chunk i uses stream i of the seed
constexpr std::uint64_t kChunkSize = 4096;

Histogram run_campaign(const Campaign& c, CampaignTotals* totals = nullptr);
Histogram run_campaign(const Campaign& c, const SchemeSpec& spec, CampaignTotals* totals = nullptr);

// value of the statistic on one object
std::int64_t statistic_value(Statistic s, const ComposedObject& obj);

enum class Format { csv, json };
Format parse_format(const std::string& s);
void emit(const Histogram& h, Format f, std::ostream& os);
Histogram parse_histogram(const std::string& text, Format f);

struct BenchRow {
  std::uint64_t n = 0;
  double mean_seconds = 0;
  double mean_trials = 0;
  double mean_b_draws = 0;
};
std::vector<BenchRow> bench(const SchemeSpec& spec, const std::vector<std::uint64_t>& sizes,
                            std::uint64_t samples, std::uint64_t seed);
void emit_bench(const std::vector<BenchRow>& rows, std::ostream& os);

struct SelftestItem {
  std::string name;
  bool pass = false;
  std::string detail;
};
struct SelftestOptions {
  std::uint64_t seed = 1;
  double rho_perturbation = 0.0;  // fixture for the sensitivity check
};
std::vector<SelftestItem> selftest(const SelftestOptions& opt = {});

}  // namespace leapgen
