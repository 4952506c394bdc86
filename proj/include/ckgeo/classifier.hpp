#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ckgeo/gallery.hpp"
#include "ckgeo/lightcone.hpp"

namespace ckgeo {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct Tolerances {
  double rank = kRankTol;
  double flat = 1e-6;
  double var = 1e-6;
};

struct AnalysisConfig {
  std::string example_id;  // empty when an inline patch is supplied
  int grid = 3;
  std::uint64_t seed = 0;
  int max_points = 512;
  Tolerances tol;

  nlohmann::json to_json() const;
  static AnalysisConfig from_json(const nlohmann::json& j);
};

// Build the example either from the registry or from an inline patch
// description carried alongside the config JSON.
GalleryExample example_for(const AnalysisConfig& cfg,
                           const nlohmann::json* inline_doc);

struct PointRecord {
  VectorXd coords;
  int s = -1;
  std::string case_tag;
  int dim_delta = -1;
  double res_flat = 0.0;
  double res_sff_radial = 0.0;
  double res_alpha1_sym = 0.0;
  double res_delta_orth = 0.0;
  VectorXd delta;  // ambient coordinates, <F, delta> = 1; empty if none
  bool flat_point = false;
  std::string error;  // error code name, empty on success
  // extra per-point metrics feeding the aggregates
  double a_delta = 0.0;
  double a_f_identity = 0.0;
  double nullity = 0.0;
  double coupling = 0.0;  // rotation-gauge shape-operator relation, s = 4
  double minimality = 0.0;
};

struct Aggregate {
  std::string classification = "UNDETERMINED";
  double delta_variance = 0.0;
  std::map<std::string, int> counts;
  std::map<std::string, double> max_residuals;
  bool in_theorem_range = true;
};

struct RunReport {
  AnalysisConfig config;
  std::vector<PointRecord> points;
  Aggregate aggregate;
  std::string version = kToolkitVersion;
  double timing_ms = 0.0;

  nlohmann::json to_json() const;
};

// Lexicographic tensor grid over the chart box, capped by seeded
// subsampling; points stay sorted in grid order.
std::vector<VectorXd> sample_grid(const ChartPatch& patch, int grid,
                                  std::uint64_t seed, int cap);
// Seeded uniform draws from the chart box.
std::vector<VectorXd> sample_uniform(const ChartPatch& patch, int count,
                                     std::uint64_t seed);

RunReport analyze(const GalleryExample& example, const AnalysisConfig& cfg);
RunReport analyze(const AnalysisConfig& cfg);

struct SuiteResult {
  bool pass = false;
  std::map<std::string, double> metrics;
  std::string detail;
};

// Named bundles of the module-level identities; deterministic per seed.
SuiteResult verify_suite(const std::string& name, std::uint64_t seed,
                         const Tolerances& tol = {});

}  // namespace ckgeo
