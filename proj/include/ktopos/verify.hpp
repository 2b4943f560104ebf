#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace ktopos {

/// Enumeration bounds shared by the verification suites.
struct Grid {
  std::string name = "default";
  std::size_t poset_max = 4;        // Ω identification, sheaf condition
  std::size_t roundtrip_max = 5;    // P ≅ Spec(U P)
  std::size_t hom_count_max = 4;    // open maps vs Heyting homs
  std::size_t fiber_depth = 2;      // quantifier grids
  std::size_t utop_depth = 4;
  std::size_t raw_size = 8;         // raw operator sweep
  std::size_t oracle_size = 7;      // prover/ladder cross-check
  std::size_t pi_frame_max = 3;
  std::size_t pi_stage_bound = 4;
  std::size_t cocone_bound = 4;
  std::size_t soundness_models = 500;

  nlohmann::json to_json() const;
};

/// "default" or "small". Throws std::invalid_argument for other names.
Grid grid_named(const std::string& name);

struct Failure {
  std::string key;
  nlohmann::json payload;
};

struct Report {
  std::string suite;
  std::size_t cases = 0;
  std::vector<Failure> failures;
  nlohmann::json grid;
  std::uint64_t seed = 0;
  double wall_seconds = 0;

  bool ok() const { return failures.empty(); }
  /// Deterministic unless `timing` adds the wall time.
  nlohmann::json to_json(bool timing) const;
};

/// Suite names in run order; "all" runs every one of them.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite.
Report run_suite(const std::string& name, const Grid& grid, std::uint64_t seed);

}  // namespace ktopos
