#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "expanderlab/generators.hpp"
#include "expanderlab/json_writer.hpp"
#include "expanderlab/spectral.hpp"

namespace expanderlab {

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

void write_config(JsonWriter& w, const ShootingConfig& config);

/// Geometry file: kind, n, ds, samples [{s, x, T, k}], orientation, config,
/// residual summary. Hyperplanes have no samples.
std::string geometry_json(const SweepMember& member);

/// Rebuilds a member from a geometry file; residual, convexity and cone
/// angle are recomputed from the samples. Throws InvalidInput.
SweepMember load_geometry(const std::filesystem::path& path);

/// One geometry file name per member id: "<id>.json".
std::string geometry_file_name(const SweepMember& member);

struct SweepEntry {
  std::string file;
  std::string id;
  std::string kind;
  int n = 1;
  std::string role;
  ShootingConfig config;
  double residual_max = 0.0;
  std::string convexity;
  double cone_angle = 0.0;
};

SweepEntry sweep_entry(const SweepMember& member, const std::string& file);

/// Index of generated members, ordered by file name.
std::string sweep_json(std::vector<SweepEntry> entries);
std::vector<SweepEntry> load_sweep(const std::filesystem::path& path);

/// Entries of `added` replace entries of `existing` with the same file.
std::vector<SweepEntry> merge_sweep(std::vector<SweepEntry> existing, const std::vector<SweepEntry>& added);

/// Loads every member listed in a sweep index (paths relative to it).
std::vector<SweepMember> load_sweep_members(const std::filesystem::path& path);

struct SpectrumMeta {
  std::string input;
  std::string surface_id;
  std::string surface_kind;
  int n = 1;
  PotentialKind kind = PotentialKind::DriftOnly;
};

std::string spectrum_json(const SpectrumResult& result, const SpectrumMeta& meta);

/// Header "s,psi_1,...,psi_m", one grid node per row.
std::string eigenvector_csv(const SpectrumResult& result);

}  // namespace expanderlab
