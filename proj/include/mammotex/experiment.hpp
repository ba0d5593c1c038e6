#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mammotex/descriptors.hpp"
#include "mammotex/mlp.hpp"
#include "mammotex/preprocess.hpp"

namespace mammotex {

struct SplitSpec {
  double train_fraction = 0.8;
  bool stratified = true;
  std::uint64_t seed = 1;
};

/// Deterministic, disjoint and exhaustive index partition. Stratified mode
/// draws round(fraction * n) training rows from each class.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const std::vector<Label>& labels, const SplitSpec& spec);

std::pair<std::vector<DescriptorVector>, std::vector<DescriptorVector>> split_rows(
    const std::vector<DescriptorVector>& rows, const SplitSpec& spec);

struct ManifestEntry {
  std::string filename;
  Label label = Label::benign;
  std::optional<CropRect> roi;
};

/// Manifest CSV: `filename,label[,x,y,w,h]` per line, no header; blank lines
/// and `#` comments are skipped.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);
void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::filesystem::path& path);

struct StudyConfig {
  GlcmConfig glcm;
  TrainConfig train;
  SplitSpec split;
  int epoch_cap = 1000;
  double r_tolerance = 1e-3;
};

struct GroupResult {
  int group_id = 0;
  int architecture = 0;  // 1 = MLP-1, 2 = MLP-2
  LayerSizes sizes;
  TrainOutcome outcome;
  bool failed = false;
  std::string error;
  bool selected = false;
};

struct ExperimentReport {
  StudyConfig config;
  std::string manifest_path;
  std::size_t image_count = 0;
  std::vector<GroupResult> results;  // 9 groups x 2 architectures
  std::vector<int> selected;
};

/// Trains both architectures on all nine descriptor groups over the manifest
/// images (consumed as-is; run preprocessing beforehand for raw mammograms).
/// Per-group extraction or training failures are recorded in the report and
/// the remaining groups still run.
ExperimentReport run_study(const std::filesystem::path& manifest_path,
                           const StudyConfig& config);

/// A group is selected iff, for both architectures, the training regression
/// value is within r_tolerance of 1, the net converged, and it did so in
/// fewer than epoch_cap epochs.
std::vector<int> select_best(const ExperimentReport& report, int epoch_cap,
                             double r_tolerance);

std::string report_to_csv(const ExperimentReport& report);
std::string report_to_text(const ExperimentReport& report);

struct SynthResult {
  std::vector<std::string> files;
  std::string manifest_path;
};

/// Writes n_images PGMs of size x size pixels plus a labeled manifest into
/// out_dir. Even images are smooth-blob textures labeled benign; odd images
/// are horizontal stripes with speckle labeled malignant. Deterministic for a
/// given seed.
SynthResult generate_synthetic_corpus(int n_images, int size, std::uint64_t seed,
                                      const std::filesystem::path& out_dir);

}  // namespace mammotex
