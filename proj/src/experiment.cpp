#include "mammotex/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mammotex/error.hpp"
#include "mammotex/pgm.hpp"
#include "mammotex/rng.hpp"

namespace mammotex {

namespace {

void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = rng.next_u64() % i;
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const std::vector<Label>& labels, const SplitSpec& spec) {
  if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0)
    raise(Errc::invalid_params, "train_fraction must lie in (0, 1)");
  std::vector<std::size_t> train, test;
  Rng rng(spec.seed);
  if (spec.stratified) {
    for (Label cls : {Label::benign, Label::malignant}) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == cls) idx.push_back(i);
      if (idx.size() < 2)
        raise(Errc::too_few_samples,
              "stratified split needs at least two rows per class");
      shuffle_indices(idx, rng);
      const std::size_t n_train = static_cast<std::size_t>(
          std::llround(spec.train_fraction * static_cast<double>(idx.size())));
      for (std::size_t k = 0; k < idx.size(); ++k)
        (k < n_train ? train : test).push_back(idx[k]);
    }
  } else {
    if (labels.size() < 2)
      raise(Errc::too_few_samples, "split needs at least two rows");
    std::vector<std::size_t> idx(labels.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    shuffle_indices(idx, rng);
    const std::size_t n_train = static_cast<std::size_t>(
        std::llround(spec.train_fraction * static_cast<double>(idx.size())));
    for (std::size_t k = 0; k < idx.size(); ++k)
      (k < n_train ? train : test).push_back(idx[k]);
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

std::pair<std::vector<DescriptorVector>, std::vector<DescriptorVector>> split_rows(
    const std::vector<DescriptorVector>& rows, const SplitSpec& spec) {
  std::vector<Label> labels(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) labels[i] = rows[i].label;
  const auto [train_idx, test_idx] = split_indices(labels, spec);
  std::vector<DescriptorVector> train, test;
  train.reserve(train_idx.size());
  test.reserve(test_idx.size());
  for (std::size_t i : train_idx) train.push_back(rows[i]);
  for (std::size_t i : test_idx) test.push_back(rows[i]);
  return {std::move(train), std::move(test)};
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_failure, "cannot open manifest " + path.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 2 && fields.size() != 6)
      raise(Errc::malformed_row, "manifest line " + std::to_string(lineno) +
                                     ": expected filename,label[,x,y,w,h]");
    ManifestEntry entry;
    entry.filename = fields[0];
    entry.label = parse_label(fields[1]);
    if (fields.size() == 6) {
      try {
        entry.roi = CropRect{std::stoi(fields[2]), std::stoi(fields[3]),
                             std::stoi(fields[4]), std::stoi(fields[5])};
      } catch (const std::exception&) {
        raise(Errc::malformed_row,
              "manifest line " + std::to_string(lineno) + ": non-integer RoI field");
      }
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Errc::io_failure, "cannot open " + path.string() + " for writing");
  for (const ManifestEntry& e : entries) {
    out << e.filename << ',' << label_name(e.label);
    if (e.roi)
      out << ',' << e.roi->x << ',' << e.roi->y << ',' << e.roi->width << ','
          << e.roi->height;
    out << "\n";
  }
  if (!out) raise(Errc::io_failure, "write failed for " + path.string());
}

ExperimentReport run_study(const std::filesystem::path& manifest_path,
                           const StudyConfig& config) {
  const std::vector<ManifestEntry> manifest = load_manifest(manifest_path);
  if (manifest.empty()) raise(Errc::empty_dataset, "manifest lists no images");
  const std::filesystem::path base = manifest_path.parent_path();

  ExperimentReport report;
  report.config = config;
  report.manifest_path = manifest_path.string();
  report.image_count = manifest.size();

  // Features are computed once per image; every group is a fixed arrangement
  // of the same values. Unreadable files violate the precondition and abort;
  // extraction failures mark every group failed but the report still completes.
  std::vector<ImageFeatures> features;
  std::vector<Label> labels;
  std::string extract_error;
  features.reserve(manifest.size());
  labels.reserve(manifest.size());
  for (const ManifestEntry& entry : manifest) {
    const std::filesystem::path file = base / entry.filename;
    if (!std::filesystem::exists(file))
      raise(Errc::missing_image, "manifest names missing file " + file.string());
    const GrayImage image = read_pgm_file(file);
    try {
      features.push_back(compute_image_features(image, config.glcm));
    } catch (const Error& e) {
      extract_error = entry.filename + ": " + e.what();
      break;
    }
    labels.push_back(entry.label);
  }

  for (const DescriptorGroup& group : descriptor_groups()) {
    std::vector<DescriptorVector> rows;
    if (extract_error.empty()) {
      rows.reserve(manifest.size());
      for (std::size_t i = 0; i < manifest.size(); ++i) {
        DescriptorVector row = assemble_group(features[i], group.id);
        row.label = labels[i];
        row.source_id = manifest[i].filename;
        rows.push_back(std::move(row));
      }
    }

    for (int rule : {1, 2}) {
      GroupResult result;
      result.group_id = group.id;
      result.architecture = rule;
      if (!extract_error.empty()) {
        result.failed = true;
        result.error = extract_error;
        report.results.push_back(std::move(result));
        continue;
      }
      try {
        auto [train_rows, test_rows] = split_rows(rows, config.split);
        TrainConfig train_cfg = config.train;
        // independent initialization stream per (group, architecture)
        train_cfg.seed = mix_seed(config.train.seed,
                                  static_cast<std::uint64_t>(group.id) * 2 + rule);
        auto [model, outcome] = train_on_rows(train_rows, rule, train_cfg);
        result.sizes = model.sizes;
        if (test_rows.size() >= 2) {
          std::vector<double> outputs(test_rows.size()), targets(test_rows.size());
          for (std::size_t i = 0; i < test_rows.size(); ++i) {
            outputs[i] = predict(model, test_rows[i].values);
            targets[i] = test_rows[i].label == Label::malignant ? 1.0 : -1.0;
          }
          outcome.regression_test = regression_value(outputs, targets).r;
        }
        result.outcome = outcome;
      } catch (const Error& e) {
        result.failed = true;
        result.error = e.what();
      }
      report.results.push_back(std::move(result));
    }
  }

  report.selected = select_best(report, config.epoch_cap, config.r_tolerance);
  for (GroupResult& r : report.results)
    r.selected = std::find(report.selected.begin(), report.selected.end(),
                           r.group_id) != report.selected.end();
  return report;
}

std::vector<int> select_best(const ExperimentReport& report, int epoch_cap,
                             double r_tolerance) {
  const GroupResult* slots[9][2] = {};
  for (const GroupResult& r : report.results) {
    if (r.group_id < 1 || r.group_id > 9 || (r.architecture != 1 && r.architecture != 2))
      raise(Errc::incomplete_report, "result with invalid group or architecture");
    slots[r.group_id - 1][r.architecture - 1] = &r;
  }
  std::vector<int> selected;
  for (int g = 1; g <= 9; ++g) {
    bool pass = true;
    for (int a = 0; a < 2; ++a) {
      const GroupResult* r = slots[g - 1][a];
      if (!r)
        raise(Errc::incomplete_report,
              "missing result for group " + std::to_string(g) + " MLP-" +
                  std::to_string(a + 1));
      pass = pass && !r->failed && r->outcome.converged &&
             r->outcome.epochs_used < epoch_cap &&
             r->outcome.regression_train >= 1.0 - r_tolerance;
    }
    if (pass) selected.push_back(g);
  }
  return selected;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "group,arch,input,hidden,epochs,mse,r_train,r_test,converged,selected\n";
  for (const GroupResult& r : report.results) {
    out << r.group_id << ",MLP-" << r.architecture << ',';
    if (r.failed) {
      out << ",,,,,,0," << (r.selected ? 1 : 0) << "\n";
      continue;
    }
    out << r.sizes.input << ',' << r.sizes.hidden << ',' << r.outcome.epochs_used
        << ',' << fmt(r.outcome.final_mse) << ',' << fmt(r.outcome.regression_train)
        << ',';
    if (r.outcome.regression_test) out << fmt(*r.outcome.regression_test);
    out << ',' << (r.outcome.converged ? 1 : 0) << ',' << (r.selected ? 1 : 0)
        << "\n";
  }
  return out.str();
}

std::string report_to_text(const ExperimentReport& report) {
  std::ostringstream out;
  const StudyConfig& c = report.config;
  out << "descriptor study over " << report.image_count << " images ("
      << report.manifest_path << ")\n";
  out << "glcm: levels=" << c.glcm.levels << " distance=" << c.glcm.distance
      << " symmetric=" << (c.glcm.symmetric ? "true" : "false") << " variant="
      << (c.glcm.variant == GlcmVariant::canonical ? "canonical" : "as_printed")
      << "\n";
  out << "train: lr=" << fmt_short(c.train.learning_rate) << " momentum="
      << fmt_short(c.train.momentum) << " error_goal=" << fmt_short(c.train.error_goal)
      << " max_epochs=" << c.train.max_epochs << " seed=" << c.train.seed << "\n";
  out << "split: fraction=" << fmt_short(c.split.train_fraction) << " stratified="
      << (c.split.stratified ? "true" : "false") << " seed=" << c.split.seed << "\n";
  out << "selection: epoch_cap=" << c.epoch_cap << " r_tolerance="
      << fmt_short(c.r_tolerance) << "\n\n";

  char line[160];
  std::snprintf(line, sizeof(line), "%-3s %-29s %-6s %6s %7s %7s %10s %9s %9s %5s %4s\n",
                "id", "descriptor group", "arch", "input", "hidden", "epochs",
                "mse", "r_train", "r_test", "conv", "sel");
  out << line;
  for (const GroupResult& r : report.results) {
    const DescriptorGroup& g = descriptor_group(r.group_id);
    if (r.failed) {
      std::snprintf(line, sizeof(line), "%-3d %-29s MLP-%-2d failed: %s\n", r.group_id,
                    std::string(g.name).c_str(), r.architecture, r.error.c_str());
      out << line;
      continue;
    }
    std::snprintf(line, sizeof(line),
                  "%-3d %-29s MLP-%-2d %6d %7d %7d %10.3g %9s %9s %5s %4s\n",
                  r.group_id, std::string(g.name).c_str(), r.architecture,
                  r.sizes.input, r.sizes.hidden, r.outcome.epochs_used,
                  r.outcome.final_mse, fmt_fixed(r.outcome.regression_train).c_str(),
                  r.outcome.regression_test ? fmt_fixed(*r.outcome.regression_test).c_str()
                                            : "-",
                  r.outcome.converged ? "yes" : "no", r.selected ? "yes" : "no");
    out << line;
  }
  out << "\nselected groups:";
  if (report.selected.empty()) {
    out << " none";
  } else {
    for (int g : report.selected)
      out << " " << g << " (" << descriptor_group(g).name << ")";
  }
  out << "\n";
  return out.str();
}

}  // namespace mammotex
