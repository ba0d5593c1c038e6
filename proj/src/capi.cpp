#include "mammotex.h"

#include <cstring>
#include <new>
#include <span>
#include <string>

#include "mammotex/descriptors.hpp"
#include "mammotex/error.hpp"
#include "mammotex/experiment.hpp"
#include "mammotex/glcm.hpp"
#include "mammotex/mlp.hpp"
#include "mammotex/pgm.hpp"
#include "mammotex/preprocess.hpp"

using namespace mammotex;

namespace {

thread_local std::string g_last_error;

mt_status to_status(Errc code) {
  switch (code) {
    case Errc::unsupported_magic: return MT_ERR_UNSUPPORTED_MAGIC;
    case Errc::unsupported_depth: return MT_ERR_UNSUPPORTED_DEPTH;
    case Errc::truncated_data: return MT_ERR_TRUNCATED_DATA;
    case Errc::malformed_header: return MT_ERR_MALFORMED_HEADER;
    case Errc::out_of_bounds: return MT_ERR_OUT_OF_BOUNDS;
    case Errc::invalid_params: return MT_ERR_INVALID_PARAMS;
    case Errc::degenerate_image: return MT_ERR_DEGENERATE_IMAGE;
    case Errc::empty_image: return MT_ERR_EMPTY_IMAGE;
    case Errc::degenerate_texture: return MT_ERR_DEGENERATE_TEXTURE;
    case Errc::zero_marginal_variance: return MT_ERR_ZERO_MARGINAL_VARIANCE;
    case Errc::no_valid_pairs: return MT_ERR_NO_VALID_PAIRS;
    case Errc::missing_direction: return MT_ERR_MISSING_DIRECTION;
    case Errc::empty_dataset: return MT_ERR_EMPTY_DATASET;
    case Errc::mixed_groups: return MT_ERR_MIXED_GROUPS;
    case Errc::dimension_mismatch: return MT_ERR_DIMENSION_MISMATCH;
    case Errc::malformed_row: return MT_ERR_MALFORMED_ROW;
    case Errc::unknown_label: return MT_ERR_UNKNOWN_LABEL;
    case Errc::inconsistent_width: return MT_ERR_INCONSISTENT_WIDTH;
    case Errc::non_finite_loss: return MT_ERR_NON_FINITE_LOSS;
    case Errc::length_mismatch: return MT_ERR_LENGTH_MISMATCH;
    case Errc::too_few_samples: return MT_ERR_TOO_FEW_SAMPLES;
    case Errc::incomplete_report: return MT_ERR_INCOMPLETE_REPORT;
    case Errc::missing_image: return MT_ERR_MISSING_IMAGE;
    case Errc::io_failure: return MT_ERR_IO_FAILURE;
  }
  return MT_ERR_INTERNAL;
}

template <typename Fn>
mt_status guarded(Fn&& fn) {
  try {
    fn();
    return MT_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MT_ERR_INTERNAL;
  }
}

mt_status null_argument(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return MT_ERR_NULL_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Direction direction_from_degrees(int deg) {
  switch (deg) {
    case 0: return Direction::deg0;
    case 45: return Direction::deg45;
    case 90: return Direction::deg90;
    case 135: return Direction::deg135;
  }
  raise(Errc::invalid_params, "direction must be 0, 45, 90 or 135");
}

GlcmConfig to_glcm_config(const mt_glcm_config* c) {
  GlcmConfig out;
  if (c) {
    out.levels = c->levels;
    out.distance = c->distance;
    out.symmetric = c->symmetric != 0;
    out.variant = c->variant == MT_GLCM_AS_PRINTED ? GlcmVariant::as_printed
                                                   : GlcmVariant::canonical;
  }
  return out;
}

TrainConfig to_train_config(const mt_train_config* c) {
  TrainConfig out;
  if (c) {
    out.learning_rate = c->learning_rate;
    out.momentum = c->momentum;
    out.error_goal = c->error_goal;
    out.max_epochs = c->max_epochs;
    out.seed = c->seed;
  }
  return out;
}

ClaheParams to_clahe_params(const mt_clahe_params* c) {
  ClaheParams out;
  if (c) {
    out.tiles_x = c->tiles_x;
    out.tiles_y = c->tiles_y;
    out.clip_limit = c->clip_limit;
    out.bins = c->bins;
  }
  return out;
}

SplitSpec to_split_spec(const mt_split_spec* c) {
  SplitSpec out;
  if (c) {
    out.train_fraction = c->train_fraction;
    out.stratified = c->stratified != 0;
    out.seed = c->seed;
  }
  return out;
}

mt_train_outcome to_c_outcome(const TrainOutcome& o) {
  mt_train_outcome out{};
  out.epochs_used = o.epochs_used;
  out.final_mse = o.final_mse;
  out.converged = o.converged ? 1 : 0;
  out.regression_train = o.regression_train;
  out.has_regression_test = o.regression_test.has_value() ? 1 : 0;
  out.regression_test = o.regression_test.value_or(0.0);
  return out;
}

}  // namespace

struct mt_image {
  GrayImage img;
};
struct mt_dataset {
  int group_id;
  std::vector<DescriptorVector> rows;
};
struct mt_model {
  MlpModel model;
};
struct mt_manifest {
  std::vector<ManifestEntry> entries;
};
struct mt_report {
  ExperimentReport report;
};
struct mt_roi_table {
  std::map<std::string, CropRect> rois;
};

extern "C" {

const char* mt_status_name(mt_status status) {
  switch (status) {
    case MT_OK: return "Ok";
    case MT_ERR_NULL_ARGUMENT: return "NullArgument";
    case MT_ERR_INTERNAL: return "Internal";
    default: break;
  }
  for (Errc c : {Errc::unsupported_magic, Errc::unsupported_depth, Errc::truncated_data,
                 Errc::malformed_header, Errc::out_of_bounds, Errc::invalid_params,
                 Errc::degenerate_image, Errc::empty_image, Errc::degenerate_texture,
                 Errc::zero_marginal_variance, Errc::no_valid_pairs,
                 Errc::missing_direction, Errc::empty_dataset, Errc::mixed_groups,
                 Errc::dimension_mismatch, Errc::malformed_row, Errc::unknown_label,
                 Errc::inconsistent_width, Errc::non_finite_loss, Errc::length_mismatch,
                 Errc::too_few_samples, Errc::incomplete_report, Errc::missing_image,
                 Errc::io_failure})
    if (to_status(c) == status) return errc_name(c);
  return "UnknownStatus";
}

const char* mt_last_error(void) { return g_last_error.c_str(); }

const char* mt_version(void) { return "0.1.0"; }

/* --------------------------------------------------------------- images */

mt_status mt_image_create(int width, int height, const uint8_t* pixels,
                          mt_image** out) {
  if (!pixels || !out) return null_argument("pixels/out");
  return guarded([&] {
    if (width < 1 || height < 1)
      raise(Errc::invalid_params, "image dimensions must be positive");
    auto* h = new mt_image;
    h->img.width = width;
    h->img.height = height;
    h->img.pixels.assign(pixels, pixels + static_cast<size_t>(width) * height);
    *out = h;
  });
}

mt_status mt_image_parse_pgm(const uint8_t* bytes, size_t len, mt_image** out) {
  if (!bytes || !out) return null_argument("bytes/out");
  return guarded([&] { *out = new mt_image{parse_pgm({bytes, len})}; });
}

mt_status mt_image_encode_pgm(const mt_image* image, int binary,
                              uint8_t** bytes_out, size_t* len_out) {
  if (!image || !bytes_out || !len_out) return null_argument("image/bytes_out/len_out");
  return guarded([&] {
    const std::vector<uint8_t> bytes = encode_pgm(image->img, binary != 0);
    auto* buf = new uint8_t[bytes.size()];
    std::memcpy(buf, bytes.data(), bytes.size());
    *bytes_out = buf;
    *len_out = bytes.size();
  });
}

mt_status mt_image_read_pgm(const char* path, mt_image** out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] { *out = new mt_image{read_pgm_file(path)}; });
}

mt_status mt_image_write_pgm(const mt_image* image, const char* path, int binary) {
  if (!image || !path) return null_argument("image/path");
  return guarded([&] { write_pgm_file(image->img, path, binary != 0); });
}

int mt_image_width(const mt_image* image) { return image ? image->img.width : 0; }
int mt_image_height(const mt_image* image) { return image ? image->img.height : 0; }
const uint8_t* mt_image_pixels(const mt_image* image) {
  return image ? image->img.pixels.data() : nullptr;
}
void mt_image_free(mt_image* image) { delete image; }
void mt_bytes_free(uint8_t* bytes) { delete[] bytes; }
void mt_string_free(char* text) { delete[] text; }

/* ----------------------------------------------------------- preprocess */

mt_clahe_params mt_clahe_defaults(void) {
  const ClaheParams d;
  return mt_clahe_params{d.tiles_x, d.tiles_y, d.clip_limit, d.bins};
}

mt_status mt_crop(const mt_image* image, int x, int y, int w, int h, mt_image** out) {
  if (!image || !out) return null_argument("image/out");
  return guarded([&] { *out = new mt_image{crop(image->img, CropRect{x, y, w, h})}; });
}

mt_status mt_resize(const mt_image* image, int w, int h, mt_image** out) {
  if (!image || !out) return null_argument("image/out");
  return guarded([&] { *out = new mt_image{resize_to(image->img, w, h)}; });
}

mt_status mt_remove_background(const mt_image* image, mt_image** out,
                               int* degenerate_warning) {
  if (!image || !out) return null_argument("image/out");
  return guarded([&] {
    BackgroundResult r = remove_background(image->img);
    if (degenerate_warning) *degenerate_warning = r.degenerate ? 1 : 0;
    *out = new mt_image{std::move(r.image)};
  });
}

mt_status mt_median_filter3(const mt_image* image, mt_image** out) {
  if (!image || !out) return null_argument("image/out");
  return guarded([&] { *out = new mt_image{median_filter3(image->img)}; });
}

mt_status mt_clahe(const mt_image* image, const mt_clahe_params* params,
                   mt_image** out) {
  if (!image || !out) return null_argument("image/out");
  return guarded([&] { *out = new mt_image{clahe(image->img, to_clahe_params(params))}; });
}

mt_status mt_preprocess_chain(const mt_image* image, const int* roi_xywh,
                              int resize_w, int resize_h,
                              const mt_clahe_params* params, mt_image** out,
                              int* degenerate_warning) {
  if (!image || !out) return null_argument("image/out");
  return guarded([&] {
    std::optional<CropRect> roi;
    if (roi_xywh) roi = CropRect{roi_xywh[0], roi_xywh[1], roi_xywh[2], roi_xywh[3]};
    PreprocessResult r = preprocess_chain(image->img, roi, resize_w, resize_h,
                                          to_clahe_params(params));
    if (degenerate_warning) *degenerate_warning = r.background_degenerate ? 1 : 0;
    *out = new mt_image{std::move(r.image)};
  });
}

/* ------------------------------------------------------------- features */

mt_glcm_config mt_glcm_defaults(void) {
  const GlcmConfig d;
  return mt_glcm_config{d.levels, d.distance, d.symmetric ? 1 : 0,
                        MT_GLCM_CANONICAL};
}

mt_status mt_first_order_features(const mt_image* image, double out5[5],
                                  int* degenerate) {
  if (!image || !out5) return null_argument("image/out5");
  return guarded([&] {
    const FirstOrderFeatures f = first_order_features(histogram(image->img));
    const auto v = f.ordered();
    for (int i = 0; i < 5; ++i) out5[i] = v[i];
    if (degenerate) *degenerate = f.degenerate ? 1 : 0;
  });
}

mt_status mt_glcm_features(const mt_image* image, int direction_deg,
                           const mt_glcm_config* config, double out6[6],
                           int* zero_marginal_variance) {
  if (!image || !out6) return null_argument("image/out6");
  return guarded([&] {
    const GlcmConfig cfg = to_glcm_config(config);
    const GlcmFeatures f =
        glcm_features(compute_glcm(image->img, direction_from_degrees(direction_deg), cfg));
    const auto v = f.ordered();
    for (int i = 0; i < 6; ++i) out6[i] = v[i];
    if (zero_marginal_variance) *zero_marginal_variance = f.zero_marginal_variance ? 1 : 0;
  });
}

int mt_descriptor_group_dimension(int group_id) {
  if (group_id < 1 || group_id > 9) return -1;
  return descriptor_group(group_id).dimension;
}

const char* mt_descriptor_group_name(int group_id) {
  if (group_id < 1 || group_id > 9) return nullptr;
  return descriptor_group(group_id).name.data();
}

mt_status mt_extract_group(const mt_image* image, int group_id,
                           const mt_glcm_config* config, double* out,
                           size_t capacity, size_t* length, int* degenerate) {
  if (!image || !out) return null_argument("image/out");
  return guarded([&] {
    const DescriptorVector row =
        extract_group(image->img, group_id, to_glcm_config(config));
    if (capacity < row.values.size())
      raise(Errc::dimension_mismatch,
            "capacity " + std::to_string(capacity) + " below group dimension " +
                std::to_string(row.values.size()));
    for (size_t i = 0; i < row.values.size(); ++i) out[i] = row.values[i];
    if (length) *length = row.values.size();
    if (degenerate) *degenerate = row.degenerate_substituted ? 1 : 0;
  });
}

/* ------------------------------------------------------------- datasets */

mt_status mt_dataset_create(int group_id, mt_dataset** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    descriptor_group(group_id);  // validates the id
    *out = new mt_dataset{group_id, {}};
  });
}

mt_status mt_dataset_append(mt_dataset* dataset, const char* source_id, int label,
                            const double* values, size_t len) {
  if (!dataset || !source_id || !values) return null_argument("dataset/source_id/values");
  return guarded([&] {
    const DescriptorGroup& g = descriptor_group(dataset->group_id);
    if (len != static_cast<size_t>(g.dimension))
      raise(Errc::inconsistent_width,
            "row width " + std::to_string(len) + " does not match group dimension " +
                std::to_string(g.dimension));
    DescriptorVector row;
    row.group_id = dataset->group_id;
    row.source_id = source_id;
    row.label = label == MT_LABEL_MALIGNANT ? Label::malignant : Label::benign;
    row.values.assign(values, values + len);
    dataset->rows.push_back(std::move(row));
  });
}

size_t mt_dataset_size(const mt_dataset* dataset) {
  return dataset ? dataset->rows.size() : 0;
}
int mt_dataset_group(const mt_dataset* dataset) {
  return dataset ? dataset->group_id : 0;
}
size_t mt_dataset_width(const mt_dataset* dataset) {
  if (!dataset) return 0;
  return static_cast<size_t>(descriptor_group(dataset->group_id).dimension);
}

mt_status mt_dataset_row(const mt_dataset* dataset, size_t index,
                         const char** source_id, int* label,
                         const double** values, size_t* len) {
  if (!dataset) return null_argument("dataset");
  return guarded([&] {
    if (index >= dataset->rows.size())
      raise(Errc::out_of_bounds, "row index out of range");
    const DescriptorVector& row = dataset->rows[index];
    if (source_id) *source_id = row.source_id.c_str();
    if (label)
      *label = row.label == Label::malignant ? MT_LABEL_MALIGNANT : MT_LABEL_BENIGN;
    if (values) *values = row.values.data();
    if (len) *len = row.values.size();
  });
}

mt_status mt_dataset_write_csv(const mt_dataset* dataset, const char* path) {
  if (!dataset || !path) return null_argument("dataset/path");
  return guarded([&] { write_dataset(dataset->rows, std::filesystem::path(path)); });
}

mt_status mt_dataset_read_csv(const char* path, int expected_group,
                              mt_dataset** out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] {
    int gid = 0;
    std::vector<DescriptorVector> rows =
        read_dataset(std::filesystem::path(path), expected_group, &gid);
    *out = new mt_dataset{gid, std::move(rows)};
  });
}

void mt_dataset_free(mt_dataset* dataset) { delete dataset; }

/* ------------------------------------------------------------------ mlp */

mt_train_config mt_train_defaults(void) {
  const TrainConfig d;
  return mt_train_config{d.learning_rate, d.momentum, d.error_goal, d.max_epochs,
                         d.seed};
}

int mt_hidden_units_rule1(int n) {
  return n >= 1 ? hidden_units_rule1(n) : -1;
}
int mt_hidden_units_rule2(int n_inputs, int n_outputs) {
  return (n_inputs >= 1 && n_outputs >= 1) ? hidden_units_rule2(n_inputs, n_outputs)
                                           : -1;
}

mt_status mt_train(const mt_dataset* dataset, int rule,
                   const mt_train_config* config, mt_model** out,
                   mt_train_outcome* outcome) {
  if (!dataset || !out) return null_argument("dataset/out");
  return guarded([&] {
    auto [model, result] = train_on_rows(dataset->rows, rule, to_train_config(config));
    if (outcome) *outcome = to_c_outcome(result);
    *out = new mt_model{std::move(model)};
  });
}

mt_status mt_model_save(const mt_model* model, const char* path) {
  if (!model || !path) return null_argument("model/path");
  return guarded([&] { save_model(model->model, std::filesystem::path(path)); });
}

mt_status mt_model_load(const char* path, mt_model** out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] { *out = new mt_model{load_model(std::filesystem::path(path))}; });
}

mt_status mt_model_sizes(const mt_model* model, int* input, int* hidden, int* output) {
  if (!model) return null_argument("model");
  if (input) *input = model->model.sizes.input;
  if (hidden) *hidden = model->model.sizes.hidden;
  if (output) *output = model->model.sizes.output;
  return MT_OK;
}

mt_status mt_model_predict(const mt_model* model, const double* values, size_t len,
                           double* output) {
  if (!model || !values || !output) return null_argument("model/values/output");
  return guarded([&] {
    *output = predict(model->model, std::vector<double>(values, values + len));
  });
}

mt_status mt_model_classify(const mt_model* model, const double* values, size_t len,
                            int* label) {
  if (!model || !values || !label) return null_argument("model/values/label");
  return guarded([&] {
    DescriptorVector row;
    row.group_id = model->model.group_id == 0 ? 1 : model->model.group_id;
    row.values.assign(values, values + len);
    *label = classify(model->model, row) == Label::malignant ? MT_LABEL_MALIGNANT
                                                             : MT_LABEL_BENIGN;
  });
}

void mt_model_free(mt_model* model) { delete model; }

mt_status mt_regression_value(const double* outputs, const double* targets,
                              size_t len, double* r, int* zero_variance) {
  if (!outputs || !targets || !r) return null_argument("outputs/targets/r");
  return guarded([&] {
    const RegressionResult result =
        regression_value({outputs, len}, {targets, len});
    *r = result.r;
    if (zero_variance) *zero_variance = result.zero_variance ? 1 : 0;
  });
}

/* ------------------------------------------------------------ experiment */

mt_split_spec mt_split_defaults(void) {
  const SplitSpec d;
  return mt_split_spec{d.train_fraction, d.stratified ? 1 : 0, d.seed};
}

mt_status mt_manifest_load(const char* path, mt_manifest** out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] { *out = new mt_manifest{load_manifest(path)}; });
}

size_t mt_manifest_size(const mt_manifest* manifest) {
  return manifest ? manifest->entries.size() : 0;
}

mt_status mt_manifest_entry(const mt_manifest* manifest, size_t index,
                            const char** filename, int* label, int* has_roi,
                            int roi_xywh[4]) {
  if (!manifest) return null_argument("manifest");
  return guarded([&] {
    if (index >= manifest->entries.size())
      raise(Errc::out_of_bounds, "manifest index out of range");
    const ManifestEntry& e = manifest->entries[index];
    if (filename) *filename = e.filename.c_str();
    if (label)
      *label = e.label == Label::malignant ? MT_LABEL_MALIGNANT : MT_LABEL_BENIGN;
    if (has_roi) *has_roi = e.roi.has_value() ? 1 : 0;
    if (roi_xywh && e.roi) {
      roi_xywh[0] = e.roi->x;
      roi_xywh[1] = e.roi->y;
      roi_xywh[2] = e.roi->width;
      roi_xywh[3] = e.roi->height;
    }
  });
}

void mt_manifest_free(mt_manifest* manifest) { delete manifest; }

mt_status mt_study_run(const char* manifest_path, const mt_glcm_config* glcm,
                       const mt_train_config* train, const mt_split_spec* split,
                       int epoch_cap, double r_tolerance, mt_report** out) {
  if (!manifest_path || !out) return null_argument("manifest_path/out");
  return guarded([&] {
    StudyConfig cfg;
    cfg.glcm = to_glcm_config(glcm);
    cfg.train = to_train_config(train);
    cfg.split = to_split_spec(split);
    cfg.epoch_cap = epoch_cap;
    cfg.r_tolerance = r_tolerance;
    *out = new mt_report{run_study(manifest_path, cfg)};
  });
}

size_t mt_report_size(const mt_report* report) {
  return report ? report->report.results.size() : 0;
}

mt_status mt_report_row_get(const mt_report* report, size_t index, mt_report_row* row) {
  if (!report || !row) return null_argument("report/row");
  return guarded([&] {
    if (index >= report->report.results.size())
      raise(Errc::out_of_bounds, "report index out of range");
    const GroupResult& r = report->report.results[index];
    row->group_id = r.group_id;
    row->architecture = r.architecture;
    row->input_units = r.sizes.input;
    row->hidden_units = r.sizes.hidden;
    row->failed = r.failed ? 1 : 0;
    row->outcome = to_c_outcome(r.outcome);
    row->selected = r.selected ? 1 : 0;
  });
}

mt_status mt_report_selected(const mt_report* report, int out_ids[9], size_t* count) {
  if (!report || !out_ids || !count) return null_argument("report/out_ids/count");
  return guarded([&] {
    *count = report->report.selected.size();
    for (size_t i = 0; i < report->report.selected.size(); ++i)
      out_ids[i] = report->report.selected[i];
  });
}

mt_status mt_report_to_csv(const mt_report* report, char** out) {
  if (!report || !out) return null_argument("report/out");
  return guarded([&] { *out = dup_string(report_to_csv(report->report)); });
}

mt_status mt_report_to_text(const mt_report* report, char** out) {
  if (!report || !out) return null_argument("report/out");
  return guarded([&] { *out = dup_string(report_to_text(report->report)); });
}

void mt_report_free(mt_report* report) { delete report; }

mt_status mt_synth_corpus(int n_images, int size, uint64_t seed,
                          const char* out_dir, char** manifest_path_out) {
  if (!out_dir) return null_argument("out_dir");
  return guarded([&] {
    const SynthResult r = generate_synthetic_corpus(n_images, size, seed, out_dir);
    if (manifest_path_out) *manifest_path_out = dup_string(r.manifest_path);
  });
}

mt_status mt_roi_table_load(const char* path, mt_roi_table** out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] { *out = new mt_roi_table{load_roi_sidecar(path)}; });
}

int mt_roi_table_lookup(const mt_roi_table* table, const char* filename,
                        int roi_xywh[4]) {
  if (!table || !filename || !roi_xywh) return 0;
  const auto it = table->rois.find(filename);
  if (it == table->rois.end()) return 0;
  roi_xywh[0] = it->second.x;
  roi_xywh[1] = it->second.y;
  roi_xywh[2] = it->second.width;
  roi_xywh[3] = it->second.height;
  return 1;
}

void mt_roi_table_free(mt_roi_table* table) { delete table; }

} /* extern "C" */
