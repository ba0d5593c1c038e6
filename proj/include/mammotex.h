/* mammotex — mammogram texture descriptors and MLP classification.
 *
 * C API over the C++ core. Every function returns MT_OK (0) on success or an
 * error code; mt_last_error() carries a thread-local detail message for the
 * most recent failure on the calling thread. All handles are opaque and owned
 * by the caller via the matching *_free function.
 */
#ifndef MAMMOTEX_H
#define MAMMOTEX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int mt_status;

enum {
  MT_OK = 0,
  MT_ERR_UNSUPPORTED_MAGIC = 1,
  MT_ERR_UNSUPPORTED_DEPTH = 2,
  MT_ERR_TRUNCATED_DATA = 3,
  MT_ERR_MALFORMED_HEADER = 4,
  MT_ERR_OUT_OF_BOUNDS = 5,
  MT_ERR_INVALID_PARAMS = 6,
  MT_ERR_DEGENERATE_IMAGE = 7,
  MT_ERR_EMPTY_IMAGE = 8,
  MT_ERR_DEGENERATE_TEXTURE = 9,
  MT_ERR_ZERO_MARGINAL_VARIANCE = 10,
  MT_ERR_NO_VALID_PAIRS = 11,
  MT_ERR_MISSING_DIRECTION = 12,
  MT_ERR_EMPTY_DATASET = 13,
  MT_ERR_MIXED_GROUPS = 14,
  MT_ERR_DIMENSION_MISMATCH = 15,
  MT_ERR_MALFORMED_ROW = 16,
  MT_ERR_UNKNOWN_LABEL = 17,
  MT_ERR_INCONSISTENT_WIDTH = 18,
  MT_ERR_NON_FINITE_LOSS = 19,
  MT_ERR_LENGTH_MISMATCH = 20,
  MT_ERR_TOO_FEW_SAMPLES = 21,
  MT_ERR_INCOMPLETE_REPORT = 22,
  MT_ERR_MISSING_IMAGE = 23,
  MT_ERR_IO_FAILURE = 24,
  MT_ERR_NULL_ARGUMENT = 90,
  MT_ERR_INTERNAL = 99
};

const char* mt_status_name(mt_status status);
const char* mt_last_error(void);
const char* mt_version(void);

/* labels */
enum { MT_LABEL_BENIGN = 0, MT_LABEL_MALIGNANT = 1 };

/* ------------------------------------------------------------------ images */

typedef struct mt_image mt_image;

mt_status mt_image_create(int width, int height, const uint8_t* pixels,
                          mt_image** out);
mt_status mt_image_parse_pgm(const uint8_t* bytes, size_t len, mt_image** out);
/* Encodes as P5 when binary is nonzero, else P2. Free with mt_bytes_free. */
mt_status mt_image_encode_pgm(const mt_image* image, int binary,
                              uint8_t** bytes_out, size_t* len_out);
mt_status mt_image_read_pgm(const char* path, mt_image** out);
mt_status mt_image_write_pgm(const mt_image* image, const char* path, int binary);
int mt_image_width(const mt_image* image);
int mt_image_height(const mt_image* image);
const uint8_t* mt_image_pixels(const mt_image* image); /* row-major */
void mt_image_free(mt_image* image);
void mt_bytes_free(uint8_t* bytes);
void mt_string_free(char* text);

/* -------------------------------------------------------------- preprocess */

typedef struct mt_clahe_params {
  int tiles_x;
  int tiles_y;
  double clip_limit; /* fraction of the tile pixel count, in (0, 1] */
  int bins;
} mt_clahe_params;

mt_clahe_params mt_clahe_defaults(void);

mt_status mt_crop(const mt_image* image, int x, int y, int w, int h, mt_image** out);
mt_status mt_resize(const mt_image* image, int w, int h, mt_image** out);
/* degenerate_warning (optional) is set when no threshold separates classes
 * and the image is returned unchanged. */
mt_status mt_remove_background(const mt_image* image, mt_image** out,
                               int* degenerate_warning);
mt_status mt_median_filter3(const mt_image* image, mt_image** out);
mt_status mt_clahe(const mt_image* image, const mt_clahe_params* params,
                   mt_image** out);
/* Fixed chain: crop (roi_xywh may be NULL) -> resize -> background removal ->
 * median filter -> CLAHE. */
mt_status mt_preprocess_chain(const mt_image* image, const int* roi_xywh,
                              int resize_w, int resize_h,
                              const mt_clahe_params* params, mt_image** out,
                              int* degenerate_warning);

/* ---------------------------------------------------------------- features */

enum { MT_GLCM_CANONICAL = 0, MT_GLCM_AS_PRINTED = 1 };

typedef struct mt_glcm_config {
  int levels;    /* gray levels after quantization, 2..256 */
  int distance;  /* pixel offset distance, >= 1 */
  int symmetric; /* nonzero adds the transposed pairs */
  int variant;   /* MT_GLCM_CANONICAL or MT_GLCM_AS_PRINTED */
} mt_glcm_config;

mt_glcm_config mt_glcm_defaults(void);

/* Order: mean, variance, skewness, kurtosis, entropy. `degenerate` (optional)
 * reports zero-variance substitution of skewness/kurtosis. */
mt_status mt_first_order_features(const mt_image* image, double out5[5],
                                  int* degenerate);
/* direction_deg is one of 0, 45, 90, 135. Feature order: ASM, contrast,
 * correlation, variance, IDM, entropy. */
mt_status mt_glcm_features(const mt_image* image, int direction_deg,
                           const mt_glcm_config* config, double out6[6],
                           int* zero_marginal_variance);

int mt_descriptor_group_dimension(int group_id); /* -1 for invalid ids */
const char* mt_descriptor_group_name(int group_id);

mt_status mt_extract_group(const mt_image* image, int group_id,
                           const mt_glcm_config* config, double* out,
                           size_t capacity, size_t* length, int* degenerate);

/* ---------------------------------------------------------------- datasets */

typedef struct mt_dataset mt_dataset;

mt_status mt_dataset_create(int group_id, mt_dataset** out);
mt_status mt_dataset_append(mt_dataset* dataset, const char* source_id, int label,
                            const double* values, size_t len);
size_t mt_dataset_size(const mt_dataset* dataset);
int mt_dataset_group(const mt_dataset* dataset);
size_t mt_dataset_width(const mt_dataset* dataset);
mt_status mt_dataset_row(const mt_dataset* dataset, size_t index,
                         const char** source_id, int* label,
                         const double** values, size_t* len);
mt_status mt_dataset_write_csv(const mt_dataset* dataset, const char* path);
/* expected_group 0 infers the group from the column count. */
mt_status mt_dataset_read_csv(const char* path, int expected_group,
                              mt_dataset** out);
void mt_dataset_free(mt_dataset* dataset);

/* -------------------------------------------------------------------- mlp */

typedef struct mt_train_config {
  double learning_rate;
  double momentum;
  double error_goal;
  int max_epochs;
  uint64_t seed;
} mt_train_config;

mt_train_config mt_train_defaults(void);

typedef struct mt_train_outcome {
  int epochs_used;
  double final_mse;
  int converged;
  double regression_train;
  double regression_test;     /* valid only when has_regression_test != 0 */
  int has_regression_test;
} mt_train_outcome;

int mt_hidden_units_rule1(int n);
int mt_hidden_units_rule2(int n_inputs, int n_outputs);

typedef struct mt_model mt_model;

/* rule selects the hidden-layer sizing: 1 or 2. The scaler is fitted on the
 * dataset and stored with the model. */
mt_status mt_train(const mt_dataset* dataset, int rule,
                   const mt_train_config* config, mt_model** out,
                   mt_train_outcome* outcome);
mt_status mt_model_save(const mt_model* model, const char* path);
mt_status mt_model_load(const char* path, mt_model** out);
mt_status mt_model_sizes(const mt_model* model, int* input, int* hidden, int* output);
/* raw (unscaled) feature values in, network output in (-1, 1) out. */
mt_status mt_model_predict(const mt_model* model, const double* values, size_t len,
                           double* output);
/* output > 0 -> MT_LABEL_MALIGNANT, otherwise MT_LABEL_BENIGN. */
mt_status mt_model_classify(const mt_model* model, const double* values, size_t len,
                            int* label);
void mt_model_free(mt_model* model);

mt_status mt_regression_value(const double* outputs, const double* targets,
                              size_t len, double* r, int* zero_variance);

/* -------------------------------------------------------------- experiment */

typedef struct mt_split_spec {
  double train_fraction;
  int stratified;
  uint64_t seed;
} mt_split_spec;

mt_split_spec mt_split_defaults(void);

typedef struct mt_manifest mt_manifest;

mt_status mt_manifest_load(const char* path, mt_manifest** out);
size_t mt_manifest_size(const mt_manifest* manifest);
mt_status mt_manifest_entry(const mt_manifest* manifest, size_t index,
                            const char** filename, int* label, int* has_roi,
                            int roi_xywh[4]);
void mt_manifest_free(mt_manifest* manifest);

typedef struct mt_report mt_report;

/* Runs the full 9-group x 2-architecture study over the manifest images
 * (paths are resolved relative to the manifest file). */
mt_status mt_study_run(const char* manifest_path, const mt_glcm_config* glcm,
                       const mt_train_config* train, const mt_split_spec* split,
                       int epoch_cap, double r_tolerance, mt_report** out);
size_t mt_report_size(const mt_report* report);
typedef struct mt_report_row {
  int group_id;
  int architecture; /* 1 or 2 */
  int input_units;
  int hidden_units;
  int failed;
  mt_train_outcome outcome;
  int selected;
} mt_report_row;
mt_status mt_report_row_get(const mt_report* report, size_t index, mt_report_row* row);
mt_status mt_report_selected(const mt_report* report, int out_ids[9], size_t* count);
/* Free the returned strings with mt_string_free. */
mt_status mt_report_to_csv(const mt_report* report, char** out);
mt_status mt_report_to_text(const mt_report* report, char** out);
void mt_report_free(mt_report* report);

/* Writes n PGM images plus manifest.csv into out_dir; the manifest path is
 * returned through manifest_path_out (mt_string_free). */
mt_status mt_synth_corpus(int n_images, int size, uint64_t seed,
                          const char* out_dir, char** manifest_path_out);

/* RoI sidecar: `filename,x,y,w,h` lines. */
typedef struct mt_roi_table mt_roi_table;
mt_status mt_roi_table_load(const char* path, mt_roi_table** out);
/* Returns 1 and fills roi_xywh when found, 0 otherwise. */
int mt_roi_table_lookup(const mt_roi_table* table, const char* filename,
                        int roi_xywh[4]);
void mt_roi_table_free(mt_roi_table* table);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MAMMOTEX_H */
