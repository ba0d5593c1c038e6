// mammotex command-line front end. Links the C API only; all pipeline logic
// lives behind libmammotex.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mammotex.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Settings {
  mt_glcm_config glcm = mt_glcm_defaults();
  mt_train_config train = mt_train_defaults();
  mt_split_spec split = mt_split_defaults();
  mt_clahe_params clahe = mt_clahe_defaults();
  int epoch_cap = 1000;
  double r_tolerance = 1e-3;
  int resize_width = 400;
  int resize_height = 400;
  bool binary_pgm = true;
  int jobs = 1;
};

[[noreturn]] void die(const std::string& message, int code = 2) {
  std::cerr << "mammotex: " << message << "\n";
  std::exit(code);
}

std::string status_detail(mt_status status) {
  std::string out = mt_status_name(status);
  const char* detail = mt_last_error();
  if (detail && *detail) out += std::string(": ") + detail;
  return out;
}

// ---------------------------------------------------------------- config

void require_keys(const json& obj, const std::string& section,
                  const std::vector<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end())
      die("config: unknown key '" + (section.empty() ? key : section + "." + key) +
          "'");
  }
}

void load_config(const fs::path& path, Settings& s) {
  std::ifstream in(path);
  if (!in) die("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    die("config parse error: " + std::string(e.what()));
  }
  require_keys(j, "", {"glcm", "train", "split", "clahe", "selection",
                       "preprocess", "jobs"});
  if (j.contains("glcm")) {
    const json& g = j["glcm"];
    require_keys(g, "glcm", {"levels", "distance", "symmetric", "variant"});
    if (g.contains("levels")) s.glcm.levels = g["levels"].get<int>();
    if (g.contains("distance")) s.glcm.distance = g["distance"].get<int>();
    if (g.contains("symmetric")) s.glcm.symmetric = g["symmetric"].get<bool>() ? 1 : 0;
    if (g.contains("variant")) {
      const std::string v = g["variant"].get<std::string>();
      if (v == "canonical") s.glcm.variant = MT_GLCM_CANONICAL;
      else if (v == "as_printed") s.glcm.variant = MT_GLCM_AS_PRINTED;
      else die("config: glcm.variant must be 'canonical' or 'as_printed'");
    }
  }
  if (j.contains("train")) {
    const json& t = j["train"];
    require_keys(t, "train",
                 {"learning_rate", "momentum", "error_goal", "max_epochs", "seed"});
    if (t.contains("learning_rate"))
      s.train.learning_rate = t["learning_rate"].get<double>();
    if (t.contains("momentum")) s.train.momentum = t["momentum"].get<double>();
    if (t.contains("error_goal")) s.train.error_goal = t["error_goal"].get<double>();
    if (t.contains("max_epochs")) s.train.max_epochs = t["max_epochs"].get<int>();
    if (t.contains("seed")) s.train.seed = t["seed"].get<uint64_t>();
  }
  if (j.contains("split")) {
    const json& p = j["split"];
    require_keys(p, "split", {"train_fraction", "stratified", "seed"});
    if (p.contains("train_fraction"))
      s.split.train_fraction = p["train_fraction"].get<double>();
    if (p.contains("stratified")) s.split.stratified = p["stratified"].get<bool>() ? 1 : 0;
    if (p.contains("seed")) s.split.seed = p["seed"].get<uint64_t>();
  }
  if (j.contains("clahe")) {
    const json& c = j["clahe"];
    require_keys(c, "clahe", {"tiles_x", "tiles_y", "clip_limit", "bins"});
    if (c.contains("tiles_x")) s.clahe.tiles_x = c["tiles_x"].get<int>();
    if (c.contains("tiles_y")) s.clahe.tiles_y = c["tiles_y"].get<int>();
    if (c.contains("clip_limit")) s.clahe.clip_limit = c["clip_limit"].get<double>();
    if (c.contains("bins")) s.clahe.bins = c["bins"].get<int>();
  }
  if (j.contains("selection")) {
    const json& sel = j["selection"];
    require_keys(sel, "selection", {"epoch_cap", "r_tolerance"});
    if (sel.contains("epoch_cap")) s.epoch_cap = sel["epoch_cap"].get<int>();
    if (sel.contains("r_tolerance")) s.r_tolerance = sel["r_tolerance"].get<double>();
  }
  if (j.contains("preprocess")) {
    const json& p = j["preprocess"];
    require_keys(p, "preprocess", {"resize_width", "resize_height", "binary"});
    if (p.contains("resize_width")) s.resize_width = p["resize_width"].get<int>();
    if (p.contains("resize_height")) s.resize_height = p["resize_height"].get<int>();
    if (p.contains("binary")) s.binary_pgm = p["binary"].get<bool>();
  }
  if (j.contains("jobs")) s.jobs = j["jobs"].get<int>();
}

// ------------------------------------------------------------ work items

struct WorkItem {
  std::string filename;
  int label = MT_LABEL_BENIGN;
  bool has_roi = false;
  int roi[4] = {0, 0, 0, 0};
};

std::vector<WorkItem> items_from_manifest(const std::string& manifest_path) {
  mt_manifest* manifest = nullptr;
  const mt_status st = mt_manifest_load(manifest_path.c_str(), &manifest);
  if (st != MT_OK) die("cannot load manifest: " + status_detail(st));
  std::vector<WorkItem> items(mt_manifest_size(manifest));
  for (size_t i = 0; i < items.size(); ++i) {
    const char* name = nullptr;
    int has_roi = 0;
    mt_manifest_entry(manifest, i, &name, &items[i].label, &has_roi, items[i].roi);
    items[i].filename = name;
    items[i].has_roi = has_roi != 0;
  }
  mt_manifest_free(manifest);
  return items;
}

std::vector<WorkItem> items_from_directory(const fs::path& dir,
                                           const std::string& roi_sidecar) {
  if (!fs::is_directory(dir)) die("not a directory: " + dir.string());
  std::vector<WorkItem> items;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pgm")
      items.push_back({entry.path().filename().string(), MT_LABEL_BENIGN, false, {}});
  std::sort(items.begin(), items.end(),
            [](const WorkItem& a, const WorkItem& b) { return a.filename < b.filename; });
  if (!roi_sidecar.empty()) {
    mt_roi_table* table = nullptr;
    const mt_status st = mt_roi_table_load(roi_sidecar.c_str(), &table);
    if (st != MT_OK) die("cannot load RoI sidecar: " + status_detail(st));
    for (WorkItem& item : items)
      item.has_roi = mt_roi_table_lookup(table, item.filename.c_str(), item.roi) != 0;
    mt_roi_table_free(table);
  }
  return items;
}

// Runs fn(index) over [0, n) on up to `jobs` threads.
void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> workers;
  const size_t count = std::min(static_cast<size_t>(jobs), n);
  for (size_t t = 0; t < count; ++t)
    workers.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (std::thread& t : workers) t.join();
}

// ----------------------------------------------------------- subcommands

int cmd_synth(const std::string& out_dir, int count, int size, uint64_t seed) {
  char* manifest_path = nullptr;
  const mt_status st =
      mt_synth_corpus(count, size, seed, out_dir.c_str(), &manifest_path);
  if (st != MT_OK) die("synth failed: " + status_detail(st), 1);
  std::cout << "synth: wrote " << count << " images (" << size << "x" << size
            << ") under " << out_dir << "\n";
  std::cout << "synth: manifest " << manifest_path << "\n";
  mt_string_free(manifest_path);
  return 0;
}

int cmd_preprocess(const Settings& s, const std::string& input_dir,
                   const std::string& manifest_path, const std::string& roi_sidecar,
                   const std::string& out_dir) {
  if (input_dir.empty() == manifest_path.empty())
    die("preprocess needs exactly one of --input or --manifest");
  const fs::path src_dir =
      input_dir.empty() ? fs::path(manifest_path).parent_path() : fs::path(input_dir);
  const std::vector<WorkItem> items =
      input_dir.empty() ? items_from_manifest(manifest_path)
                        : items_from_directory(input_dir, roi_sidecar);
  if (items.empty()) die("no .pgm inputs found", 1);
  fs::create_directories(out_dir);

  std::vector<std::string> log(items.size());
  std::vector<char> failed(items.size(), 0);
  parallel_for(items.size(), s.jobs, [&](size_t i) {
    const WorkItem& item = items[i];
    const std::string in_path = (src_dir / item.filename).string();
    mt_image* img = nullptr;
    mt_status st = mt_image_read_pgm(in_path.c_str(), &img);
    if (st != MT_OK) {
      failed[i] = 1;
      log[i] = "preprocess FAILED " + item.filename + ": " + status_detail(st);
      return;
    }
    mt_image* processed = nullptr;
    int degenerate = 0;
    st = mt_preprocess_chain(img, item.has_roi ? item.roi : nullptr, s.resize_width,
                             s.resize_height, &s.clahe, &processed, &degenerate);
    if (st == MT_OK) {
      const std::string out_path = (fs::path(out_dir) / item.filename).string();
      st = mt_image_write_pgm(processed, out_path.c_str(), s.binary_pgm ? 1 : 0);
    }
    if (st != MT_OK) {
      failed[i] = 1;
      log[i] = "preprocess FAILED " + item.filename + ": " + status_detail(st);
    } else {
      log[i] = "preprocess ok " + item.filename + " (" +
               std::to_string(mt_image_width(img)) + "x" +
               std::to_string(mt_image_height(img)) + " -> " +
               std::to_string(s.resize_width) + "x" +
               std::to_string(s.resize_height) +
               (degenerate ? ", degenerate background" : "") + ")";
    }
    mt_image_free(processed);
    mt_image_free(img);
  });

  int failures = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    std::cout << log[i] << "\n";
    failures += failed[i];
  }
  if (!manifest_path.empty()) {
    // carry the labels forward so extract/experiment can run on the output
    std::ofstream out(fs::path(out_dir) / "manifest.csv");
    for (size_t i = 0; i < items.size(); ++i)
      if (!failed[i])
        out << items[i].filename << ','
            << (items[i].label == MT_LABEL_MALIGNANT ? "malignant" : "benign")
            << "\n";
    std::cout << "preprocess: manifest "
              << (fs::path(out_dir) / "manifest.csv").string() << "\n";
  }
  if (failures)
    std::cerr << "preprocess: " << failures << " of " << items.size()
              << " files failed\n";
  return failures ? 1 : 0;
}

int cmd_extract(const Settings& s, const std::string& manifest_path,
                const std::string& images_dir, const std::string& out_dir,
                const std::string& group_arg) {
  std::vector<int> group_ids;
  if (group_arg == "all") {
    for (int id = 1; id <= 9; ++id) group_ids.push_back(id);
  } else {
    const int id = std::atoi(group_arg.c_str());
    if (id < 1 || id > 9) die("--group must be 1..9 or 'all'");
    group_ids.push_back(id);
  }
  const std::vector<WorkItem> items = items_from_manifest(manifest_path);
  if (items.empty()) die("manifest lists no images", 1);
  const fs::path base =
      images_dir.empty() ? fs::path(manifest_path).parent_path() : fs::path(images_dir);
  fs::create_directories(out_dir);

  struct Row {
    std::vector<std::vector<double>> per_group;
    bool degenerate = false;
    std::string error;
  };
  std::vector<Row> rows(items.size());
  parallel_for(items.size(), s.jobs, [&](size_t i) {
    mt_image* img = nullptr;
    const std::string path = (base / items[i].filename).string();
    mt_status st = mt_image_read_pgm(path.c_str(), &img);
    if (st != MT_OK) {
      rows[i].error = status_detail(st);
      return;
    }
    rows[i].per_group.resize(group_ids.size());
    for (size_t g = 0; g < group_ids.size(); ++g) {
      double values[29];
      size_t len = 0;
      int degenerate = 0;
      st = mt_extract_group(img, group_ids[g], &s.glcm, values, 29, &len, &degenerate);
      if (st != MT_OK) {
        rows[i].error = status_detail(st);
        break;
      }
      rows[i].per_group[g].assign(values, values + len);
      rows[i].degenerate |= degenerate != 0;
    }
    mt_image_free(img);
  });

  int failures = 0;
  size_t degenerate_rows = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    if (!rows[i].error.empty()) {
      std::cerr << "extract FAILED " << items[i].filename << ": " << rows[i].error
                << "\n";
      ++failures;
    } else if (rows[i].degenerate) {
      ++degenerate_rows;
    }
  }

  for (size_t g = 0; g < group_ids.size(); ++g) {
    mt_dataset* ds = nullptr;
    mt_status st = mt_dataset_create(group_ids[g], &ds);
    if (st != MT_OK) die("dataset create failed: " + status_detail(st), 1);
    for (size_t i = 0; i < items.size(); ++i) {
      if (!rows[i].error.empty()) continue;
      const std::vector<double>& v = rows[i].per_group[g];
      st = mt_dataset_append(ds, items[i].filename.c_str(), items[i].label, v.data(),
                             v.size());
      if (st != MT_OK) die("dataset append failed: " + status_detail(st), 1);
    }
    const std::string path =
        (fs::path(out_dir) / ("group_" + std::to_string(group_ids[g]) + ".csv"))
            .string();
    st = mt_dataset_write_csv(ds, path.c_str());
    if (st != MT_OK) die("cannot write " + path + ": " + status_detail(st), 1);
    std::cout << "extract: wrote " << path << " (" << mt_dataset_size(ds) << " rows, "
              << mt_descriptor_group_dimension(group_ids[g]) << " features)\n";
    mt_dataset_free(ds);
  }
  if (degenerate_rows)
    std::cout << "extract: " << degenerate_rows
              << " rows carry zero-substituted degenerate components\n";
  return failures ? 1 : 0;
}

int cmd_train(const Settings& s, const std::string& dataset_path, int rule,
              const std::string& out_path) {
  mt_dataset* ds = nullptr;
  mt_status st = mt_dataset_read_csv(dataset_path.c_str(), 0, &ds);
  if (st != MT_OK) die("cannot read dataset: " + status_detail(st), 1);
  mt_model* model = nullptr;
  mt_train_outcome outcome{};
  st = mt_train(ds, rule, &s.train, &model, &outcome);
  if (st != MT_OK) die("training failed: " + status_detail(st), 1);
  st = mt_model_save(model, out_path.c_str());
  if (st != MT_OK) die("cannot save model: " + status_detail(st), 1);

  int input = 0, hidden = 0, output = 0;
  mt_model_sizes(model, &input, &hidden, &output);
  std::printf(
      "train: %s group=%d rule=%d input=%d hidden=%d epochs=%d mse=%.6g "
      "r_train=%.6f converged=%s\n",
      dataset_path.c_str(), mt_dataset_group(ds), rule, input, hidden,
      outcome.epochs_used, outcome.final_mse, outcome.regression_train,
      outcome.converged ? "yes" : "no");
  std::cout << "train: model " << out_path << "\n";
  mt_model_free(model);
  mt_dataset_free(ds);
  return 0;
}

int cmd_experiment(const Settings& s, const std::string& manifest_path,
                   const std::string& out_dir) {
  mt_report* report = nullptr;
  const mt_status st = mt_study_run(manifest_path.c_str(), &s.glcm, &s.train,
                                    &s.split, s.epoch_cap, s.r_tolerance, &report);
  if (st != MT_OK) die("experiment failed: " + status_detail(st), 1);
  fs::create_directories(out_dir);

  char* csv = nullptr;
  char* text = nullptr;
  mt_report_to_csv(report, &csv);
  mt_report_to_text(report, &text);
  {
    std::ofstream out(fs::path(out_dir) / "report.csv");
    out << csv;
  }
  {
    std::ofstream out(fs::path(out_dir) / "report.txt");
    out << text;
  }
  std::cout << text;
  std::cout << "experiment: wrote " << (fs::path(out_dir) / "report.csv").string()
            << " and report.txt\n";
  mt_string_free(csv);
  mt_string_free(text);

  int failed_rows = 0;
  for (size_t i = 0; i < mt_report_size(report); ++i) {
    mt_report_row row{};
    mt_report_row_get(report, i, &row);
    failed_rows += row.failed;
  }
  mt_report_free(report);
  return failed_rows ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mammogram texture descriptors and MLP classification"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override it)");

  Settings s;
  int flag_levels = 0, flag_distance = 0, flag_max_epochs = 0, flag_bins = 0;
  int flag_tiles_x = 0, flag_tiles_y = 0, flag_epoch_cap = 0, flag_jobs = 0;
  int flag_resize_w = 0, flag_resize_h = 0;
  bool flag_symmetric = true, flag_stratified = true, flag_ascii = false;
  double flag_lr = 0, flag_momentum = 0, flag_goal = 0, flag_fraction = 0;
  double flag_clip = 0, flag_rtol = 0;
  std::uint64_t flag_train_seed = 0, flag_split_seed = 0;
  std::string flag_variant;

  auto* o_levels = app.add_option("--glcm-levels", flag_levels, "gray levels (2..256)");
  auto* o_distance = app.add_option("--glcm-distance", flag_distance, "pair distance");
  auto* o_symmetric = app.add_flag("--glcm-symmetric,!--glcm-asymmetric",
                                   flag_symmetric, "symmetric pair accumulation");
  auto* o_variant =
      app.add_option("--glcm-variant", flag_variant, "canonical or as_printed");
  auto* o_lr = app.add_option("--learning-rate", flag_lr, "backprop learning rate");
  auto* o_momentum = app.add_option("--momentum", flag_momentum, "momentum term");
  auto* o_goal = app.add_option("--error-goal", flag_goal, "MSE stopping goal");
  auto* o_epochs = app.add_option("--max-epochs", flag_max_epochs, "epoch budget");
  auto* o_tseed = app.add_option("--train-seed", flag_train_seed, "weight init seed");
  auto* o_fraction =
      app.add_option("--train-fraction", flag_fraction, "training share of the split");
  auto* o_strat = app.add_flag("--stratified,!--no-stratified", flag_stratified,
                               "stratify the split by class");
  auto* o_sseed = app.add_option("--split-seed", flag_split_seed, "split shuffle seed");
  auto* o_tiles_x = app.add_option("--clahe-tiles-x", flag_tiles_x, "CLAHE tile columns");
  auto* o_tiles_y = app.add_option("--clahe-tiles-y", flag_tiles_y, "CLAHE tile rows");
  auto* o_clip = app.add_option("--clahe-clip", flag_clip, "CLAHE clip fraction");
  auto* o_bins = app.add_option("--clahe-bins", flag_bins, "CLAHE histogram bins");
  auto* o_cap = app.add_option("--epoch-cap", flag_epoch_cap, "selection epoch cap");
  auto* o_rtol = app.add_option("--r-tolerance", flag_rtol, "selection R tolerance");
  auto* o_resize_w =
      app.add_option("--resize-width", flag_resize_w, "resize target width");
  auto* o_resize_h =
      app.add_option("--resize-height", flag_resize_h, "resize target height");
  auto* o_ascii = app.add_flag("--ascii", flag_ascii, "write P2 instead of P5");
  auto* o_jobs = app.add_option("--jobs", flag_jobs, "parallel image workers");

  auto* synth = app.add_subcommand("synth", "generate a labeled synthetic corpus");
  synth->fallthrough();
  std::string synth_out;
  int synth_count = 50, synth_size = 64;
  std::uint64_t synth_seed = 7;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--count", synth_count, "number of images (even, >= 10)");
  synth->add_option("--size", synth_size, "image edge length");
  synth->add_option("--seed", synth_seed, "generator seed");

  auto* preprocess =
      app.add_subcommand("preprocess", "crop/resize/clean/equalize PGM images");
  preprocess->fallthrough();
  std::string pre_input, pre_manifest, pre_roi, pre_out;
  preprocess->add_option("--input", pre_input, "directory of .pgm inputs");
  preprocess->add_option("--manifest", pre_manifest,
                         "manifest csv naming inputs (with optional RoIs)");
  preprocess->add_option("--roi", pre_roi, "RoI sidecar csv (filename,x,y,w,h)");
  preprocess->add_option("--out", pre_out, "output directory")->required();

  auto* extract = app.add_subcommand("extract", "write descriptor datasets");
  extract->fallthrough();
  std::string ext_manifest, ext_images, ext_out, ext_group = "all";
  extract->add_option("--manifest", ext_manifest, "manifest csv")->required();
  extract->add_option("--images", ext_images,
                      "image directory (defaults next to the manifest)");
  extract->add_option("--out", ext_out, "output directory")->required();
  extract->add_option("--group", ext_group, "descriptor group 1..9 or 'all'");

  auto* train = app.add_subcommand("train", "train one MLP on a dataset csv");
  train->fallthrough();
  std::string train_dataset, train_out;
  int train_rule = 1;
  train->add_option("--dataset", train_dataset, "dataset csv")->required();
  train->add_option("--rule", train_rule, "hidden sizing rule (1 or 2)")
      ->check(CLI::IsMember({1, 2}));
  train->add_option("--out", train_out, "model output path")->required();

  auto* experiment = app.add_subcommand("experiment", "run the full descriptor study");
  experiment->fallthrough();
  std::string exp_manifest, exp_out;
  experiment->add_option("--manifest", exp_manifest, "manifest csv")->required();
  experiment->add_option("--out", exp_out, "report output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (!config_path.empty()) load_config(config_path, s);
  if (o_levels->count()) s.glcm.levels = flag_levels;
  if (o_distance->count()) s.glcm.distance = flag_distance;
  if (o_symmetric->count()) s.glcm.symmetric = flag_symmetric ? 1 : 0;
  if (o_variant->count()) {
    if (flag_variant == "canonical") s.glcm.variant = MT_GLCM_CANONICAL;
    else if (flag_variant == "as_printed") s.glcm.variant = MT_GLCM_AS_PRINTED;
    else die("--glcm-variant must be 'canonical' or 'as_printed'");
  }
  if (o_lr->count()) s.train.learning_rate = flag_lr;
  if (o_momentum->count()) s.train.momentum = flag_momentum;
  if (o_goal->count()) s.train.error_goal = flag_goal;
  if (o_epochs->count()) s.train.max_epochs = flag_max_epochs;
  if (o_tseed->count()) s.train.seed = flag_train_seed;
  if (o_fraction->count()) s.split.train_fraction = flag_fraction;
  if (o_strat->count()) s.split.stratified = flag_stratified ? 1 : 0;
  if (o_sseed->count()) s.split.seed = flag_split_seed;
  if (o_tiles_x->count()) s.clahe.tiles_x = flag_tiles_x;
  if (o_tiles_y->count()) s.clahe.tiles_y = flag_tiles_y;
  if (o_clip->count()) s.clahe.clip_limit = flag_clip;
  if (o_bins->count()) s.clahe.bins = flag_bins;
  if (o_cap->count()) s.epoch_cap = flag_epoch_cap;
  if (o_rtol->count()) s.r_tolerance = flag_rtol;
  if (o_resize_w->count()) s.resize_width = flag_resize_w;
  if (o_resize_h->count()) s.resize_height = flag_resize_h;
  if (o_ascii->count()) s.binary_pgm = !flag_ascii;
  if (o_jobs->count()) s.jobs = flag_jobs;

  if (synth->parsed()) return cmd_synth(synth_out, synth_count, synth_size, synth_seed);
  if (preprocess->parsed())
    return cmd_preprocess(s, pre_input, pre_manifest, pre_roi, pre_out);
  if (extract->parsed())
    return cmd_extract(s, ext_manifest, ext_images, ext_out, ext_group);
  if (train->parsed()) return cmd_train(s, train_dataset, train_rule, train_out);
  if (experiment->parsed()) return cmd_experiment(s, exp_manifest, exp_out);
  return 2;
}
