#include "mammotex/mlp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mammotex/error.hpp"
#include "mammotex/rng.hpp"

namespace mammotex {

int hidden_units_rule1(int n) {
  if (n < 1) raise(Errc::invalid_params, "input-node count must be positive");
  return (n + 1) * 2 / 3;  // integer division floors for positive operands
}

int hidden_units_rule2(int n_inputs, int n_outputs) {
  if (n_inputs < 1 || n_outputs < 1)
    raise(Errc::invalid_params, "node counts must be positive");
  const long long product = static_cast<long long>(n_inputs) * n_outputs;
  long long s = static_cast<long long>(std::sqrt(static_cast<double>(product)));
  while (s * s < product) ++s;          // ceil for non-squares,
  while (s > 1 && (s - 1) * (s - 1) >= product) --s;  // exact for squares
  return static_cast<int>(s);
}

double bipolar_sigmoid(double z) { return 2.0 / (1.0 + std::exp(-z)) - 1.0; }

namespace {

// Derivative through the activation value: sigma'(z) = (1 - sigma(z)^2) / 2.
double bipolar_sigmoid_deriv(double activation) {
  return (1.0 - activation * activation) / 2.0;
}

void check_sizes(const LayerSizes& sizes) {
  if (sizes.input < 1 || sizes.hidden < 1 || sizes.output < 1)
    raise(Errc::invalid_params, "layer sizes must be positive");
  if (sizes.output != 1)
    raise(Errc::invalid_params, "only a single output node is supported");
}

// Forward pass retaining hidden activations for the backward step.
double forward_full(const MlpModel& m, std::span<const double> x,
                    std::vector<double>& hidden) {
  const int ni = m.sizes.input, nh = m.sizes.hidden;
  hidden.resize(nh);
  for (int h = 0; h < nh; ++h) {
    double z = m.b1[h];
    const double* row = m.w1.data() + static_cast<std::size_t>(h) * ni;
    for (int i = 0; i < ni; ++i) z += row[i] * x[i];
    hidden[h] = bipolar_sigmoid(z);
  }
  double z = m.b2[0];
  for (int h = 0; h < nh; ++h) z += m.w2[h] * hidden[h];
  return bipolar_sigmoid(z);
}

}  // namespace

double MlpModel::forward_scaled(std::span<const double> input) const {
  if (static_cast<int>(input.size()) != sizes.input)
    raise(Errc::dimension_mismatch, "input width does not match model");
  std::vector<double> hidden;
  return forward_full(*this, input, hidden);
}

MlpModel init_model(const LayerSizes& sizes, std::uint64_t seed) {
  check_sizes(sizes);
  MlpModel m;
  m.sizes = sizes;
  Rng rng(seed);
  auto fill = [&rng](std::vector<double>& v, std::size_t n) {
    v.resize(n);
    for (double& w : v) w = rng.uniform(-0.5, 0.5);
  };
  fill(m.w1, static_cast<std::size_t>(sizes.hidden) * sizes.input);
  fill(m.b1, sizes.hidden);
  fill(m.w2, static_cast<std::size_t>(sizes.output) * sizes.hidden);
  fill(m.b2, sizes.output);
  return m;
}

double evaluate_mse(const MlpModel& model, const ScaledDataset& dataset) {
  std::vector<double> hidden;
  double acc = 0.0;
  for (std::size_t r = 0; r < dataset.rows(); ++r) {
    const double e = forward_full(model, dataset.row(r), hidden) - dataset.targets[r];
    acc += e * e;
  }
  return acc / (2.0 * static_cast<double>(dataset.rows()));
}

Gradients compute_gradients(const MlpModel& model, const ScaledDataset& dataset) {
  const int ni = model.sizes.input, nh = model.sizes.hidden;
  const double n = static_cast<double>(dataset.rows());
  Gradients g;
  g.w1.assign(model.w1.size(), 0.0);
  g.b1.assign(model.b1.size(), 0.0);
  g.w2.assign(model.w2.size(), 0.0);
  g.b2.assign(model.b2.size(), 0.0);
  std::vector<double> hidden;
  for (std::size_t r = 0; r < dataset.rows(); ++r) {
    const std::span<const double> x = dataset.row(r);
    const double y = forward_full(model, x, hidden);
    // dMSE/dy = (y - t)/N for MSE = (1/2N) sum (y-t)^2
    const double delta_out = (y - dataset.targets[r]) / n * bipolar_sigmoid_deriv(y);
    for (int h = 0; h < nh; ++h) g.w2[h] += delta_out * hidden[h];
    g.b2[0] += delta_out;
    for (int h = 0; h < nh; ++h) {
      const double delta_h =
          delta_out * model.w2[h] * bipolar_sigmoid_deriv(hidden[h]);
      double* row = g.w1.data() + static_cast<std::size_t>(h) * ni;
      for (int i = 0; i < ni; ++i) row[i] += delta_h * x[i];
      g.b1[h] += delta_h;
    }
  }
  return g;
}

std::pair<MlpModel, TrainOutcome> train(const ScaledDataset& dataset,
                                        const LayerSizes& sizes,
                                        const TrainConfig& config) {
  check_sizes(sizes);
  if (dataset.rows() == 0) raise(Errc::empty_dataset, "training set is empty");
  if (dataset.width != sizes.input)
    raise(Errc::dimension_mismatch, "dataset width does not match input layer");
  if (config.learning_rate <= 0.0 || config.momentum < 0.0 || config.momentum >= 1.0 ||
      config.error_goal <= 0.0 || config.max_epochs < 1)
    raise(Errc::invalid_params, "bad training configuration");

  MlpModel model = init_model(sizes, config.seed);
  Gradients velocity;
  velocity.w1.assign(model.w1.size(), 0.0);
  velocity.b1.assign(model.b1.size(), 0.0);
  velocity.w2.assign(model.w2.size(), 0.0);
  velocity.b2.assign(model.b2.size(), 0.0);

  TrainOutcome outcome;
  double mse = evaluate_mse(model, dataset);
  if (!std::isfinite(mse))
    raise(Errc::non_finite_loss, "loss is not finite at initialization");
  auto step_param = [&config](std::vector<double>& w, std::vector<double>& vel,
                              const std::vector<double>& grad) {
    for (std::size_t k = 0; k < w.size(); ++k) {
      vel[k] = -config.learning_rate * grad[k] + config.momentum * vel[k];
      w[k] += vel[k];
    }
  };
  int epochs = 0;
  while (epochs < config.max_epochs && mse > config.error_goal) {
    const Gradients g = compute_gradients(model, dataset);
    step_param(model.w1, velocity.w1, g.w1);
    step_param(model.b1, velocity.b1, g.b1);
    step_param(model.w2, velocity.w2, g.w2);
    step_param(model.b2, velocity.b2, g.b2);
    ++epochs;
    mse = evaluate_mse(model, dataset);
    if (!std::isfinite(mse))
      raise(Errc::non_finite_loss,
            "loss diverged at epoch " + std::to_string(epochs));
  }
  outcome.epochs_used = epochs;
  outcome.final_mse = mse;
  outcome.converged = mse <= config.error_goal;

  std::vector<double> outputs(dataset.rows());
  std::vector<double> hidden;
  for (std::size_t r = 0; r < dataset.rows(); ++r)
    outputs[r] = forward_full(model, dataset.row(r), hidden);
  const RegressionResult reg = regression_value(outputs, dataset.targets);
  outcome.regression_train = reg.r;
  outcome.regression_train_zero_variance = reg.zero_variance;
  return {std::move(model), outcome};
}

RegressionResult regression_value(std::span<const double> outputs,
                                  std::span<const double> targets) {
  if (outputs.size() != targets.size())
    raise(Errc::length_mismatch, "output and target lengths differ");
  if (outputs.size() < 2)
    raise(Errc::length_mismatch, "need at least two samples");
  const double n = static_cast<double>(outputs.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    mean_a += outputs[i];
    mean_b += targets[i];
  }
  mean_a /= n;
  mean_b /= n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const double da = outputs[i] - mean_a;
    const double db = targets[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) return {0.0, true};
  return {cov / std::sqrt(var_a * var_b), false};
}

std::pair<MlpModel, TrainOutcome> train_on_rows(const std::vector<DescriptorVector>& rows,
                                                int rule, const TrainConfig& config) {
  if (rule != 1 && rule != 2)
    raise(Errc::invalid_params, "architecture rule must be 1 or 2");
  if (rows.empty()) raise(Errc::empty_dataset, "no rows to train on");
  const Scaler scaler = fit_scaler(rows);
  const int width = static_cast<int>(scaler.dimension());

  LayerSizes sizes;
  sizes.input = width;
  sizes.output = 1;
  sizes.hidden = rule == 1 ? hidden_units_rule1(width) : hidden_units_rule2(width, 1);

  ScaledDataset ds;
  ds.width = width;
  ds.inputs.reserve(rows.size() * width);
  ds.targets.reserve(rows.size());
  for (const DescriptorVector& row : rows) {
    const std::vector<double> scaled = apply_scaler(scaler, row.values);
    ds.inputs.insert(ds.inputs.end(), scaled.begin(), scaled.end());
    ds.targets.push_back(row.label == Label::malignant ? 1.0 : -1.0);
  }

  auto [model, outcome] = train(ds, sizes, config);
  model.scaler = scaler;
  model.group_id = rows.front().group_id;
  return {std::move(model), outcome};
}

double predict(const MlpModel& model, const std::vector<double>& raw_values) {
  if (model.scaler.dimension() == 0)
    return model.forward_scaled(raw_values);
  return model.forward_scaled(apply_scaler(model.scaler, raw_values));
}

Label classify(const MlpModel& model, const DescriptorVector& row) {
  if (model.group_id != 0 && row.group_id != model.group_id)
    raise(Errc::dimension_mismatch,
          "row group " + std::to_string(row.group_id) + " does not match model group " +
              std::to_string(model.group_id));
  return predict(model, row.values) > 0.0 ? Label::malignant : Label::benign;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_array(std::ostream& out, const char* name, const std::vector<double>& v) {
  out << name << " " << v.size() << "\n";
  for (std::size_t i = 0; i < v.size(); ++i)
    out << fmt(v[i]) << (i + 1 == v.size() ? "\n" : " ");
  if (v.empty()) out << "\n";
}

std::vector<double> read_array(std::istream& in, const char* name) {
  std::string tok;
  std::size_t n = 0;
  if (!(in >> tok >> n) || tok != name)
    raise(Errc::io_failure, std::string("model file: expected section ") + name);
  std::vector<double> v(n);
  for (double& x : v)
    if (!(in >> x)) raise(Errc::io_failure, std::string("model file: short ") + name);
  return v;
}

}  // namespace

void save_model(const MlpModel& model, std::ostream& out) {
  out << "mammotex-model 1\n";
  out << "group " << model.group_id << "\n";
  out << "sizes " << model.sizes.input << " " << model.sizes.hidden << " "
      << model.sizes.output << "\n";
  out << "activation bipolar-sigmoid\n";
  out << "scaler " << model.scaler.dimension() << "\n";
  for (std::size_t k = 0; k < model.scaler.dimension(); ++k)
    out << fmt(model.scaler.min[k]) << " " << fmt(model.scaler.max[k]) << "\n";
  write_array(out, "w1", model.w1);
  write_array(out, "b1", model.b1);
  write_array(out, "w2", model.w2);
  write_array(out, "b2", model.b2);
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Errc::io_failure, "cannot open " + path.string() + " for writing");
  save_model(model, out);
  if (!out) raise(Errc::io_failure, "write failed for " + path.string());
}

MlpModel load_model(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "mammotex-model" || version != 1)
    raise(Errc::io_failure, "not a mammotex model file");
  MlpModel m;
  std::string tok;
  if (!(in >> tok >> m.group_id) || tok != "group")
    raise(Errc::io_failure, "model file: expected group");
  if (!(in >> tok >> m.sizes.input >> m.sizes.hidden >> m.sizes.output) || tok != "sizes")
    raise(Errc::io_failure, "model file: expected sizes");
  std::string activation;
  if (!(in >> tok >> activation) || tok != "activation" || activation != "bipolar-sigmoid")
    raise(Errc::io_failure, "model file: unsupported activation");
  std::size_t dim = 0;
  if (!(in >> tok >> dim) || tok != "scaler")
    raise(Errc::io_failure, "model file: expected scaler");
  m.scaler.min.resize(dim);
  m.scaler.max.resize(dim);
  for (std::size_t k = 0; k < dim; ++k)
    if (!(in >> m.scaler.min[k] >> m.scaler.max[k]))
      raise(Errc::io_failure, "model file: short scaler");
  m.w1 = read_array(in, "w1");
  m.b1 = read_array(in, "b1");
  m.w2 = read_array(in, "w2");
  m.b2 = read_array(in, "b2");
  check_sizes(m.sizes);
  const auto expect = [](std::size_t got, std::size_t want, const char* what) {
    if (got != want)
      raise(Errc::io_failure, std::string("model file: bad ") + what + " size");
  };
  expect(m.w1.size(), static_cast<std::size_t>(m.sizes.hidden) * m.sizes.input, "w1");
  expect(m.b1.size(), static_cast<std::size_t>(m.sizes.hidden), "b1");
  expect(m.w2.size(), static_cast<std::size_t>(m.sizes.output) * m.sizes.hidden, "w2");
  expect(m.b2.size(), static_cast<std::size_t>(m.sizes.output), "b2");
  return m;
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_failure, "cannot open " + path.string());
  return load_model(in);
}

}  // namespace mammotex
