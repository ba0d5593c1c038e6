#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mammotex/descriptors.hpp"

namespace mammotex {

struct LayerSizes {
  int input = 1;
  int hidden = 1;
  int output = 1;
};

/// floor((n + 1) * 2/3) hidden nodes from the input-node count.
int hidden_units_rule1(int n);
/// ceil(sqrt(n_inputs * n_outputs)) hidden nodes.
int hidden_units_rule2(int n_inputs, int n_outputs);

struct TrainConfig {
  double learning_rate = 0.3;
  double momentum = 0.9;
  double error_goal = 1e-4;  // on MSE = (1/2N) sum (y-t)^2
  int max_epochs = 5000;
  std::uint64_t seed = 1;
};

/// sigma(z) = 2/(1+e^-z) - 1, range (-1, 1).
double bipolar_sigmoid(double z);

/// Single-hidden-layer perceptron with the bipolar sigmoid on both layers.
struct MlpModel {
  LayerSizes sizes;
  std::vector<double> w1;  // hidden x input, row-major
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // output x hidden, row-major
  std::vector<double> b2;  // output
  Scaler scaler;           // fitted input scaler; empty when inputs are pre-scaled
  int group_id = 0;        // descriptor group the model was trained on, 0 if n/a

  /// Forward pass on an already-scaled input row.
  double forward_scaled(std::span<const double> input) const;
};

/// Seeded uniform [-0.5, 0.5] initialization, order w1, b1, w2, b2.
MlpModel init_model(const LayerSizes& sizes, std::uint64_t seed);

/// Rows stored flat; row r occupies inputs [r*width, (r+1)*width).
struct ScaledDataset {
  int width = 0;
  std::vector<double> inputs;
  std::vector<double> targets;  // one of {-1, +1} per row
  std::size_t rows() const { return targets.size(); }
  std::span<const double> row(std::size_t r) const {
    return {inputs.data() + r * width, static_cast<std::size_t>(width)};
  }
};

struct TrainOutcome {
  int epochs_used = 0;
  double final_mse = 0.0;
  bool converged = false;
  double regression_train = 0.0;
  bool regression_train_zero_variance = false;
  std::optional<double> regression_test;
};

/// Full-batch gradient descent with momentum on the halved MSE. Stops when
/// MSE <= error_goal or at max_epochs; throws non_finite_loss on divergence.
/// Deterministic given the dataset, sizes and config.
std::pair<MlpModel, TrainOutcome> train(const ScaledDataset& dataset,
                                        const LayerSizes& sizes,
                                        const TrainConfig& config);

/// Gradient of the halved MSE at the model's current parameters, ordered like
/// the parameter vectors (w1, b1, w2, b2).
struct Gradients {
  std::vector<double> w1, b1, w2, b2;
};
Gradients compute_gradients(const MlpModel& model, const ScaledDataset& dataset);
double evaluate_mse(const MlpModel& model, const ScaledDataset& dataset);

struct RegressionResult {
  double r = 0.0;
  bool zero_variance = false;  // either vector constant; r reported as 0
};

/// Pearson correlation coefficient between outputs and targets.
RegressionResult regression_value(std::span<const double> outputs,
                                  std::span<const double> targets);

/// Fits a scaler on the rows, scales, sizes the hidden layer by the chosen
/// rule (1 or 2) and trains. Targets: benign -> -1, malignant -> +1.
std::pair<MlpModel, TrainOutcome> train_on_rows(const std::vector<DescriptorVector>& rows,
                                                int rule, const TrainConfig& config);

/// Scales the raw row through the model's scaler and runs the forward pass.
double predict(const MlpModel& model, const std::vector<double>& raw_values);

/// Decision rule: output > 0 -> malignant, otherwise benign.
Label classify(const MlpModel& model, const DescriptorVector& row);

/// Text persistence with 17-significant-digit parameters; loading reproduces
/// forward outputs bit-exactly.
void save_model(const MlpModel& model, std::ostream& out);
void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(std::istream& in);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace mammotex
