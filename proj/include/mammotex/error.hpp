#pragma once

#include <stdexcept>
#include <string>

namespace mammotex {

enum class Errc {
  // PGM parsing
  unsupported_magic,
  unsupported_depth,
  truncated_data,
  malformed_header,
  // preprocessing
  out_of_bounds,
  invalid_params,
  degenerate_image,
  empty_image,
  // features
  degenerate_texture,
  zero_marginal_variance,
  no_valid_pairs,
  missing_direction,
  // datasets
  empty_dataset,
  mixed_groups,
  dimension_mismatch,
  malformed_row,
  unknown_label,
  inconsistent_width,
  // training
  non_finite_loss,
  length_mismatch,
  // experiment
  too_few_samples,
  incomplete_report,
  missing_image,
  io_failure,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message);
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace mammotex
