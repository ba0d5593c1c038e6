#include "mammotex/error.hpp"

namespace mammotex {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::unsupported_magic: return "UnsupportedMagic";
    case Errc::unsupported_depth: return "UnsupportedDepth";
    case Errc::truncated_data: return "TruncatedData";
    case Errc::malformed_header: return "MalformedHeader";
    case Errc::out_of_bounds: return "OutOfBounds";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::degenerate_image: return "DegenerateImage";
    case Errc::empty_image: return "EmptyImage";
    case Errc::degenerate_texture: return "DegenerateTexture";
    case Errc::zero_marginal_variance: return "ZeroMarginalVariance";
    case Errc::no_valid_pairs: return "NoValidPairs";
    case Errc::missing_direction: return "MissingDirection";
    case Errc::empty_dataset: return "EmptyDataset";
    case Errc::mixed_groups: return "MixedGroups";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::malformed_row: return "MalformedRow";
    case Errc::unknown_label: return "UnknownLabel";
    case Errc::inconsistent_width: return "InconsistentWidth";
    case Errc::non_finite_loss: return "NonFiniteLoss";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::incomplete_report: return "IncompleteReport";
    case Errc::missing_image: return "MissingImage";
    case Errc::io_failure: return "IoFailure";
  }
  return "UnknownError";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void raise(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace mammotex
