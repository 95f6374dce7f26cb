#pragma once

#include <stdexcept>
#include <string>

namespace qif {

enum class errc {
  row_sum,
  negative_entry,
  duplicate_label,
  dimension_mismatch,
  label_mismatch,
  incompatible_inputs,
  bad_probability,
  type_mismatch,
  zero_prior_vulnerability,
  index_out_of_range,
  invalid_model,
  solver_stall,
  channel_too_large,
  parse_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::row_sum: return "RowSumError";
    case errc::negative_entry: return "NegativeEntry";
    case errc::duplicate_label: return "DuplicateLabel";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::label_mismatch: return "LabelMismatch";
    case errc::incompatible_inputs: return "IncompatibleInputs";
    case errc::bad_probability: return "BadProbability";
    case errc::type_mismatch: return "TypeMismatch";
    case errc::zero_prior_vulnerability: return "ZeroPriorVulnerability";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::invalid_model: return "InvalidModel";
    case errc::solver_stall: return "SolverStall";
    case errc::channel_too_large: return "ChannelTooLarge";
    case errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

/// Domain error carrying a stable machine-readable name next to the message.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const { return code_; }
  const char* name() const { return errc_name(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw error(code, message);
}

}  // namespace qif
