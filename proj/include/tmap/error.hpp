#pragma once

#include <stdexcept>
#include <string>

namespace tmap {

enum class Errc {
  empty_set,
  zero_vector,
  negative_weight,
  mode_mismatch,
  length_mismatch,
  config_mismatch,
  heterogeneous_signatures,
  incompatible_query,
  unknown_id,
  self_loop,
  node_out_of_range,
  non_finite_weight,
  backend_failure,
  metric_mismatch,
  size_mismatch,
  parse_error,
  dimension_mismatch,
  empty_input,
  metadata_length_mismatch,
  output_unwritable,
  internal,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tmap
