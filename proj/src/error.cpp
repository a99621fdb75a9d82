#include "tmap/error.hpp"

namespace tmap {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::empty_set: return "EmptySet";
    case Errc::zero_vector: return "ZeroVector";
    case Errc::negative_weight: return "NegativeWeight";
    case Errc::mode_mismatch: return "ModeMismatch";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::config_mismatch: return "ConfigMismatch";
    case Errc::heterogeneous_signatures: return "HeterogeneousSignatures";
    case Errc::incompatible_query: return "IncompatibleQuery";
    case Errc::unknown_id: return "UnknownId";
    case Errc::self_loop: return "SelfLoop";
    case Errc::node_out_of_range: return "NodeOutOfRange";
    case Errc::non_finite_weight: return "NonFiniteWeight";
    case Errc::backend_failure: return "BackendFailure";
    case Errc::metric_mismatch: return "MetricMismatch";
    case Errc::size_mismatch: return "SizeMismatch";
    case Errc::parse_error: return "ParseError";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::empty_input: return "EmptyInput";
    case Errc::metadata_length_mismatch: return "MetadataLengthMismatch";
    case Errc::output_unwritable: return "OutputUnwritable";
    case Errc::internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace tmap
