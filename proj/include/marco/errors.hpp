#ifndef MARCO_ERRORS_HPP_
#define MARCO_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace marco {

// Shape disagreement between tensors (matmul dims, param/grad pairs, ...).
struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

// NaN/Inf produced or consumed where finite values are required.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller broke an API precondition (non-scalar backward, off-simplex
// weights, missing stored log-probs, ...).
struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input parsed but violates domain rules (rating range, empty domain, ...).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad configuration value (off-grid hyperparameter, unknown mode, ...).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Training diverged or aborted.
struct TrainingError : std::runtime_error {
  explicit TrainingError(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation protocol violation (cold-split leakage, cohort overlap).
struct ProtocolError : std::runtime_error {
  explicit ProtocolError(const std::string& msg) : std::runtime_error(msg) {}
};

// A pipeline stage was invoked before its upstream artifacts exist.
struct PipelineError : std::runtime_error {
  explicit PipelineError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace marco

#endif  // MARCO_ERRORS_HPP_
