#ifndef ELAB_ERROR_HPP
#define ELAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace elab {

enum class ErrorCode {
  invalid_size,
  invalid_ids,
  not_connected,
  no_such_node,
  no_such_edge,
  topology_mismatch,
  model_mismatch,
  unsound_timeout,
  invalid_dimension,
  invalid_parties,
  already_measured,
  no_such_share,
  no_such_state,
  bootstrap_failed,
  config_error,
  internal_error,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}

  // config errors carry a JSON pointer to the offending field
  Error(ErrorCode code, const std::string& pointer, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(code)) + " at " + pointer + ": " + msg),
        code_(code),
        pointer_(pointer) {}

  ErrorCode code() const { return code_; }
  const std::string& pointer() const { return pointer_; }

 private:
  ErrorCode code_;
  std::string pointer_;
};

} // namespace elab

#endif
