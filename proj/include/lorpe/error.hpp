#pragma once

#include <stdexcept>
#include <string>

namespace lorpe {

//! Failure categories reported by the estimation library.
enum class ErrorCode
{
  invalid_argument,
  quadrature_failure,
  degenerate_interval,
  ill_conditioned,
  degree_out_of_range,
  all_zero_density,
  degenerate_sample,
  all_rejected
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what)
    , code_(code)
  {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace lorpe
