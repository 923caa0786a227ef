#pragma once

#include <stdexcept>
#include <string>

namespace apwave
{

/// Invalid configuration: unknown names, out-of-range parameters, bad config files.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Order conditions are only tabulated up to order two.
class UnsupportedOrder : public ConfigError
{
public:
  using ConfigError::ConfigError;
};

/// Malformed numerical input (non-finite data, mismatched extents, bad axis).
class InputError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// A stage solve whose residual exceeded the configured tolerance.
class SolverFailure : public std::runtime_error
{
public:
  SolverFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual)
  {
  }

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// Non-finite values appeared while advancing a step.
class NumericalBlowup : public std::runtime_error
{
public:
  NumericalBlowup(const std::string& what, int stage)
      : std::runtime_error(what), stage_(stage)
  {
  }

  int stage() const noexcept { return stage_; }

private:
  int stage_;
};

} // namespace apwave
