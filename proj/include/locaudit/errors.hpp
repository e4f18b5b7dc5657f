#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace locaudit {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- quantum_kernel --------------------------------------------------------

struct NotHermitian : Error {
  using Error::Error;
};
struct NotInvolutory : Error {
  using Error::Error;
};
struct DegenerateSpectrum : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct NonCommuting : Error {
  using Error::Error;
};

// -- hardy_config ----------------------------------------------------------

struct DegenerateParams : Error {
  using Error::Error;
};
struct NoFeasibleConfig : Error {
  using Error::Error;
};

// -- support_model ---------------------------------------------------------

struct InvalidPolicy : Error {
  using Error::Error;
};
struct UnknownLabel : Error {
  using Error::Error;
};

/// Raised when prediction closure would mark +1 on an observable whose
/// actual measured outcome is -1. Carries the offending specimen and the
/// rule applications that led there.
struct ConsistencyViolation : Error {
  ConsistencyViolation(std::string msg, int specimen, std::vector<std::string> chain)
      : Error(std::move(msg)), specimen_id(specimen), rule_chain(std::move(chain)) {}
  int specimen_id;
  std::vector<std::string> rule_chain;
};

// -- proof_auditor ---------------------------------------------------------

struct ConfigRejected : Error {
  using Error::Error;
};
struct DepthExceeded : Error {
  using Error::Error;
};

}  // namespace locaudit
