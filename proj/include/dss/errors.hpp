#pragma once

#include <stdexcept>
#include <string>

namespace dss {

// Exit code contract: 2 = schema/parse/argument, 3 = numeric/solver, 4 = pipeline order.
struct Error : std::runtime_error {
  int exit_code;
  Error(const std::string& msg, int code) : std::runtime_error(msg), exit_code(code) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& m) : Error(m, 2) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error(m, 2) {}
};
struct DegenerateInputError : Error {
  explicit DegenerateInputError(const std::string& m) : Error(m, 2) {}
};
struct ArgumentError : Error {
  explicit ArgumentError(const std::string& m) : Error(m, 2) {}
};
struct NumericError : Error {
  explicit NumericError(const std::string& m) : Error(m, 3) {}
};
struct SolverError : Error {
  explicit SolverError(const std::string& m) : Error(m, 3) {}
};
struct BudgetError : Error {
  explicit BudgetError(const std::string& m) : Error(m, 3) {}
};
struct PipelineOrderError : Error {
  explicit PipelineOrderError(const std::string& m) : Error(m, 4) {}
};

}  // namespace dss
