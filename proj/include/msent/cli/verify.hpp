#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace msent::cli {

// A numerical cross-check that did not hold.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VerifyOptions {
  std::string suite;
  std::uint64_t seed = 0;
  std::optional<int> n;
  std::optional<double> epsilon;
  std::optional<std::size_t> trials;
  unsigned threads = 0;
};

struct Check {
  std::string name;
  double tolerance;
  double residual;
  bool pass;
  nlohmann::json detail = nlohmann::json::object();
};

struct VerifyResult {
  std::string suite;
  std::vector<Check> checks;

  bool pass() const;
  nlohmann::json to_json() const;
};

const std::vector<std::string>& verify_suites();

// Unknown suite -> ValidationError.
VerifyResult run_verify(const VerifyOptions& options);

}  // namespace msent::cli
