#pragma once
// Error taxonomy shared by all modules.
//
//  - domain_error:        an input violates a mathematical precondition
//  - configuration_error: a structurally invalid request (bad pairing, missing
//                         field, malformed file); names what is required
//  - consistency_error:   mutually inconsistent inputs (e.g. a realized sum
//                         exceeding its almost-sure envelope)
//  - evaluation_error:    a user-supplied callable produced a non-finite or
//                         out-of-range value
//  - optimization_error:  the line search hit a non-finite evaluation; carries
//                         the offending rate
//  - partial_result_error: a long computation died mid-flight; carries the
//                         number of completed trials

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tailbound {

class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

class configuration_error : public std::runtime_error {
 public:
  explicit configuration_error(const std::string& what) : std::runtime_error(what) {}
};

class consistency_error : public std::runtime_error {
 public:
  explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

class evaluation_error : public std::runtime_error {
 public:
  explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

class optimization_error : public std::runtime_error {
 public:
  optimization_error(const std::string& what, double lambda)
      : std::runtime_error(what), lambda_(lambda) {}
  double lambda() const noexcept { return lambda_; }

 private:
  double lambda_;
};

class partial_result_error : public std::runtime_error {
 public:
  partial_result_error(const std::string& what, std::uint64_t completed)
      : std::runtime_error(what), completed_(completed) {}
  std::uint64_t completed() const noexcept { return completed_; }

 private:
  std::uint64_t completed_;
};

}  // namespace tailbound
