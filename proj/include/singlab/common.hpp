#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace singlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Word = std::vector<int>;

enum class ErrorCode {
  InvalidInput,
  OutsideAttractor,
  NotApplicable,
  Precondition,
  InconsistentPrecondition,
  Validation,
  BudgetExceeded,
  Io,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Thrown when a budget runs out; carries whatever was computed so far.
template <class T>
class PartialResult : public Error {
 public:
  PartialResult(std::string msg, T partial)
      : Error(ErrorCode::BudgetExceeded, msg), partial_(std::move(partial)) {}
  const T& partial() const { return partial_; }

 private:
  T partial_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& msg);

// splitmix64-seeded xoshiro256** so streams are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();                 // [0,1)
  double uniform(double a, double b);
  double normal();
  int below(int n);                 // uniform in [0,n)
  // Independent stream for shard i, derived from the parent seed only.
  static Rng stream(std::uint64_t seed, std::uint64_t shard);

 private:
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Runs fn(i) for i in [0,n). Each index must write only its own slot so the
// result does not depend on the thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Thread count from SINGLAB_THREADS, falling back to 1.
int default_threads();

}  // namespace singlab
