#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smartsize {

// Invalid argument or violated precondition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed pilot CSV, report CSV/JSON or config input. Carries the
// 1-based line number when it is known (0 otherwise).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// An estimator could not be evaluated on the supplied data.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadrature or root search failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested power cannot be reached within the search bound.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, double ceiling)
      : std::runtime_error(what), ceiling_(ceiling) {}

  double ceiling() const noexcept { return ceiling_; }

 private:
  double ceiling_;
};

// A simulation replication failed; carries the replication index and the
// study seed so the failure can be reproduced in isolation.
class ReplicationError : public std::runtime_error {
 public:
  ReplicationError(long replication, unsigned long long seed, const std::string& cause)
      : std::runtime_error("replication " + std::to_string(replication) + " (seed " + std::to_string(seed) +
                           ") failed: " + cause),
        replication_(replication),
        seed_(seed) {}

  long replication() const noexcept { return replication_; }
  unsigned long long seed() const noexcept { return seed_; }

 private:
  long replication_;
  unsigned long long seed_;
};

}  // namespace smartsize
