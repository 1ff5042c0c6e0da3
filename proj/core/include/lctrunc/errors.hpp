#ifndef LCTRUNC_ERRORS_HPP
#define LCTRUNC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lctrunc {

// A stochastic matrix whose state space splits into non-communicating pieces.
class reducible_error : public std::runtime_error {
 public:
  reducible_error(const std::string& msg, int state_a, int state_b)
      : std::runtime_error(msg), state_a(state_a), state_b(state_b) {}
  int state_a;
  int state_b;
};

class not_block_monotone_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an inter-module contract (e.g. missing tail bound for an
// unbounded Lyapunov vector).
class contract_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class search_exhausted_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class tolerance_unreachable_error : public std::runtime_error {
 public:
  tolerance_unreachable_error(const std::string& msg, double residual)
      : std::runtime_error(msg), residual(residual) {}
  double residual;
};

class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class assumption_unverified_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class hypothesis_violated_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lctrunc

#endif
