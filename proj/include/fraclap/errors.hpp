#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

struct fit_error : std::runtime_error {
  double achieved;
  int order;
  fit_error(double achieved_, int order_, const std::string& msg)
      : std::runtime_error(msg), achieved(achieved_), order(order_) {}
};

struct structure_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct dimension_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct bound_error : std::runtime_error {
  double slack;
  bound_error(double slack_, const std::string& msg)
      : std::runtime_error(msg), slack(slack_) {}
};

struct recovery_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fraclap
