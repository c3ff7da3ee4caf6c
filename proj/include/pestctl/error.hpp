#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pestctl {

/// Invalid or incomplete configuration. Carries every problem found, not just the first.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}
  explicit ConfigError(const std::string& problem)
      : ConfigError(std::vector<std::string>{problem}) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

/// A single time step could not be taken (stability bound violated, non-finite value,
/// negative overshoot). The caller is expected to retry with a smaller step.
class StepRejected : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Step rejections persisted after all retries.
class NumericalFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace pestctl
