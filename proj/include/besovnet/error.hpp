#pragma once

#include <stdexcept>
#include <string>

namespace besovnet {

// Every library failure carries a short machine-readable kind
// ("invalid_argument", "dimension_mismatch", "infeasible", "divergence", ...)
// so the CLI can emit a structured error record.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

inline void require(bool cond, const char* kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace besovnet
