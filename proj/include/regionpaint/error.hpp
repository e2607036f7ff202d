#pragma once

#include <stdexcept>
#include <string>

namespace regionpaint {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised by the pipeline; carries the failing stage and the offending entity.
class StageError : public Error {
  public:
    StageError(std::string stage, std::string entity, const std::string& what)
        : Error(stage + " failed on " + entity + ": " + what),
          stage_(std::move(stage)), entity_(std::move(entity)) {}

    const std::string& stage() const { return stage_; }
    const std::string& entity() const { return entity_; }

  private:
    std::string stage_;
    std::string entity_;
};

}  // namespace regionpaint
