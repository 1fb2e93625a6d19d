#pragma once

#include <stdexcept>
#include <string>

namespace gujfont {

// Every failure raised by the library derives from this type so callers
// (the CLI, the Python module) can report it uniformly.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gujfont
