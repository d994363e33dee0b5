#pragma once

#include <stdexcept>
#include <string>

namespace covtau {

// Every rejection raised by the library. The message names the offending
// input (record key, line number, flag) so the CLI can print it verbatim.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace covtau
