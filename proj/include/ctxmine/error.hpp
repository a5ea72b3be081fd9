#pragma once

#include <stdexcept>
#include <string>

namespace ctxmine {

/// Error thrown by loaders, validators and commands. The message is meant
/// to be printed to the user as-is (it names files, line numbers, ids).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ctxmine
