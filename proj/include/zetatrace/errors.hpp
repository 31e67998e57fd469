#pragma once

#include <stdexcept>

namespace zetatrace {

/// A quantity that is integral or consistent by theorem came out otherwise.
/// This signals a bug in the library, never bad user input; the CLI maps it
/// to exit code 3.
struct InternalInconsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace zetatrace
