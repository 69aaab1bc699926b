#pragma once

// Placeholder: filled in with the subcommand implementations.
namespace contor::cli {
inline int run(int, char**) { return 0; }
}  // namespace contor::cli
