#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace sdlab::cli {

struct GlobalOptions {
  std::string config;
  std::string out = "runs";
  int jobs = 1;
  std::optional<std::uint64_t> seed;
};

// Exit codes: 0 pass, 2 diagnosed failure, 1 operational error.
constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitDiagnosed = 2;

int run_command(const std::string& command, const GlobalOptions& options, std::ostream& out, std::ostream& err);

int main_entry(int argc, char** argv);

}  // namespace sdlab::cli
