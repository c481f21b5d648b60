#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "neural/bytes.hpp"

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs the neural binary with shell-quoted args, capturing both streams.
inline CliResult run_cli(const std::string& args, const std::filesystem::path& scratch) {
  const auto out = scratch / ".stdout";
  const auto err = scratch / ".stderr";
  const std::string cmd = std::string("'") + NEURAL_CLI_PATH + "' " + args + " >'" + out.string() +
                          "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = neural::read_text_file(out);
  r.err = neural::read_text_file(err);
  return r;
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}
