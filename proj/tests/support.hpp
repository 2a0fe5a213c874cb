#pragma once

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "dnawt/errors.hpp"

// Asserts that `stmt` throws dnawt::Error of the given kind.
#define EXPECT_DNAWT_ERROR(stmt, error_kind)                                         \
  do {                                                                               \
    try {                                                                            \
      stmt;                                                                          \
      ADD_FAILURE() << #stmt " did not throw";                                       \
    } catch (const ::dnawt::Error& e__) {                                            \
      EXPECT_EQ(e__.kind(), ::dnawt::ErrorKind::error_kind) << e__.what();            \
    }                                                                                \
  } while (0)

namespace dnawt::test {

inline const nlohmann::json& oracles() {
  static const nlohmann::json data = [] {
    std::ifstream in(std::string(DNAWT_TEST_DIR) + "/oracles/oracles.json");
    if (!in) throw std::runtime_error("oracles.json missing");
    return nlohmann::json::parse(in);
  }();
  return data;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Compares against tests/golden/<name>; DNAWT_UPDATE_GOLDEN=1 rewrites it.
inline void expect_golden(const std::string& name, const std::string& actual) {
  const std::filesystem::path path = std::filesystem::path(DNAWT_TEST_DIR) / "golden" / name;
  if (std::getenv("DNAWT_UPDATE_GOLDEN")) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << actual;
    return;
  }
  ASSERT_TRUE(std::filesystem::exists(path)) << "missing golden file " << path;
  EXPECT_EQ(read_file(path), actual) << "golden mismatch for " << name;
}

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

// Runs the dnawt binary with shell-quoted `args`.
inline CliRun run_cli(const std::string& args) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path();
  const auto tag = std::to_string(::getpid()) + "_" + std::to_string(counter++);
  const auto out = dir / ("dnawt_out_" + tag);
  const auto err = dir / ("dnawt_err_" + tag);
  const std::string cmd =
      std::string("'") + DNAWT_CLI_PATH + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
  const int raw = std::system(cmd.c_str());
  CliRun r{WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, read_file(out), read_file(err)};
  std::filesystem::remove(out);
  std::filesystem::remove(err);
  return r;
}

}  // namespace dnawt::test
