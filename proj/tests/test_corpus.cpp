#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "meso/pipeline.hpp"

using namespace meso;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// exit code implied by a passing or truncated report
int expected_exit(const Json& report) {
  if (report.contains("error")) return kExitInputError;
  if (report.contains("verification"))
    for (const auto& [key, value] : report.at("verification").items())
      if (value == "fail") return kExitVerificationFailed;
  if (report.contains("budget") && report.at("budget").at("complete") == false)
    return kExitTruncated;
  return kExitOk;
}

}  // namespace

TEST_CASE("corpus problems reproduce their expected reports byte for byte") {
  std::vector<fs::path> problems;
  for (const auto& entry : fs::directory_iterator(MESO_CORPUS_DIR)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 5 && name.ends_with(".json") && !name.ends_with(".expected.json"))
      problems.push_back(entry.path());
  }
  std::sort(problems.begin(), problems.end());
  REQUIRE(problems.size() >= 8);

  for (const auto& path : problems) {
    INFO(path.filename().string());
    fs::path expected_path = path;
    expected_path.replace_extension(".expected.json");
    REQUIRE(fs::exists(expected_path));

    Json problem = parse_json(slurp(path));
    Json expected = parse_json(slurp(expected_path));
    std::string command = expected.at("command").get<std::string>();

    RunResult rr = run_command(command, problem);
    CHECK(rr.report.dump(2) == expected.dump(2));
    CHECK(rr.exit_code == expected_exit(expected));

    // every decomposition report must also survive independent recombination
    if (command == "bin decompose" || command == "bin primary" ||
        command == "congr decompose") {
      RunResult vr = run_command("verify", expected);
      INFO("verify of " + path.filename().string());
      CHECK(vr.report.at("verification").at("recombination") == "pass");
      CHECK(vr.exit_code != kExitVerificationFailed);
    }
  }
}
