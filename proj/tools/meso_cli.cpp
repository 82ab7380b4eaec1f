// Command line front end. Reads a problem (or a previously emitted report)
// as JSON, runs the requested pipeline command, prints the report, and exits
// with the pipeline's code: 0 verified, 2 truncated, 3 verification failed,
// 4 bad input, 5 budget exhausted.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "meso/pipeline.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw meso::InputError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The default budget is 16 unless MESOPRIME_BUDGET says otherwise. An
// explicit file option or --budget flag still wins.
std::int64_t env_default_budget() {
  const char* env = std::getenv("MESOPRIME_BUDGET");
  if (!env || !*env) return 16;
  char* end = nullptr;
  long long v = std::strtoll(env, &end, 10);
  if (!end || *end != '\0' || v <= 0)
    throw meso::InputError("MESOPRIME_BUDGET must be a positive integer, got: " +
                           std::string(env));
  return static_cast<std::int64_t>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mesoprimary decomposition of monoid congruences and binomial submodules"};
  app.require_subcommand(1);

  std::string input_path = "-";
  std::int64_t budget_flag = 0;
  bool no_verify = false;
  bool prune = false;
  std::uint64_t seed = 0;
  std::string format_flag;

  app.add_option("--input", input_path, "problem file, - for stdin")
      ->capture_default_str();
  app.add_option("--budget", budget_flag, "exploration degree bound (default 16)");
  app.add_flag("--no-verify", no_verify, "skip the recombination check");
  app.add_flag("--prune", prune, "drop components that do not change the intersection");
  app.add_option("--seed", seed, "random seed, reserved for sampling utilities");
  app.add_option("--format", format_flag, "report format")
      ->check(CLI::IsMember({"json", "text"}));

  CLI::App* congr = app.add_subcommand("congr", "congruence commands");
  CLI::App* congr_dec = congr->add_subcommand("decompose", "mesoprimary decomposition");
  CLI::App* congr_cls = congr->add_subcommand("classify", "primary and mesoprimary tests");
  CLI::App* bin = app.add_subcommand("bin", "binomial submodule commands");
  CLI::App* bin_dec = bin->add_subcommand("decompose", "mesoprimary decomposition");
  CLI::App* bin_prim = bin->add_subcommand("primary", "refine into primary components");
  CLI::App* verify = app.add_subcommand("verify", "recombine a previously emitted report");
  CLI::App* info = app.add_subcommand("info", "tool metadata");
  congr->require_subcommand(1);
  bin->require_subcommand(1);
  for (CLI::App* sub : {congr, congr_dec, congr_cls, bin, bin_dec, bin_prim, verify, info})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  (void)seed;

  std::string command;
  if (congr_dec->parsed()) command = "congr decompose";
  else if (congr_cls->parsed()) command = "congr classify";
  else if (bin_dec->parsed()) command = "bin decompose";
  else if (bin_prim->parsed()) command = "bin primary";
  else if (verify->parsed()) command = "verify";
  else command = "info";

  std::string render = format_flag.empty() ? "json" : format_flag;
  auto emit_error = [&](const std::string& message) {
    meso::Json report;
    report["command"] = command;
    report["error"]["kind"] = "input";
    report["error"]["message"] = message;
    std::cout << meso::format_report(report, render);
    return meso::kExitInputError;
  };

  meso::Json input = meso::Json::object();
  try {
    if (command != "info") input = meso::parse_json(read_input(input_path));

    // fold flag and environment overrides into the options the pipeline sees,
    // so the report's embedded input shows what actually ran
    meso::Json* options = nullptr;
    if (command == "verify") {
      if (input.is_object() && input.contains("input") && input.at("input").is_object())
        options = &input["input"]["options"];
    } else if (command != "info") {
      options = &input["options"];
    }
    if (options) {
      if (!options->is_object()) *options = meso::Json::object();
      if (budget_flag > 0)
        (*options)["budget"] = budget_flag;
      else if (!options->contains("budget"))
        (*options)["budget"] = env_default_budget();
      if (no_verify) (*options)["verify"] = false;
      if (prune) (*options)["prune"] = true;
      if (!format_flag.empty()) (*options)["format"] = format_flag;
      if (format_flag.empty() && options->contains("format") &&
          options->at("format").is_string())
        render = options->at("format").get<std::string>();
    }
  } catch (const meso::InputError& e) {
    return emit_error(e.what());
  }

  meso::RunResult result = meso::run_command(command, input);
  std::cout << meso::format_report(result.report, render);
  return result.exit_code;
}
