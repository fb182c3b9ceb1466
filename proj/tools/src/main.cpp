#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <thread>

#include "commands.hpp"
#include "lingshift/error.hpp"

namespace {

constexpr int kInputError = 2;
constexpr int kMissingArtifact = 3;
constexpr int kUsageError = 64;

int fail(int code, const std::string& message) {
  std::cerr << "lingshift: error: " << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lingshift;
  using namespace lingshift::cli;

  RunConfig config;
  config.threads = std::max(1u, std::thread::hardware_concurrency());
  RawOptions raw;

  CLI::App app{"Detect statistically significant linguistic change in a temporal corpus"};
  app.require_subcommand(1);
  register_options(app, config, raw);
  auto* train = app.add_subcommand("train", "Train per-snapshot word embeddings")->fallthrough();
  auto* detect = app.add_subcommand("detect", "Build time series and detect change points")->fallthrough();
  auto* bench = app.add_subcommand("bench", "Run the donor/receptor perturbation benchmark")->fallthrough();
  auto* synth = app.add_subcommand("synth", "Generate a synthetic tagged corpus")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kUsageError;
  }

  try {
    finalize(config, raw);
    if (train->parsed()) cmd_train(config);
    if (detect->parsed()) cmd_detect(config);
    if (bench->parsed()) cmd_bench(config);
    if (synth->parsed()) cmd_synth(config);
  } catch (const UsageError& e) {
    return fail(kUsageError, e.what());
  } catch (const MissingArtifact& e) {
    return fail(kMissingArtifact, e.what());
  } catch (const IoError& e) {
    return fail(kInputError, e.what());
  } catch (const ParseError& e) {
    return fail(kInputError, e.what());
  } catch (const InvalidArgument& e) {
    return fail(kInputError, e.what());
  } catch (const UnknownWord& e) {
    return fail(kInputError, e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
  return 0;
}
