#include "cmvlab/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>

namespace {

unsigned default_threads() {
  if (const char* env = std::getenv("CMVLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    std::cerr << "warning: ignoring invalid CMVLAB_THREADS='" << env << "'\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cmvlab: numerical experiments with CMV matrices and quantum walks"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", cmv::cli::tool_version);

  std::string config_path;
  std::string out = ".";
  std::uint64_t seed = 0;
  unsigned threads = 0;

  for (const auto& [name, fn] : cmv::cli::commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_path, "JSON config file")->required();
    sub->add_option("-o,--out", out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", threads, "worker threads (default: CMVLAB_THREADS or 1)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  cmv::cli::RunOptions opt;
  opt.out = out;
  opt.threads = threads > 0 ? threads : default_threads();
  if (sub->count("--seed") > 0) opt.seed = seed;

  nlohmann::json config;
  try {
    config = cmv::cli::load_config(config_path);
  } catch (const cmv::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  }
  return cmv::cli::execute(sub->get_name(), config, opt);
}
