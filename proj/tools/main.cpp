#include "cli.hpp"

#include <omp.h>

#include <cstdio>
#include <iostream>

using namespace ng;

namespace {

std::string key(const CLI::Option* opt) { return opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front(); }

void print_options(const CLI::App& app) {
  for (const CLI::Option* opt : app.get_options()) {
    const std::string k = key(opt);
    if (k == "help" || k == "explain" || k == "config") continue;
    const std::string d = opt->get_default_str();
    std::printf("%s = \"%s\"\n", k.c_str(), d.c_str());
  }
}

// Config file layout: global keys first, then one section per command.
void explain(const CLI::App& app) {
  print_options(app);
  for (const CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    std::printf("\n[%s]\n", sub->get_name().c_str());
    print_options(*sub);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Busemann calculus, nearly geodesic surfaces and domains of discontinuity in SL(n,R)"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  app.set_config("--config", "", "key=value file; [command] sections, command line flags take precedence");
  cli::Context ctx;
  bool show = false;
  app.add_option("--out", ctx.out, "output directory")->capture_default_str();
  app.add_option("--seed", ctx.seed, "random seed")->capture_default_str();
  app.add_option("--workers", ctx.workers, "threads; 1 runs serial kernels, 0 uses all cores")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--explain", show, "print every command option with its default and exit");
  cli::Runner run;
  cli::register_commands(app, run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }
  if (show) {
    explain(app);
    return 0;
  }
  if (!run) {
    std::cerr << app.help();
    return cli::kExitConfig;
  }
  if (ctx.workers > 0) omp_set_num_threads(ctx.workers);
  try {
    return run(ctx);
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return cli::kExitConfig;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return cli::kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return cli::kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return cli::kExitNumerical;
  }
}
