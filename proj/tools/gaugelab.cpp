#include "gaugelab/commands.hpp"
#include "gaugelab/config.hpp"
#include "gaugelab/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
  using namespace gaugelab;

  CLI::App app{"gaugelab: holonomy, Poincare constants, twisted maps and vortex decay"};
  app.require_subcommand(0, 1);
  bool top_schema = false;
  app.add_flag("--schema", top_schema, "Print config keys, CSV columns and exit codes");

  struct Options {
    std::string config;
    std::string out;
    bool schema = false;
  };
  std::map<std::string, Options> opts;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, "Run the " + name + " experiment");
    auto& o = opts[name];
    sub->add_option("--config", o.config, "key = value config file");
    sub->add_option("--out", o.out, "Directory for JSON and CSV artifacts");
    sub->add_flag("--schema", o.schema, "Print the schema of this subcommand");
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidConfig;
  }

  if (top_schema) {
    std::cout << command_schema("");
    return kExitOk;
  }
  for (const auto& name : command_names()) {
    if (!subs[name]->parsed()) continue;
    const auto& o = opts[name];
    if (o.schema) {
      std::cout << command_schema(name);
      return kExitOk;
    }
    Config cfg;
    if (!o.config.empty()) {
      try {
        cfg = Config::load(o.config);
      } catch (const ValidationError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitInvalidConfig;
      }
    }
    return run_command(name, cfg, o.out, std::cout, std::cerr);
  }
  std::cerr << app.help();
  return kExitInvalidConfig;
}
