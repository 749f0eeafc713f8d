#include <CLI11.hpp>
#include <iostream>

#include "rankinlab/cli.hpp"

using namespace rankinlab;

int main(int argc, char** argv) {
  CLI::App app{"rankinlab: numerical verification toolkit"};
  app.set_version_flag("--version", std::string(tool_version));
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string format, output, coeff_dir;
  auto* o_seed = app.add_option("--seed", seed, "seed for randomized experiments");
  auto* o_threads = app.add_option("--threads", threads, "worker cap; 0 uses every core");
  auto* o_format = app.add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl", "json-lines"}));
  auto* o_output = app.add_option("--output,-o", output, "report path; stdout when absent");
  auto* o_coeff = app.add_option("--coeff-dir", coeff_dir, "directory of local coefficient files");
  app.add_option("--config", cfg.config_file, "key = value parameter file; flags win");

  std::map<std::string, std::map<std::string, std::string>> values;
  for (const auto& v : verb_schemas()) {
    auto* sub = app.add_subcommand(v.verb, v.summary);
    for (const auto& p : v.params)
      sub->add_option("--" + p.name, values[v.verb][p.name], p.help + " (default " + p.default_value + ")");
  }

  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a.rfind("-", 0) == 0) {
      if (a.find('=') == std::string::npos && a != "--version" && a != "--help" && a != "-h") ++i;
      continue;
    }
    if (!find_verb(a)) {
      std::cerr << "unknown verb '" << a << "'\n" << schema_listing();
      return 1;
    }
    break;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    auto subs = app.get_subcommands();
    if (!subs.empty() && find_verb(subs.front()->get_name()))
      std::cerr << schema_text(*find_verb(subs.front()->get_name()));
    else
      std::cerr << schema_listing();
    return 1;
  }

  auto* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  for (const auto& p : find_verb(cfg.command)->params)
    if (sub->count("--" + p.name) > 0) cfg.parameters[p.name] = values[cfg.command][p.name];
  if (o_seed->count()) cfg.seed = seed;
  if (o_threads->count()) cfg.threads = threads;
  if (o_format->count()) cfg.format = format == "csv" ? ReportFormat::csv : ReportFormat::jsonl;
  if (o_output->count()) cfg.output = output;
  if (o_coeff->count()) cfg.coeff_dir = coeff_dir;
  return run(cfg, std::cout, std::cerr);
}
