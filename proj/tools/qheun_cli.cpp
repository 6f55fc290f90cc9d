#include "qheun/commands.hpp"
#include "qheun/config.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

int main(int argc, char** argv) {
  CLI::App app{"Spectral polynomials and q -> 0 asymptotics of the q-Heun equation"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_path;
  std::string format = "obj";
  unsigned precision = 0;
  int k = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"spectrum", "polynomials c_0(E) .. c_{N+1}(E) from the three-term recurrence"},
      {"roots", "roots of the spectral polynomial c_{N+1}(E) with real-root and interlacing checks"},
      {"asymptotics", "regime and leading q -> 0 behaviour of eigenvalues, coefficient ratios and zeros"},
      {"residual", "polynomial-type eigenfunction and its residual for every real root"},
      {"sweep", "measured / predicted ratios along a decreasing q grid"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "key = value parameter file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "write the result here instead of standard output");
    sub->add_option("--format", format, "obj (JSON) or table (CSV)")->check(CLI::IsMember({"obj", "table"}));
    sub->add_option("--precision", precision, "working precision in bits (overrides precision_bits)");
    sub->add_option("--k", k, "eigenvalue index for coefficient-ratio and zero predictions");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto command = qheun::parse_command(app.get_subcommands().front()->get_name());

  std::ifstream in(config_path);
  std::stringstream text;
  text << in.rdbuf();

  qheun::RunConfig cfg;
  try {
    cfg = qheun::parse_config(text.str(), precision ? std::optional<unsigned>(precision) : std::nullopt);
    if (k != 0) {
      if (k < 1 || k > cfg.degree.N + 1) {
        throw qheun::Error(qheun::ErrorKind::InvalidArgument,
                           "--k must lie in 1.." + std::to_string(cfg.degree.N + 1));
      }
      cfg.k = k;
    }
  } catch (const qheun::Error& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return qheun::exit_code_for(e.kind());
  }
  cfg.output_path = out_path;
  cfg.format = format == "table" ? qheun::OutputFormat::Table : qheun::OutputFormat::Object;

  const qheun::CommandOutcome outcome = qheun::run_command(cfg, *command);
  std::cerr << outcome.diagnostics;
  if (outcome.exit_code == 0 && out_path.empty()) std::cout << outcome.document;
  return outcome.exit_code;
}
