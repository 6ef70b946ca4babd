#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "hetpredict/commands.hpp"
#include "hetpredict/error.hpp"

namespace {

using namespace hetpredict;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> methods;
  std::optional<double> confidence;
  std::optional<std::string> out;
  std::optional<std::string> billing;
  bool invert_app_bench = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "run configuration file")->required();
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--methods", o.methods, "comma-separated subset of lotaru-g,lotaru-a,naive,online-m,online-p,accurate");
  cmd->add_option("--confidence", o.confidence, "prediction interval confidence in (0, 1)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--billing", o.billing, "billing granularity: hour, minute or both");
  cmd->add_flag("--invert-app-bench", o.invert_app_bench, "app benchmark values are runtimes (lower is faster)");
}

RunConfig resolve(const Overrides& o) {
  auto config = load_config(o.config);
  if (o.seed) apply_setting(config, "seed", std::to_string(*o.seed), {});
  if (o.methods) apply_setting(config, "methods", *o.methods, {});
  if (o.confidence) apply_setting(config, "confidence", std::to_string(*o.confidence), {});
  if (o.out) apply_setting(config, "out", *o.out, {});
  if (o.billing) apply_setting(config, "billing", *o.billing, {});
  if (o.invert_app_bench) config.invert_app_bench = true;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task runtime prediction for heterogeneous clusters"};
  app.require_subcommand(1);

  Overrides overrides;
  auto* predict = app.add_subcommand("predict", "fit local models and predict runtimes on every target machine");
  auto* evaluate = app.add_subcommand("evaluate", "compare predictions with evaluation traces");
  auto* simulate = app.add_subcommand("simulate", "HEFT scheduling and cloud cost experiments");
  for (auto* cmd : {predict, evaluate, simulate}) add_common(cmd, overrides);

  auto* synth = app.add_subcommand("gen-synthetic", "write a synthetic linear-with-noise trace corpus");
  SyntheticOptions synthetic;
  std::string synth_out = "synthetic";
  synth->add_option("--out", synth_out, "output directory");
  synth->add_option("--seed", synthetic.seed, "random seed");
  synth->add_option("--samples", synthetic.samples, "evaluation samples per workflow")->check(CLI::PositiveNumber);
  synth->add_option("--noise", synthetic.noise, "relative runtime noise")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (synth->parsed()) {
      cmd_gen_synthetic(synthetic, synth_out, std::cerr);
      return 0;
    }
    const auto config = resolve(overrides);
    if (predict->parsed()) cmd_predict(config, std::cerr);
    if (evaluate->parsed()) cmd_evaluate(config, std::cerr);
    if (simulate->parsed()) cmd_simulate(config, std::cerr);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Config ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
