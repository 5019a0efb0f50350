#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pdtab/errors.hpp"
#include "pdtab/harness/config.hpp"
#include "pdtab/harness/experiment.hpp"

namespace {

enum ExitCode : int { kOk = 0, kOther = 1, kData = 2, kConfig = 3, kDivergence = 4 };

int classify(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const pdtab::harness::StageError& e) {
    return e.cause() ? classify(e.cause()) : kOther;
  } catch (const pdtab::DataError&) {
    return kData;
  } catch (const pdtab::CheckpointError&) {
    return kData;
  } catch (const pdtab::ConfigError&) {
    return kConfig;
  } catch (const pdtab::TrainingError&) {
    return kDivergence;
  } catch (...) {
    return kOther;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdtab: tabular models for voice-based Parkinson's detection"};
  app.require_subcommand(1);

  std::string data_path;
  std::string out_dir;
  std::string config_path;
  std::string models;
  std::uint64_t seed = 0;
  std::string checkpoint;

  auto* run = app.add_subcommand("run", "train and evaluate the requested models");
  run->add_option("--data", data_path, "CSV data file")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--config", config_path, "JSON experiment config");
  auto* seed_opt = run->add_option("--seed", seed, "root seed (overrides the config)");
  auto* models_opt = run->add_option("--models", models, "comma-separated subset of mlp,gbm,attentive,saint");

  auto* eda = app.add_subcommand("eda", "write correlation.csv and summary.csv");
  eda->add_option("--data", data_path, "CSV data file")->required();
  eda->add_option("--out", out_dir, "output directory")->required();

  auto* evaluate = app.add_subcommand("evaluate", "re-score a saved checkpoint");
  evaluate->add_option("--checkpoint", checkpoint, "checkpoint JSON")->required();
  evaluate->add_option("--data", data_path, "CSV data file")->required();
  evaluate->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (run->parsed()) {
      pdtab::harness::ExperimentConfig config;
      if (!config_path.empty()) config = pdtab::harness::load_experiment_config(config_path);
      if (*seed_opt) config.seed = seed;
      if (*models_opt) config.models = pdtab::harness::parse_model_list(models);
      config.data_path = data_path;
      config.output_dir = out_dir;
      const auto artifacts = pdtab::harness::run_experiment(config);
      std::cout << pdtab::harness::comparison_csv(pdtab::harness::compare_table([&] {
        std::vector<pdtab::metrics::EvaluationReport> reports;
        for (const auto& [name, report] : artifacts.reports) reports.push_back(report);
        return reports;
      }()));
    } else if (eda->parsed()) {
      pdtab::harness::eda_command(data_path, out_dir);
    } else if (evaluate->parsed()) {
      const auto artifacts = pdtab::harness::evaluate_checkpoint(checkpoint, data_path, out_dir);
      for (const auto& [name, report] : artifacts.reports) {
        std::printf("%s accuracy=%.4f mcc=%.4f auc=%.4f\n", name.c_str(), report.accuracy.value, report.mcc.value,
                    report.roc.auc);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "pdtab: " << e.what() << "\n";
    return classify(std::current_exception());
  }
  return kOk;
}
