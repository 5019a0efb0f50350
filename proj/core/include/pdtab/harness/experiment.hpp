#pragma once

#include <exception>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdtab/harness/config.hpp"
#include "pdtab/metrics/report.hpp"

namespace pdtab::harness {

// Every emitted file, keyed by its name under the output directory.
struct RunArtifacts {
  std::map<std::string, std::string> files;
  std::map<std::string, metrics::EvaluationReport> reports;  // by model name

  // {"format": "pdtab.manifest", "version": 1, "files": [{"path", "bytes", "sha256"}]}
  // over every file except manifest.json itself, sorted by path.
  nlohmann::ordered_json manifest() const;
};

// Pipeline failure tagged with the stage that raised it ("load", "split",
// "train.saint", "write", ...), carrying the original exception.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what, std::exception_ptr cause)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)), cause_(std::move(cause)) {}
  const std::string& stage() const { return stage_; }
  const std::exception_ptr& cause() const { return cause_; }

 private:
  std::string stage_;
  std::exception_ptr cause_;
};

// load -> split -> standardise (fit on train) -> train each requested model
// -> evaluate on the test rows -> build the artifact set. Nothing is written.
RunArtifacts build_experiment(const ExperimentConfig& config);

// Writes artifacts into `dir` (created if needed) plus manifest.json.
// On a write failure the files already written are removed.
void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& dir);

// build_experiment + write_artifacts into config.output_dir.
RunArtifacts run_experiment(const ExperimentConfig& config);

struct ComparisonRow {
  std::string model;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  double mcc = 0.0;
  double auc = 0.0;
};

// One row per report, by MCC descending, then AUC descending, then model name.
std::vector<ComparisonRow> compare_table(const std::vector<metrics::EvaluationReport>& reports);
// model,weighted_precision,weighted_recall,weighted_f1,mcc,auc with 4 decimals.
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

// correlation.csv and summary.csv for the data file.
std::map<std::string, std::string> eda_artifacts(const std::filesystem::path& data_path);
void eda_command(const std::filesystem::path& data_path, const std::filesystem::path& output_dir);

// Re-scores a saved checkpoint (any kind) on every row of a data file and
// writes report_<model>.json, roc_<model>.csv and confusion_<model>.csv.
RunArtifacts evaluate_checkpoint(const std::filesystem::path& checkpoint, const std::filesystem::path& data_path,
                                 const std::filesystem::path& output_dir);

}  // namespace pdtab::harness
