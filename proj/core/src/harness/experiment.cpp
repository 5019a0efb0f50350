#include "pdtab/harness/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "pdtab/boosting/checkpoint.hpp"
#include "pdtab/dataio/csv.hpp"
#include "pdtab/dataio/eda.hpp"
#include "pdtab/dataio/split.hpp"
#include "pdtab/dataio/standardize.hpp"
#include "pdtab/errors.hpp"
#include "pdtab/harness/digest.hpp"
#include "pdtab/nnmodels/checkpoint.hpp"
#include "pdtab/random.hpp"

namespace pdtab::harness {

using nlohmann::ordered_json;

namespace {

template <typename F>
auto staged(const std::string& stage, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what(), std::current_exception());
  }
}

// Neural curves count epochs from 1; the boosting curve starts at stage 0 (F0 alone).
std::string loss_csv(const std::vector<double>& values, std::size_t first_index) {
  std::string out = "epoch,mean_loss\n";
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.8f\n", first_index + i, values[i]);
    out += buf;
  }
  return out;
}

std::string json_text(const ordered_json& j) { return j.dump(2) + "\n"; }

nn::ModelConfig neural_config(const ExperimentConfig& config, const std::string& name) {
  switch (nn::parse_model_kind(name)) {
    case nn::ModelKind::kMlp:
      return config.mlp;
    case nn::ModelKind::kAttentive:
      return config.attentive;
    case nn::ModelKind::kSaint:
      return config.saint;
  }
  throw ConfigError("unknown model '" + name + "'");
}

void add_report(RunArtifacts& artifacts, const metrics::EvaluationReport& report) {
  const std::string& m = report.model;
  artifacts.files["report_" + m + ".json"] = json_text(metrics::report_to_json(report));
  artifacts.files["roc_" + m + ".csv"] = metrics::roc_csv(report.roc);
  artifacts.files["confusion_" + m + ".csv"] = metrics::confusion_csv(report.confusion);
  artifacts.reports[m] = report;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

ordered_json RunArtifacts::manifest() const {
  ordered_json entries = ordered_json::array();
  for (const auto& [path, bytes] : files) {
    if (path == "manifest.json") continue;
    entries.push_back(ordered_json{{"path", path}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
  }
  return ordered_json{{"format", "pdtab.manifest"}, {"version", 1}, {"files", std::move(entries)}};
}

RunArtifacts build_experiment(const ExperimentConfig& config) {
  staged("config", [&] { config.validate(); });
  const auto schema = data::RecordSchema::uci_parkinsons();
  const data::Dataset full = staged("load", [&] { return data::load_csv(config.data_path, schema); });
  const data::Split split = staged("split", [&] {
    return data::stratified_split(full, {config.test_fraction, derive_seed(config.seed, "split"), true});
  });
  const auto stats = staged("standardize", [&] { return data::standardize_fit(split.train); });
  const data::Dataset train = data::standardize_apply(split.train, stats);
  const data::Dataset test = data::standardize_apply(split.test, stats);

  RunArtifacts artifacts;
  std::vector<metrics::EvaluationReport> reports;
  for (const auto& name : config.models) {
    std::vector<double> scores;
    staged("train." + name, [&] {
      if (name == "gbm") {
        const auto model = boost::gbm_fit(train, config.gbm);
        scores = boost::gbm_predict_proba(model, test.x);
        artifacts.files["loss_gbm.csv"] = loss_csv(model.stage_mse, 0);
        artifacts.files["checkpoint_gbm.json"] =
            json_text(boost::gbm_checkpoint_json(model, stats, full.feature_names));
        return;
      }
      nn::TrainConfig tc = config.train;
      tc.seed = config.seed;
      const auto trained = nn::train(neural_config(config, name), tc, train);
      scores = nn::predict_proba(trained, test.x);
      artifacts.files["loss_" + name + ".csv"] = loss_csv(trained.loss_curve, 1);
      artifacts.files["checkpoint_" + name + ".json"] =
          json_text(nn::checkpoint_json(trained, stats, full.feature_names));
    });
    staged("evaluate." + name, [&] {
      auto report = metrics::full_report(test.y, scores, 0.5, name);
      add_report(artifacts, report);
      reports.push_back(std::move(report));
    });
  }
  artifacts.files["comparison.csv"] = comparison_csv(compare_table(reports));
  return artifacts;
}

void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  staged("write", [&] {
    try {
      std::filesystem::create_directories(dir);
      for (const auto& [name, bytes] : artifacts.files) {
        if (name == "manifest.json") continue;
        written.push_back(dir / name);
        write_file(dir / name, bytes);
      }
      written.push_back(dir / "manifest.json");
      write_file(dir / "manifest.json", json_text(artifacts.manifest()));
    } catch (...) {
      std::error_code ec;
      for (const auto& p : written) std::filesystem::remove(p, ec);
      throw;
    }
  });
}

RunArtifacts run_experiment(const ExperimentConfig& config) {
  RunArtifacts artifacts = build_experiment(config);
  write_artifacts(artifacts, config.output_dir);
  artifacts.files["manifest.json"] = json_text(artifacts.manifest());
  return artifacts;
}

std::vector<ComparisonRow> compare_table(const std::vector<metrics::EvaluationReport>& reports) {
  std::vector<ComparisonRow> rows;
  rows.reserve(reports.size());
  for (const auto& r : reports) {
    rows.push_back({r.model, r.weighted_precision, r.weighted_recall, r.weighted_f1, r.mcc.value,
                    r.roc.auc});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    if (a.mcc != b.mcc) return a.mcc > b.mcc;
    if (a.auc != b.auc) return a.auc > b.auc;
    return a.model < b.model;
  });
  return rows;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "model,weighted_precision,weighted_recall,weighted_f1,mcc,auc\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.4f,%.4f,%.4f,%.4f,%.4f\n", r.model.c_str(),
                  metrics::round_to(r.weighted_precision, 4), metrics::round_to(r.weighted_recall, 4),
                  metrics::round_to(r.weighted_f1, 4), metrics::round_to(r.mcc, 4), metrics::round_to(r.auc, 4));
    out += buf;
  }
  return out;
}

std::map<std::string, std::string> eda_artifacts(const std::filesystem::path& data_path) {
  const auto full =
      staged("load", [&] { return data::load_csv(data_path, data::RecordSchema::uci_parkinsons()); });
  return staged("eda", [&] {
    std::map<std::string, std::string> files;
    files["correlation.csv"] = data::correlation_csv(data::pearson_correlation_matrix(full), full.feature_names);
    files["summary.csv"] = data::summary_csv(data::feature_summary(full));
    return files;
  });
}

void eda_command(const std::filesystem::path& data_path, const std::filesystem::path& output_dir) {
  RunArtifacts artifacts;
  artifacts.files = eda_artifacts(data_path);
  write_artifacts(artifacts, output_dir);
}

RunArtifacts evaluate_checkpoint(const std::filesystem::path& checkpoint, const std::filesystem::path& data_path,
                                 const std::filesystem::path& output_dir) {
  const ordered_json doc = staged("checkpoint", [&] {
    std::ifstream in(checkpoint);
    if (!in) throw CheckpointError("cannot open checkpoint " + checkpoint.string());
    try {
      return ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw CheckpointError(checkpoint.string() + ": " + e.what());
    }
  });
  const std::string kind = staged("checkpoint", [&] {
    if (!doc.is_object() || !doc.contains("kind") || !doc.at("kind").is_string())
      throw CheckpointError("checkpoint has no model kind");
    return doc.at("kind").get<std::string>();
  });

  std::function<std::vector<double>(const ad::Tensor&)> scorer;
  data::StandardizationStats stats;
  std::vector<std::string> names;
  staged("checkpoint", [&] {
    if (kind == "gbm") {
      auto loaded = boost::gbm_checkpoint_from_json(doc);
      stats = loaded.stats;
      names = loaded.feature_names;
      scorer = [model = std::move(loaded.model)](const ad::Tensor& x) { return boost::gbm_predict_proba(model, x); };
    } else {
      auto loaded = nn::neural_checkpoint_from_json(doc);
      stats = loaded.stats;
      names = loaded.feature_names;
      scorer = [model = std::move(loaded.model)](const ad::Tensor& x) { return nn::predict_proba(model, x); };
    }
  });

  data::RecordSchema schema = data::RecordSchema::uci_parkinsons();
  schema.feature_columns = names;
  const auto full = staged("load", [&] { return data::load_csv(data_path, schema); });
  const auto scaled = data::standardize_apply(full, stats);
  RunArtifacts artifacts;
  staged("evaluate." + kind, [&] { add_report(artifacts, metrics::full_report(scaled.y, scorer(scaled.x), 0.5, kind)); });
  write_artifacts(artifacts, output_dir);
  artifacts.files["manifest.json"] = json_text(artifacts.manifest());
  return artifacts;
}

}  // namespace pdtab::harness
