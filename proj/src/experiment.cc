// Copyright 2026 The fedsched Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================
#include "fedsched/experiment.h"

#include <fstream>
#include <sstream>

#include "fedsched/errors.h"
#include "fedsched/rng.h"

namespace fedsched {
namespace {

Dataset LoadSource(const std::string& spec) {
  if (spec.starts_with("fixture:")) return LoadFixture(spec.substr(8));
  if (spec.starts_with("idx:")) {
    const std::string rest = spec.substr(4);
    const std::size_t comma = rest.find(',');
    return LoadIdx(rest.substr(0, comma), rest.substr(comma + 1));
  }
  throw ConfigError("dataset", "unsupported source '" + spec + "'");
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void WriteSimulateCsv(std::span<const SimulationRow> rows, std::ostream& out) {
  out << kSimulateCsvHeader << '\n';
  for (const SimulationRow& row : rows) {
    const RoundMetrics& m = row.metrics;
    out << (m.round + 1) << ',' << PolicyName(m.policy) << ',' << m.k << ',';
    for (std::size_t i = 0; i < m.selected.size(); ++i) {
      if (i) out << ';';
      out << m.selected[i];
    }
    out << ',' << FormatDouble(row.eval.accuracy) << ','
        << FormatDouble(row.eval.mean_loss) << ',' << FormatDouble(m.MeanQ())
        << ',' << FormatDouble(m.MeanBits()) << '\n';
  }
}

void WriteBoundCsv(std::span<const SweepSeries> series, std::ostream& out) {
  out << kBoundCsvHeader << '\n';
  for (const SweepSeries& s : series) {
    for (std::size_t t = 0; t < s.dist_mean.size(); ++t) {
      out << s.label << ',' << t << ',';
      if (t < s.rho_mean.size()) out << FormatDouble(s.rho_mean[t]);
      out << ',' << FormatDouble(s.dist_mean[t]) << ','
          << FormatDouble(s.gap_mean[t]) << '\n';
    }
  }
}

TrainingData PrepareData(const ExperimentConfig& cfg) {
  TrainingData data;
  Rng class_rng = MakeRng(cfg.seed, Stream::kDataset, {0});
  if (cfg.dataset == "synthetic" || cfg.test_dataset == "synthetic") {
    BlobSpec spec;
    spec.num_features = cfg.features;
    spec.num_classes = cfg.classes;
    spec.separation = cfg.separation;
    spec.noise = cfg.noise;
    if (cfg.dataset == "synthetic") {
      Rng class_copy = class_rng;
      Rng sample_rng = MakeRng(cfg.seed, Stream::kDataset, {1});
      spec.num_samples = cfg.train_samples;
      data.train = MakeGaussianBlobs(spec, class_copy, sample_rng);
    }
    if (cfg.test_dataset == "synthetic") {
      Rng class_copy = class_rng;
      Rng sample_rng = MakeRng(cfg.seed, Stream::kDataset, {2});
      spec.num_samples = cfg.test_samples;
      data.test = MakeGaussianBlobs(spec, class_copy, sample_rng);
    }
  }
  if (cfg.dataset != "synthetic") data.train = LoadSource(cfg.dataset);
  if (cfg.test_dataset != "synthetic") data.test = LoadSource(cfg.test_dataset);
  if (data.train.num_features != data.test.num_features) {
    throw ConfigError("test_dataset",
                      "feature count differs from the training set");
  }
  data.test.num_classes = data.train.num_classes =
      std::max(data.train.num_classes, data.test.num_classes);

  Rng part_rng = MakeRng(cfg.seed, Stream::kPartition);
  try {
    data.partitions =
        cfg.partition == PartitionKind::kIid
            ? PartitionIid(data.train, cfg.M, cfg.B, part_rng)
            : PartitionNonIid(data.train, cfg.M, cfg.B, part_rng);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("partition", e.what());
  }
  return data;
}

std::unique_ptr<LossModel> MakeModel(const ExperimentConfig& cfg,
                                     const Dataset& train) {
  if (cfg.model == "mlp") {
    return std::make_unique<MlpClassifier>(train.num_features, cfg.hidden,
                                           train.num_classes);
  }
  return std::make_unique<SoftmaxRegression>(train.num_features,
                                             train.num_classes, cfg.bias);
}

std::string RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  std::ostringstream csv;
  std::ostringstream summary;
  if (cfg.mode == Mode::kSimulate) {
    const TrainingData data = PrepareData(cfg);
    const std::unique_ptr<LossModel> model = MakeModel(cfg, data.train);
    RoundOptions options;
    options.compress = cfg.compress;
    const std::vector<SimulationRow> rows =
        Simulate(data.partitions, data.test, cfg.ToTrainConfig(),
                 cfg.ToChannelParams(), *model, options);
    WriteSimulateCsv(rows, csv);
    const SimulationRow& last = rows.back();
    summary << "simulate policy=" << PolicyName(cfg.policy) << " K=" << cfg.K
            << " d=" << model->dim() << " rounds=" << rows.size()
            << " final_test_accuracy=" << FormatDouble(last.eval.accuracy)
            << " final_mean_loss=" << FormatDouble(last.eval.mean_loss);
  } else {
    const std::vector<SweepSeries> series = Sweep(cfg.ToSweepSpec());
    WriteBoundCsv(series, csv);
    summary << ModeName(cfg.mode) << " T=" << cfg.T;
    for (const SweepSeries& s : series) {
      summary << ' ' << s.label << ":final_loss_gap=" << FormatDouble(s.FinalGap());
    }
  }
  WriteFile(cfg.out, csv.str());
  return summary.str();
}

}  // namespace fedsched
