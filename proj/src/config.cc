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
#include "fedsched/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fedsched/errors.h"

namespace fedsched {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t ParseU64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError(std::string(key),
                      "expected a non-negative integer, got '" +
                          std::string(v) + "'");
  }
  return out;
}

std::size_t ParseSize(std::string_view key, std::string_view v) {
  return static_cast<std::size_t>(ParseU64(key, v));
}

double ParseReal(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() ||
      !std::isfinite(out)) {
    throw ConfigError(std::string(key),
                      "expected a finite number, got '" + std::string(v) + "'");
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(std::string(key),
                    "expected true/false, got '" + std::string(v) + "'");
}

std::vector<std::size_t> ParseSizeList(std::string_view key,
                                       std::string_view v) {
  std::vector<std::size_t> out;
  while (!v.empty()) {
    const std::size_t comma = v.find(',');
    out.push_back(ParseSize(key, Trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

std::string JoinSizes(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

struct Field {
  std::string_view name;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define FS_SIZE_FIELD(member)                                               \
  Field {                                                                   \
    #member,                                                                \
        [](ExperimentConfig& c, std::string_view v) {                       \
          c.member = ParseSize(#member, v);                                 \
        },                                                                  \
        [](const ExperimentConfig& c) { return std::to_string(c.member); } \
  }
#define FS_REAL_FIELD(member)                                               \
  Field {                                                                   \
    #member,                                                                \
        [](ExperimentConfig& c, std::string_view v) {                       \
          c.member = ParseReal(#member, v);                                 \
        },                                                                  \
        [](const ExperimentConfig& c) { return FormatDouble(c.member); }    \
  }
#define FS_STRING_FIELD(member)                                             \
  Field {                                                                   \
    #member,                                                                \
        [](ExperimentConfig& c, std::string_view v) {                       \
          c.member = std::string(v);                                        \
        },                                                                  \
        [](const ExperimentConfig& c) { return c.member; }                  \
  }

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      {"mode",
       [](ExperimentConfig& c, std::string_view v) {
         auto m = ParseMode(v);
         if (!m) throw ConfigError("mode", "expected simulate|bound|sweep");
         c.mode = *m;
       },
       [](const ExperimentConfig& c) { return std::string(ModeName(c.mode)); }},
      {"seed",
       [](ExperimentConfig& c, std::string_view v) {
         c.seed = ParseU64("seed", v);
       },
       [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      FS_STRING_FIELD(out),
      FS_SIZE_FIELD(jobs),
      FS_SIZE_FIELD(replicas),
      FS_SIZE_FIELD(M),
      FS_SIZE_FIELD(K),
      FS_SIZE_FIELD(Kc),
      FS_REAL_FIELD(n_slots),
      FS_REAL_FIELD(pbar),
      FS_REAL_FIELD(noise_var),
      {"policy",
       [](ExperimentConfig& c, std::string_view v) {
         auto p = ParsePolicy(v);
         if (!p) {
           throw ConfigError("policy", "expected bc|bn2|bc-bn2|bn2-c|random");
         }
         c.policy = *p;
       },
       [](const ExperimentConfig& c) {
         return std::string(PolicyName(c.policy));
       }},
      FS_SIZE_FIELD(tau),
      FS_SIZE_FIELD(batch),
      FS_SIZE_FIELD(T),
      {"lr",
       [](ExperimentConfig& c, std::string_view v) {
         try {
           c.lr = LrSchedule::Parse(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError("lr", e.what());
         }
       },
       [](const ExperimentConfig& c) { return c.lr.ToString(); }},
      {"optimizer",
       [](ExperimentConfig& c, std::string_view v) {
         auto o = ParseOptimizer(v);
         if (!o) throw ConfigError("optimizer", "expected sgd|adam|adagrad");
         c.optimizer = *o;
       },
       [](const ExperimentConfig& c) {
         return std::string(OptimizerName(c.optimizer));
       }},
      FS_STRING_FIELD(model),
      FS_SIZE_FIELD(hidden),
      {"bias",
       [](ExperimentConfig& c, std::string_view v) {
         c.bias = ParseBool("bias", v);
       },
       [](const ExperimentConfig& c) {
         return std::string(c.bias ? "true" : "false");
       }},
      FS_STRING_FIELD(dataset),
      FS_STRING_FIELD(test_dataset),
      FS_SIZE_FIELD(classes),
      FS_SIZE_FIELD(features),
      FS_SIZE_FIELD(train_samples),
      FS_SIZE_FIELD(test_samples),
      FS_REAL_FIELD(separation),
      FS_REAL_FIELD(noise),
      {"partition",
       [](ExperimentConfig& c, std::string_view v) {
         if (v == "iid") {
           c.partition = PartitionKind::kIid;
         } else if (v == "noniid") {
           c.partition = PartitionKind::kNonIid;
         } else {
           throw ConfigError("partition", "expected iid|noniid");
         }
       },
       [](const ExperimentConfig& c) {
         return std::string(c.partition == PartitionKind::kIid ? "iid"
                                                               : "noniid");
       }},
      FS_SIZE_FIELD(B),
      {"compress",
       [](ExperimentConfig& c, std::string_view v) {
         c.compress = ParseBool("compress", v);
       },
       [](const ExperimentConfig& c) {
         return std::string(c.compress ? "true" : "false");
       }},
      FS_REAL_FIELD(mu),
      FS_REAL_FIELD(L),
      FS_REAL_FIELD(G),
      FS_REAL_FIELD(Gamma),
      FS_REAL_FIELD(init_dist_sq),
      FS_SIZE_FIELD(d),
      {"rho",
       [](ExperimentConfig& c, std::string_view v) {
         if (v == "sampled") {
           c.fixed_rho.reset();
         } else if (v.starts_with("fixed:")) {
           c.fixed_rho = ParseReal("rho", v.substr(6));
         } else {
           throw ConfigError("rho", "expected sampled|fixed:<value>");
         }
       },
       [](const ExperimentConfig& c) {
         return c.fixed_rho ? "fixed:" + FormatDouble(*c.fixed_rho)
                            : std::string("sampled");
       }},
      {"sweep_axis",
       [](ExperimentConfig& c, std::string_view v) {
         if (v == "K") {
           c.sweep_axis = SweepAxis::kK;
         } else if (v == "tau") {
           c.sweep_axis = SweepAxis::kTau;
         } else {
           throw ConfigError("sweep_axis", "expected K|tau");
         }
       },
       [](const ExperimentConfig& c) {
         return std::string(SweepAxisName(c.sweep_axis));
       }},
      {"sweep_values",
       [](ExperimentConfig& c, std::string_view v) {
         c.sweep_values = ParseSizeList("sweep_values", v);
       },
       [](const ExperimentConfig& c) { return JoinSizes(c.sweep_values); }},
  };
  return fields;
}

#undef FS_SIZE_FIELD
#undef FS_REAL_FIELD
#undef FS_STRING_FIELD

void Require(bool ok, const char* key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

void ValidateDataSource(const char* key, const std::string& spec) {
  if (spec == "synthetic") return;
  if (spec.starts_with("fixture:") && spec.size() > 8) return;
  if (spec.starts_with("idx:") && spec.find(',') != std::string::npos) return;
  throw ConfigError(key, "expected synthetic | fixture:PATH | idx:IMAGES,LABELS");
}

// Step-size hypothesis of the bound for one (tau, K) combination.
void ValidateBound(const BoundParams& p) {
  try {
    p.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("lr", e.what());
  }
}

}  // namespace

std::string_view ModeName(Mode mode) {
  switch (mode) {
    case Mode::kSimulate:
      return "simulate";
    case Mode::kBound:
      return "bound";
    case Mode::kSweep:
      return "sweep";
  }
  return "unknown";
}

std::optional<Mode> ParseMode(std::string_view name) {
  for (Mode m : {Mode::kSimulate, Mode::kBound, Mode::kSweep}) {
    if (ModeName(m) == name) return m;
  }
  return std::nullopt;
}

TrainConfig ExperimentConfig::ToTrainConfig() const {
  TrainConfig t;
  t.tau = tau;
  t.batch = batch;
  t.lr = lr;
  t.optimizer = optimizer;
  t.num_devices = M;
  t.k = K;
  t.kc = EffectiveKc();
  t.policy = policy;
  t.rounds = T;
  t.seed = seed;
  t.jobs = jobs;
  return t;
}

ChannelParams ExperimentConfig::ToChannelParams() const {
  return {n_slots, pbar, noise_var};
}

BoundParams ExperimentConfig::ToBoundParams() const {
  BoundParams p;
  p.mu = mu;
  p.L = L;
  p.tau = tau;
  p.G = G;
  p.Gamma = Gamma;
  p.M = M;
  p.K = K;
  p.T = T;
  p.lr = lr;
  p.init_dist_sq = init_dist_sq;
  return p;
}

SweepSpec ExperimentConfig::ToSweepSpec() const {
  SweepSpec s;
  s.base = ToBoundParams();
  s.channel = {d, M, K, n_slots, pbar, noise_var};
  s.replicas = replicas;
  s.seed = seed;
  s.jobs = jobs;
  s.fixed_rho = fixed_rho;
  if (mode == Mode::kSweep) {
    s.axis = sweep_axis;
    s.values = sweep_values;
  } else {
    s.axis = SweepAxis::kK;
    s.values = {K};
  }
  return s;
}

void ExperimentConfig::Validate() const {
  Require(jobs >= 1, "jobs", "must be >= 1");
  Require(replicas >= 1, "replicas", "must be >= 1");
  Require(M >= 1, "M", "must be >= 1");
  Require(K >= 1, "K", "must be >= 1");
  Require(K <= M, "K", "must be <= M (" + std::to_string(M) + ")");
  Require(pbar > 0.0, "pbar", "must be > 0");
  Require(noise_var > 0.0, "noise_var", "must be > 0");
  Require(tau >= 1, "tau", "must be >= 1");
  Require(T >= 1, "T", "must be >= 1");
  Require(!out.empty(), "out", "must not be empty");

  if (mode == Mode::kSimulate) {
    Require(n_slots > 0.0, "n_slots", "must be > 0");
    if (policy == Policy::kBcBn2) {
      Require(EffectiveKc() >= K && EffectiveKc() <= M, "Kc",
              "must satisfy K <= Kc <= M");
    }
    Require(!lr.DependsOnMu(), "lr",
            "training schedules must be const:v or inv:c,t0");
    Require(lr.At(0) >= 0.0, "lr", "must be >= 0");
    Require(model == "logistic" || model == "mlp", "model",
            "expected logistic|mlp");
    Require(model != "mlp" || hidden >= 1, "hidden", "must be >= 1");
    Require(B >= 1, "B", "must be >= 1");
    Require(partition == PartitionKind::kIid || B % 2 == 0, "B",
            "must be even for a noniid partition");
    ValidateDataSource("dataset", dataset);
    ValidateDataSource("test_dataset", test_dataset);
    if (dataset == "synthetic") {
      Require(classes >= 2, "classes", "must be >= 2");
      Require(features >= 1, "features", "must be >= 1");
      Require(train_samples >= 1, "train_samples", "must be >= 1");
    }
    if (test_dataset == "synthetic") {
      Require(test_samples >= 1, "test_samples", "must be >= 1");
    }
    return;
  }

  Require(n_slots >= 0.0, "n_slots", "must be >= 0");
  Require(mu > 0.0, "mu", "must be > 0");
  Require(L >= mu, "L", "must be >= mu");
  Require(G >= 0.0, "G", "must be >= 0");
  Require(Gamma >= 0.0, "Gamma", "must be >= 0");
  Require(init_dist_sq >= 0.0, "init_dist_sq", "must be >= 0");
  Require(d >= 1, "d", "must be >= 1");
  if (fixed_rho) {
    Require(*fixed_rho >= 0.0 && *fixed_rho <= 1.0, "rho",
            "fixed value must lie in [0, 1]");
  }

  if (mode == Mode::kBound) {
    ValidateBound(ToBoundParams());
    return;
  }
  Require(!sweep_values.empty(), "sweep_values", "must list at least one value");
  for (std::size_t v : sweep_values) {
    BoundParams p = ToBoundParams();
    if (sweep_axis == SweepAxis::kK) {
      Require(v >= 1 && v <= M, "sweep_values",
              "K values must lie in [1, M]");
      p.K = v;
    } else {
      Require(v >= 1, "sweep_values", "tau values must be >= 1");
      p.tau = v;
    }
    ValidateBound(p);
  }
}

void ApplySetting(ExperimentConfig& cfg, std::string_view key,
                  std::string_view value) {
  for (const Field& f : Fields()) {
    if (f.name == key) {
      f.set(cfg, Trim(value));
      return;
    }
  }
  throw ConfigError(std::string(key), "unknown key");
}

ExperimentConfig ParseConfigText(std::string_view text,
                                 ExperimentConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) +
                                ": expected 'key = value'");
    }
    ApplySetting(base, Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
  }
  return base;
}

ExperimentConfig LoadConfigFile(const std::string& path,
                                ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfigText(buf.str(), std::move(base));
}

ExperimentConfig FinalizeConfig(
    ExperimentConfig cfg,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  for (const auto& [key, value] : overrides) ApplySetting(cfg, key, value);
  cfg.Validate();
  return cfg;
}

std::string EmitConfig(const ExperimentConfig& cfg) {
  std::string out;
  for (const Field& f : Fields()) {
    out += f.name;
    out += " = ";
    out += f.get(cfg);
    out += '\n';
  }
  return out;
}

}  // namespace fedsched
