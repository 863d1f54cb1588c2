// Copyright 2026 The pdfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pdfl/config.h"

#include <cmath>
#include <cstdlib>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "canonical_json.h"
#include "pdfl/privacy.h"

namespace pdfl {
using nlohmann::json;

namespace {

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Typed access to one JSON object with dotted-path error reporting.
class Section {
 public:
  Section(const json& obj, std::string path, std::set<std::string> allowed)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw SchemaError(path_, "expected an object");
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!allowed.count(it.key())) {
        throw SchemaError(Join(path_, it.key()), "unknown field");
      }
    }
  }

  bool Has(const std::string& key) const { return obj_.contains(key); }

  template <typename T>
  T Get(const std::string& key, T fallback) const {
    if (!obj_.contains(key)) return fallback;
    return Required<T>(key);
  }

  template <typename T>
  T Required(const std::string& key) const {
    if (!obj_.contains(key)) throw SchemaError(Join(path_, key), "required field");
    const json& v = obj_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw SchemaError(Join(path_, key), "expected a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw SchemaError(Join(path_, key), "expected a string");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw SchemaError(Join(path_, key), "expected a number");
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_integer() || v.get<long long>() < 0) {
        if (!v.is_number_unsigned()) {
          throw SchemaError(Join(path_, key), "expected a non-negative integer");
        }
      }
    } else {
      if (!v.is_number_integer()) {
        throw SchemaError(Join(path_, key), "expected an integer");
      }
    }
    return v.get<T>();
  }

  Section Child(const std::string& key, std::set<std::string> allowed) const {
    static const json kEmpty = json::object();
    return Section(obj_.contains(key) ? obj_.at(key) : kEmpty, Join(path_, key),
                   std::move(allowed));
  }

  const std::string& path() const { return path_; }

 private:
  const json& obj_;
  std::string path_;
};

template <typename Fn>
auto ParseEnum(const Section& s, const std::string& key, const std::string& fallback,
               Fn parse) {
  const std::string value = s.Get<std::string>(key, fallback);
  try {
    return parse(value);
  } catch (const ConfigError& e) {
    throw SchemaError(Join(s.path(), key), e.what());
  }
}

void Require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw SchemaError(path, message);
}

void Validate(const ExperimentConfig& c) {
  const auto& d = c.dataset;
  const auto& r = c.run;
  if (d.source == DataSource::kSynthetic) {
    Require(d.num_classes >= 2, "dataset.num_classes", "must be >= 2");
    Require(d.input_dim >= 1, "dataset.input_dim", "must be >= 1");
    Require(d.n >= static_cast<std::size_t>(d.num_classes), "dataset.n",
            "must be >= dataset.num_classes");
    Require(d.class_separation >= 0.0, "dataset.class_separation", "must be >= 0");
    Require(d.noise_stddev >= 0.0, "dataset.noise_stddev", "must be >= 0");
  } else {
    Require(!d.images.empty(), "dataset.images", "required for idx datasets");
    Require(!d.labels.empty(), "dataset.labels", "required for idx datasets");
  }
  Require(d.holdout_fraction >= 0.0 && d.holdout_fraction < 1.0,
          "dataset.holdout_fraction", "must lie in [0, 1)");

  Require(r.num_clients >= 1, "run.num_clients", "must be >= 1");
  Require(r.rounds >= 1, "run.rounds", "must be >= 1");
  Require(r.k >= 1, "run.k", "must be >= 1");
  Require(r.x >= 1, "run.x", "must be >= 1");
  Require(r.x <= r.k, "run.x",
          "x <= k required (x=" + std::to_string(r.x) + ", k=" +
              std::to_string(r.k) + ")");
  Require(r.k <= r.num_clients, "run.k",
          "k <= num_clients required (k=" + std::to_string(r.k) +
              ", num_clients=" + std::to_string(r.num_clients) + ")");
  Require(r.delta > 0.0 && std::isfinite(r.delta), "run.delta", "must be positive");
  Require(r.train.local_epochs >= 1, "train.local_epochs", "must be >= 1");
  Require(r.train.learning_rate > 0.0, "train.learning_rate", "must be positive");
  Require(r.train.batch_size >= 1, "train.batch_size", "must be >= 1");

  if (c.partition_mode == PartitionMode::kLabelSkew) {
    Require(c.classes_per_client >= 1, "partition.classes_per_client",
            "must be >= 1");
    if (d.source == DataSource::kSynthetic) {
      Require(c.classes_per_client <= d.num_classes,
              "partition.classes_per_client", "must be <= dataset.num_classes");
    }
  }
  if (c.model_kind == ModelKind::kMlpOneHidden) {
    Require(c.hidden_dim >= 1, "model.hidden_dim", "must be >= 1 for mlp-one-hidden");
  } else {
    Require(c.hidden_dim == 0, "model.hidden_dim",
            "must be 0 for logistic-regression");
  }
  Require(c.unlearn_probability >= 0.0 && c.unlearn_probability <= 1.0,
          "unlearning.probability", "must lie in [0, 1]");

  const auto& p = c.privacy;
  const bool has_sigma = p.sigma.has_value();
  const bool has_target = p.epsilon.has_value() || p.delta.has_value();
  Require(has_sigma != has_target, "privacy",
          "supply exactly one of sigma or (epsilon, delta)");
  if (has_sigma) {
    Require(*p.sigma >= 0.0 && std::isfinite(*p.sigma), "privacy.sigma",
            "must be >= 0");
  } else {
    Require(p.epsilon.has_value(), "privacy.epsilon", "required with privacy.delta");
    Require(p.delta.has_value(), "privacy.delta", "required with privacy.epsilon");
    Require(*p.delta > 0.0 && *p.delta < 1.0, "privacy.delta", "must lie in (0, 1)");
    try {
      CalibrateSigma(*p.epsilon, *p.delta, r.rounds);
    } catch (const CalibrationError& e) {
      throw SchemaError("privacy.epsilon", e.what());
    }
  }
}

}  // namespace

SchemaError::SchemaError(std::string field_path, const std::string& message)
    : ConfigError(field_path + ": " + message),
      field_path_(std::move(field_path)),
      detail_(message) {}

ExperimentConfig ParseConfig(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError("", std::string("not valid JSON: ") + e.what());
  }
  Section root(doc, "",
               {"schema_version", "name", "dataset", "partition", "model", "run",
                "train", "unlearning", "privacy", "output"});
  ExperimentConfig c;
  c.schema_version = root.Required<int>("schema_version");
  if (c.schema_version != kConfigSchemaVersion) {
    throw SchemaError("schema_version",
                      "unsupported version " + std::to_string(c.schema_version) +
                          ", expected " + std::to_string(kConfigSchemaVersion));
  }
  c.name = root.Get<std::string>("name", c.name);

  Section ds = root.Child("dataset", {"source", "n", "input_dim", "num_classes",
                                      "seed", "class_separation", "noise_stddev",
                                      "images", "labels", "subset",
                                      "holdout_fraction"});
  auto& d = c.dataset;
  d.source = ParseEnum(ds, "source", "synthetic", [](const std::string& s) {
    if (s == "synthetic") return DataSource::kSynthetic;
    if (s == "idx") return DataSource::kIdx;
    throw ConfigError("expected 'synthetic' or 'idx', got '" + s + "'");
  });
  d.n = ds.Get<std::size_t>("n", d.n);
  d.input_dim = ds.Get<std::size_t>("input_dim", d.input_dim);
  d.num_classes = ds.Get<int>("num_classes", d.num_classes);
  d.seed = ds.Get<std::uint64_t>("seed", d.seed);
  d.class_separation = ds.Get<double>("class_separation", d.class_separation);
  d.noise_stddev = ds.Get<double>("noise_stddev", d.noise_stddev);
  d.images = ds.Get<std::string>("images", d.images);
  d.labels = ds.Get<std::string>("labels", d.labels);
  d.subset = ds.Get<std::size_t>("subset", d.subset);
  d.holdout_fraction = ds.Get<double>("holdout_fraction", d.holdout_fraction);

  Section part = root.Child("partition", {"mode", "classes_per_client", "seed"});
  c.partition_mode = ParseEnum(part, "mode", "iid", [](const std::string& s) {
    if (s == "iid") return PartitionMode::kIid;
    if (s == "label-skew") return PartitionMode::kLabelSkew;
    throw ConfigError("expected 'iid' or 'label-skew', got '" + s + "'");
  });
  c.classes_per_client = part.Get<int>("classes_per_client", c.classes_per_client);
  c.partition_seed = part.Get<std::uint64_t>("seed", c.partition_seed);

  Section model = root.Child("model", {"kind", "hidden_dim"});
  c.model_kind = ParseEnum(model, "kind", "logistic-regression",
                           [](const std::string& s) { return ParseModelKind(s); });
  c.hidden_dim = model.Get<std::size_t>("hidden_dim", c.hidden_dim);

  Section run = root.Child("run", {"num_clients", "rounds", "k", "x", "delta",
                                   "metric", "algorithm", "storage_mode",
                                   "noise_convention", "master_seed"});
  auto& r = c.run;
  r.num_clients = run.Get<int>("num_clients", r.num_clients);
  r.rounds = run.Get<int>("rounds", r.rounds);
  r.k = run.Get<int>("k", r.k);
  r.x = run.Get<int>("x", r.x);
  r.delta = run.Get<double>("delta", r.delta);
  r.metric = ParseEnum(run, "metric", "cosine",
                       [](const std::string& s) { return ParseMetric(s); });
  r.algorithm = ParseEnum(run, "algorithm", "k-ipfedavg",
                          [](const std::string& s) { return ParseAlgorithm(s); });
  r.storage_mode = ParseEnum(run, "storage_mode", "index-only",
                             [](const std::string& s) { return ParseStorageMode(s); });
  r.noise_convention =
      ParseEnum(run, "noise_convention", "algorithm1",
                [](const std::string& s) { return ParseNoiseConvention(s); });
  r.master_seed = run.Get<std::uint64_t>("master_seed", r.master_seed);

  Section train = root.Child("train", {"local_epochs", "learning_rate", "batch_size"});
  r.train.local_epochs = train.Get<int>("local_epochs", r.train.local_epochs);
  r.train.learning_rate = train.Get<double>("learning_rate", r.train.learning_rate);
  r.train.batch_size = train.Get<std::size_t>("batch_size", r.train.batch_size);

  Section unlearn = root.Child("unlearning", {"probability", "seed"});
  c.unlearn_probability = unlearn.Get<double>("probability", c.unlearn_probability);
  c.unlearn_seed = unlearn.Get<std::uint64_t>("seed", c.unlearn_seed);

  Section privacy = root.Child("privacy", {"sigma", "epsilon", "delta"});
  if (privacy.Has("sigma")) c.privacy.sigma = privacy.Required<double>("sigma");
  if (privacy.Has("epsilon")) c.privacy.epsilon = privacy.Required<double>("epsilon");
  if (privacy.Has("delta")) c.privacy.delta = privacy.Required<double>("delta");

  Section output = root.Child("output", {"dir", "record_wall_clock"});
  c.output_dir = output.Get<std::string>("dir", c.output_dir);
  c.record_wall_clock = output.Get<bool>("record_wall_clock", c.record_wall_clock);

  Validate(c);
  r.sigma = ResolveSigma(c);
  return c;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  return ParseConfig(internal::ReadTextFile(path));
}

std::string SerializeConfig(const ExperimentConfig& c) {
  const auto& d = c.dataset;
  const auto& r = c.run;
  json dataset = {{"source", d.source == DataSource::kSynthetic ? "synthetic" : "idx"},
                  {"n", d.n},
                  {"input_dim", d.input_dim},
                  {"num_classes", d.num_classes},
                  {"seed", d.seed},
                  {"class_separation", d.class_separation},
                  {"noise_stddev", d.noise_stddev},
                  {"images", d.images},
                  {"labels", d.labels},
                  {"subset", d.subset},
                  {"holdout_fraction", d.holdout_fraction}};
  json privacy = json::object();
  if (c.privacy.sigma) privacy["sigma"] = *c.privacy.sigma;
  if (c.privacy.epsilon) privacy["epsilon"] = *c.privacy.epsilon;
  if (c.privacy.delta) privacy["delta"] = *c.privacy.delta;
  json doc = {
      {"schema_version", c.schema_version},
      {"name", c.name},
      {"dataset", dataset},
      {"partition",
       {{"mode", c.partition_mode == PartitionMode::kIid ? "iid" : "label-skew"},
        {"classes_per_client", c.classes_per_client},
        {"seed", c.partition_seed}}},
      {"model", {{"kind", ModelKindName(c.model_kind)}, {"hidden_dim", c.hidden_dim}}},
      {"run",
       {{"num_clients", r.num_clients},
        {"rounds", r.rounds},
        {"k", r.k},
        {"x", r.x},
        {"delta", r.delta},
        {"metric", MetricName(r.metric)},
        {"algorithm", AlgorithmName(r.algorithm)},
        {"storage_mode", StorageModeName(r.storage_mode)},
        {"noise_convention", NoiseConventionName(r.noise_convention)},
        {"master_seed", r.master_seed}}},
      {"train",
       {{"local_epochs", r.train.local_epochs},
        {"learning_rate", r.train.learning_rate},
        {"batch_size", r.train.batch_size}}},
      {"unlearning", {{"probability", c.unlearn_probability}, {"seed", c.unlearn_seed}}},
      {"privacy", privacy},
      {"output", {{"dir", c.output_dir}, {"record_wall_clock", c.record_wall_clock}}}};
  return doc.dump(2) + "\n";
}

double ResolveSigma(const ExperimentConfig& config) {
  if (config.privacy.sigma) return *config.privacy.sigma;
  return CalibrateSigma(config.privacy.epsilon.value_or(0.0),
                        config.privacy.delta.value_or(0.0), config.run.rounds);
}

std::filesystem::path ResolveOutputDir(const ExperimentConfig& config) {
  std::filesystem::path out(config.output_dir);
  if (out.is_relative()) {
    if (const char* root = std::getenv(kOutputRootEnv); root && *root) {
      return std::filesystem::path(root) / out;
    }
  }
  return out;
}

}  // namespace pdfl
