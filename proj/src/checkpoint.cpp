// Copyright 2026 The realite Authors.
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

#include "realite/checkpoint.hpp"

#include <sstream>

#include "io_util.hpp"
#include "realite/aggregation.hpp"
#include "realite/config.hpp"

namespace realite {

namespace fs = std::filesystem;

void save_tensor(const Tensor& t, const fs::path& file) {
  std::string out;
  for (std::size_t i = 0; i < t.shape.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(t.shape[i]);
  }
  out += '\n';
  const std::size_t cols = t.shape.empty() ? 1 : t.size() / std::max<std::size_t>(1, t.rows());
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += io::format_double(t.data[i]);
    out += (cols == 0 || (i + 1) % cols == 0) ? '\n' : ' ';
  }
  io::write_file(file, out);
}

Tensor load_tensor(const fs::path& file) {
  std::istringstream in(io::read_file(file));
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::vector<std::size_t> shape;
  std::size_t d;
  while (hs >> d) shape.push_back(d);
  Tensor t(shape);
  std::string tok;
  for (std::size_t i = 0; i < t.size(); ++i) {
    bool ok = false;
    if (in >> tok) t.data[i] = io::parse_double(tok, &ok);
    if (!ok) throw ValidationError(file.string() + ": malformed tensor data");
  }
  if (in >> tok) throw ValidationError(file.string() + ": trailing tensor data");
  return t;
}

fs::path staging_path(const fs::path& dir) {
  fs::path clean = dir;
  if (!clean.has_filename()) clean = clean.parent_path();
  return clean.parent_path() / (clean.filename().string() + ".partial");
}

void commit_directory(const fs::path& staging, const fs::path& dir) {
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::rename(staging, dir, ec);
  if (ec) throw IoError("cannot move " + staging.string() + " to " + dir.string() + ": " +
                        ec.message());
}

namespace {

void save_params(const ModelParams& p, const fs::path& dir) {
  fs::create_directories(dir);
  p.for_each([&dir](const std::string& name, const Tensor& t) { save_tensor(t, dir / (name + ".txt")); });
}

void load_params(ModelParams* p, const fs::path& dir) {
  p->for_each([&dir](const std::string& name, Tensor& t) {
    const fs::path file = dir / (name + ".txt");
    if (!fs::exists(file)) throw ValidationError("checkpoint is missing tensor " + name);
    Tensor loaded = load_tensor(file);
    if (loaded.shape != t.shape) {
      throw ShapeError("checkpoint tensor " + name + " has shape " + shape_string(loaded.shape) +
                       ", model expects " + shape_string(t.shape));
    }
    t = std::move(loaded);
  });
}

}  // namespace

void save_checkpoint(const fs::path& dir, const Model& model, const Optimizer& optimizer,
                     const TrainConfig& train_config, const TrainResult& trace,
                     const nlohmann::json& run_config) {
  const fs::path tmp = staging_path(dir);
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  nlohmann::json meta = {{"format", "realite-checkpoint"},
                         {"version", kCheckpointVersion},
                         {"num_entities", model.num_entities()},
                         {"num_relations", model.num_relations()},
                         {"num_attributes", model.num_attributes()},
                         {"param_count", model.param_count()},
                         {"base_param_count", model.base_param_count()},
                         {"optimizer",
                          {{"kind", std::string(to_string(optimizer.kind()))},
                           {"learning_rate", optimizer.learning_rate()},
                           {"steps", optimizer.steps()}}}};
  io::write_file(tmp / "meta.json", meta.dump(2) + "\n");
  io::write_file(tmp / "config.json", run_config.dump(2) + "\n");
  io::write_file(tmp / "model.json", to_json(model.config()).dump(2) + "\n");
  io::write_file(tmp / "train.json", to_json(train_config).dump(2) + "\n");
  save_params(model.params(), tmp / "params");
  if (optimizer.kind() == OptimizerKind::kAdam) {
    save_params(optimizer.first_moment(), tmp / "optimizer" / "m");
    save_params(optimizer.second_moment(), tmp / "optimizer" / "v");
  }
  save_profiles(model.profiles(), model.num_attributes(), tmp / "profiles.tsv");

  std::string loss;
  for (std::size_t i = 0; i < trace.epoch_losses.size(); ++i) {
    loss += std::to_string(i + 1) + '\t' + io::format_double(trace.epoch_losses[i]) + '\n';
  }
  io::write_file(tmp / "loss_trace.tsv", loss);
  std::string valid;
  for (const auto& v : trace.validation) {
    valid += std::to_string(v.epoch) + '\t' + io::format_double(v.mrr) + '\n';
  }
  io::write_file(tmp / "validation.tsv", valid);
  commit_directory(tmp, dir);
}

LoadedCheckpoint load_checkpoint(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ValidationError("checkpoint directory not found: " + dir.string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(io::read_file(dir / "meta.json"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid checkpoint meta.json: " + std::string(e.what()));
  }
  if (meta.value("format", "") != "realite-checkpoint") {
    throw ValidationError("not a checkpoint directory: " + dir.string());
  }
  if (meta.value("version", 0) != kCheckpointVersion) {
    throw ValidationError("unsupported checkpoint version " + meta["version"].dump());
  }

  LoadedCheckpoint out;
  const ModelConfig mc =
      model_config_from_json(nlohmann::json::parse(io::read_file(dir / "model.json")));
  out.train_config = train_config_from_json(nlohmann::json::parse(io::read_file(dir / "train.json")));
  out.run_config = nlohmann::json::parse(io::read_file(dir / "config.json"));

  const std::size_t num_entities = meta.at("num_entities").get<std::size_t>();
  const std::size_t num_relations = meta.at("num_relations").get<std::size_t>();
  const std::size_t num_attributes = meta.at("num_attributes").get<std::size_t>();
  auto profiles = load_profiles(dir / "profiles.tsv", num_relations, num_attributes);
  out.model = std::make_unique<Model>(mc, num_entities, num_relations, num_attributes,
                                      std::move(profiles), 0);
  load_params(&out.model->mutable_params(), dir / "params");

  const auto& opt = meta.at("optimizer");
  out.optimizer = std::make_unique<Optimizer>(parse_optimizer(opt.at("kind").get<std::string>()),
                                              opt.at("learning_rate").get<double>(),
                                              out.model->params());
  if (out.optimizer->kind() == OptimizerKind::kAdam) {
    ModelParams m = out.model->params().zeros_like();
    ModelParams v = out.model->params().zeros_like();
    load_params(&m, dir / "optimizer" / "m");
    load_params(&v, dir / "optimizer" / "v");
    out.optimizer->restore(opt.at("steps").get<std::uint64_t>(), std::move(m), std::move(v));
  } else {
    out.optimizer->restore(opt.at("steps").get<std::uint64_t>(), {}, {});
  }

  io::for_each_line(dir / "loss_trace.tsv", [&](std::size_t, std::string_view line) {
    auto f = io::split_tabs(line);
    bool ok = false;
    if (f.size() == 2) out.trace.epoch_losses.push_back(io::parse_double(f[1], &ok));
  });
  out.trace.epochs_run = out.trace.epoch_losses.size();
  io::for_each_line(dir / "validation.tsv", [&](std::size_t, std::string_view line) {
    auto f = io::split_tabs(line);
    bool ok = false;
    if (f.size() == 2) {
      out.trace.validation.push_back(
          {io::parse_index(f[0], &ok), io::parse_double(f[1], &ok)});
    }
  });
  return out;
}

}  // namespace realite
