//
// Copyright 2026 The mrqa-prep Authors
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
//

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "mrqa/cli.h"

namespace mrqa::cli {
namespace {

namespace fs = std::filesystem;

struct CommandShape {
  std::set<std::string> input_flags;
  std::set<std::string> output_flags;
  bool takes_seed = false;
  bool takes_jobs = false;
  bool out_is_dir = false;
};

const std::map<std::string, CommandShape>& shapes() {
  static const std::map<std::string, CommandShape> m = {
      {"validate", {{}, {}, false, false, false}},
      {"stats", {{}, {"records"}, false, false, false}},
      {"segment", {{}, {}, false, true, false}},
      {"sample", {{}, {}, true, false, true}},
      {"augment", {{"paraphrases", "sentences", "difficulty"}, {}, true, false, false}},
      {"select", {{"segments", "logits"}, {"out", "nbest"}, false, true, false}},
      {"eval", {{"predictions", "gold"}, {"report", "export-difficulty"}, false, false, false}},
  };
  return m;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string command_of(const std::string& label) { return label.substr(0, label.find(':')); }

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& text) {
  PipelineConfig cfg;
  std::vector<std::string> labels;
  // Per label, keys in first-appearance order.
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> keys;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  bool have_stages = false;
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("pipeline line " + std::to_string(ln) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "seed") {
      cfg.seed = value;
    } else if (key == "jobs") {
      cfg.jobs = value;
    } else if (key == "stages") {
      labels = words(value);
      have_stages = true;
    } else {
      const auto dot = key.rfind('.');
      if (dot == std::string::npos || dot == 0 || dot + 1 == key.size()) {
        throw UsageError("pipeline line " + std::to_string(ln) + ": unknown key '" + key + "'");
      }
      keys[key.substr(0, dot)].emplace_back(key.substr(dot + 1), value);
    }
  }
  if (!have_stages || labels.empty()) throw UsageError("pipeline: 'stages' is missing or empty");

  std::set<std::string> seen;
  for (const std::string& label : labels) {
    if (!seen.insert(label).second) throw UsageError("pipeline: stage '" + label + "' listed twice");
    const std::string cmd = command_of(label);
    const auto shape = shapes().find(cmd);
    if (shape == shapes().end()) throw UsageError("pipeline: unknown command in stage '" + label + "'");
    PipelineStage st;
    st.label = label;
    st.command = cmd;
    std::vector<std::string> ins, outs, rest;
    bool explicit_seed = false, explicit_jobs = false;
    for (const auto& [flag, value] : keys[label]) {
      const auto vals = words(value);
      if (flag == "in") {
        ins.insert(ins.end(), vals.begin(), vals.end());
        st.inputs.insert(st.inputs.end(), vals.begin(), vals.end());
      } else if (flag == "out") {
        if (cmd == "select") {
          rest.push_back("--out");
          rest.insert(rest.end(), vals.begin(), vals.end());
        } else {
          outs.insert(outs.end(), vals.begin(), vals.end());
        }
        st.outputs.insert(st.outputs.end(), vals.begin(), vals.end());
      } else {
        explicit_seed |= flag == "seed";
        explicit_jobs |= flag == "jobs";
        if (shape->second.input_flags.count(flag)) {
          st.inputs.insert(st.inputs.end(), vals.begin(), vals.end());
        } else if (shape->second.output_flags.count(flag)) {
          st.outputs.insert(st.outputs.end(), vals.begin(), vals.end());
        }
        if (vals.size() <= 1) {
          rest.push_back("--" + flag + "=" + value);
        } else {
          rest.push_back("--" + flag);
          rest.insert(rest.end(), vals.begin(), vals.end());
        }
      }
    }
    st.args = {cmd};
    st.args.insert(st.args.end(), ins.begin(), ins.end());
    st.args.insert(st.args.end(), outs.begin(), outs.end());
    st.args.insert(st.args.end(), rest.begin(), rest.end());
    if (shape->second.takes_seed && !explicit_seed && !cfg.seed.empty()) {
      st.args.push_back("--seed=" + cfg.seed);
    }
    if (shape->second.takes_jobs && !explicit_jobs && !cfg.jobs.empty()) {
      st.args.push_back("--jobs=" + cfg.jobs);
    }
    if (shape->second.out_is_dir && outs.size() == 1) {
      // A directory output stands for one file per input.
      st.outputs.clear();
      for (const std::string& i : ins) {
        st.outputs.push_back((fs::path(outs[0]) / fs::path(i).filename()).string());
      }
    }
    cfg.stages.push_back(std::move(st));
  }
  for (const auto& [label, _] : keys) {
    if (!seen.count(label)) throw UsageError("pipeline: keys given for unlisted stage '" + label + "'");
  }
  return cfg;
}

void check_pipeline(const PipelineConfig& cfg) {
  std::map<std::string, std::size_t> producer;
  for (std::size_t i = 0; i < cfg.stages.size(); ++i) {
    for (const std::string& o : cfg.stages[i].outputs) {
      const auto [it, fresh] = producer.emplace(o, i);
      if (!fresh) {
        throw UsageError("pipeline: '" + o + "' is written by both '" + cfg.stages[it->second].label +
                         "' and '" + cfg.stages[i].label + "'");
      }
    }
  }
  for (std::size_t i = 0; i < cfg.stages.size(); ++i) {
    const PipelineStage& st = cfg.stages[i];
    for (const std::string& in : st.inputs) {
      const auto it = producer.find(in);
      if (it == producer.end()) continue;
      if (it->second == i) throw UsageError("pipeline: stage '" + st.label + "' reads its own output '" + in + "'");
      if (it->second > i) {
        throw UsageError("pipeline: stage '" + st.label + "' reads '" + in + "' before '" +
                         cfg.stages[it->second].label + "' writes it");
      }
    }
  }
}

int run_pipeline(const std::string& config_path, std::ostream& out, std::ostream& err) {
  std::ifstream f(config_path);
  if (!f) throw IoError(config_path, "cannot open pipeline config");
  std::stringstream buf;
  buf << f.rdbuf();
  const PipelineConfig cfg = parse_pipeline_config(buf.str());
  check_pipeline(cfg);
  for (const PipelineStage& st : cfg.stages) {
    err << "pipeline stage=" << st.label << "\n";
    const int rc = run(st.args, out, err);
    if (rc != kExitOk) {
      err << "pipeline: stage '" << st.label << "' failed with exit code " << rc << "\n";
      return rc;
    }
  }
  return kExitOk;
}

}  // namespace mrqa::cli
