/*
 * Copyright 2026 The sxai Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// sxai command-line interface. Built only against the C API.

#include <sxai/sxai.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitOracle = 3;
constexpr int kExitInternal = 4;

struct Failure {
  int code;
  std::string message;
};

int ExitCodeFor(sxai_status s) {
  switch (s) {
    case SXAI_OK: return kExitOk;
    case SXAI_ERR_INVALID_ARGUMENT: return kExitUsage;
    case SXAI_ERR_IO:
    case SXAI_ERR_FORMAT: return kExitIo;
    case SXAI_ERR_ORACLE: return kExitOracle;
    case SXAI_ERR_INTERNAL: return kExitInternal;
  }
  return kExitInternal;
}

void Check(sxai_status s) {
  if (s != SXAI_OK) throw Failure{ExitCodeFor(s), sxai_last_error()};
}

// Owns a malloc'd string returned by the library.
class CString {
 public:
  CString() = default;
  ~CString() { sxai_string_free(p_); }
  CString(const CString&) = delete;
  CString& operator=(const CString&) = delete;
  char** out() { return &p_; }
  std::string str() const { return p_ ? std::string(p_) : std::string(); }

 private:
  char* p_ = nullptr;
};

template <typename T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  ~Handle() { Free(p_); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  T** out() { return &p_; }
  T* get() const { return p_; }

 private:
  T* p_ = nullptr;
};

using Waveform = Handle<sxai_waveform, sxai_waveform_free>;
using Utterance = Handle<sxai_utterance, sxai_utterance_free>;
using Dataset = Handle<sxai_dataset, sxai_dataset_free>;
using Oracle = Handle<sxai_oracle, sxai_oracle_free>;
using Grids = Handle<sxai_grids, sxai_grids_free>;

std::vector<std::string> SplitList(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<const char*> CStrings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitIo, "cannot read " + path.string()};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path& path, const std::string& data) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitIo, "cannot write " + path.string()};
  out << data;
  if (!out) throw Failure{kExitIo, "cannot write " + path.string()};
}

void Emit(const std::string& out, const std::string& data) {
  if (out.empty() || out == "-") {
    std::cout << data;
  } else {
    WriteFile(out, data);
  }
}

std::string Extension(const std::string& format) {
  if (format == "html") return ".html";
  if (format == "svg") return ".svg";
  if (format == "json") return ".json";
  return ".txt";
}

struct ExplainArgs {
  std::string audio;
  std::string alignment;
  std::string words;
  std::string manifest;
  std::string oracle = "toy:tone";
  std::string grids;
  std::string targets;
  std::string out;
  std::string format = "json";
  std::optional<uint64_t> seed;
  int jobs = 1;
};

std::string ExplainOne(const ExplainArgs& a, const sxai_oracle* oracle, const sxai_grids* grids,
                       const sxai_utterance* utt, int jobs) {
  const auto targets = SplitList(a.targets, ',');
  const auto ptrs = CStrings(targets);
  CString report;
  Check(sxai_explain(oracle, utt, ptrs.data(), ptrs.size(), grids, jobs, report.out()));
  if (a.format == "json") return report.str();
  CString rendered;
  Check(sxai_render_report(report.str().c_str(), a.format.c_str(), rendered.out()));
  return rendered.str();
}

int RunExplain(const ExplainArgs& a) {
  Grids grids;
  Check(sxai_grids_load(a.grids.empty() ? nullptr : a.grids.c_str(), grids.out()));
  if (a.seed) sxai_grids_set_noise_seed(grids.get(), *a.seed);
  Oracle oracle;
  Check(sxai_oracle_create(a.oracle.c_str(), oracle.out()));

  if (!a.manifest.empty()) {
    if (a.out.empty()) throw Failure{kExitUsage, "--manifest requires --out <dir>"};
    Dataset dataset;
    Check(sxai_dataset_load(a.manifest.c_str(), dataset.out()));
    CString rejected;
    Check(sxai_dataset_rejected_json(dataset.get(), rejected.out()));
    if (rejected.str() != "[]") std::cerr << "rejected: " << rejected.str() << "\n";
    const size_t n = sxai_dataset_size(dataset.get());
    std::vector<std::optional<Failure>> failures(n);
    std::atomic<size_t> next{0};
    std::mutex log;
    auto worker = [&] {
      for (size_t i = next++; i < n; i = next++) {
        const sxai_utterance* utt = sxai_dataset_utterance(dataset.get(), i);
        const std::string id = sxai_utterance_id(utt);
        if (sxai_utterance_segment_count(utt) == 0) {
          std::lock_guard lock(log);
          std::cerr << "skipping " << id << ": no word segments\n";
          continue;
        }
        try {
          WriteFile(fs::path(a.out) / (id + Extension(a.format)),
                    ExplainOne(a, oracle.get(), grids.get(), utt, 1));
        } catch (const Failure& f) {
          failures[i] = f;
        }
      }
    };
    {
      std::vector<std::jthread> pool;
      for (int t = 1; t < a.jobs; ++t) pool.emplace_back(worker);
      worker();
    }
    for (const auto& f : failures) {
      if (f) throw *f;
    }
    return kExitOk;
  }

  Waveform wave;
  Check(sxai_waveform_load(a.audio.c_str(), wave.out()));
  const auto words = SplitList(a.words, ' ');
  const auto word_ptrs = CStrings(words);
  const std::string id = fs::path(a.audio).stem().string();
  Utterance utt;
  Check(sxai_utterance_create(id.c_str(), wave.get(),
                              a.alignment.empty() ? nullptr : a.alignment.c_str(),
                              word_ptrs.data(), word_ptrs.size(), utt.out()));
  if (sxai_utterance_segment_count(utt.get()) == 0) {
    throw Failure{kExitUsage, "no word segments: pass --alignment or --words"};
  }
  Emit(a.out, ExplainOne(a, oracle.get(), grids.get(), utt.get(), a.jobs));
  return kExitOk;
}

struct EvaluateArgs {
  std::string manifest;
  std::string oracle = "toy:tone";
  std::string explainer = "l1o";
  int rounds = 5;
  uint64_t seed = 0;
  std::string mode = "all_k";
  int jobs = 1;
  std::string out;
};

int RunEvaluate(const EvaluateArgs& a) {
  Oracle oracle;
  Check(sxai_oracle_create(a.oracle.c_str(), oracle.out()));
  Dataset dataset;
  Check(sxai_dataset_load(a.manifest.c_str(), dataset.out()));
  CString rejected;
  Check(sxai_dataset_rejected_json(dataset.get(), rejected.out()));
  if (rejected.str() != "[]") std::cerr << "rejected: " << rejected.str() << "\n";
  if (sxai_dataset_size(dataset.get()) == 0) {
    throw Failure{kExitIo, "no loadable utterances in " + a.manifest};
  }
  sxai_evaluate_options opts;
  sxai_evaluate_options_init(&opts);
  opts.explainer = a.explainer.c_str();
  opts.rounds = a.rounds;
  opts.seed = a.seed;
  opts.k_sets = a.mode.c_str();
  opts.jobs = a.jobs;
  CString report;
  Check(sxai_evaluate(oracle.get(), dataset.get(), &opts, report.out()));
  Emit(a.out, report.str());
  return kExitOk;
}

struct AggregateArgs {
  std::string reports;
  size_t top = 15;
  std::string out;
};

int RunAggregate(const AggregateArgs& a) {
  std::error_code ec;
  if (!fs::is_directory(a.reports, ec)) {
    throw Failure{kExitIo, "not a directory: " + a.reports};
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.reports, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  if (ec) throw Failure{kExitIo, "cannot list " + a.reports + ": " + ec.message()};
  if (files.empty()) throw Failure{kExitIo, "no .json reports in " + a.reports};
  std::sort(files.begin(), files.end());

  std::vector<std::string> texts;
  texts.reserve(files.size());
  for (const auto& f : files) texts.push_back(ReadFile(f));
  const auto ptrs = CStrings(texts);
  CString summary, words_csv, para_csv;
  Check(sxai_aggregate(ptrs.data(), ptrs.size(), a.top, summary.out(), words_csv.out(),
                       para_csv.out()));
  if (a.out.empty() || a.out == "-") {
    std::cout << summary.str();
    return kExitOk;
  }
  fs::path out(a.out);
  WriteFile(out, summary.str());
  fs::path stem = out;
  if (stem.extension() == ".json") stem.replace_extension();
  WriteFile(stem.string() + ".words.csv", words_csv.str());
  WriteFile(stem.string() + ".paralinguistic.csv", para_csv.str());
  return kExitOk;
}

struct ToyArgs {
  std::string out;
  size_t n = 50;
  size_t classes = 4;
  uint64_t seed = 0;
  int sample_rate = 16000;
};

int RunGenToy(const ToyArgs& a) {
  if (a.n == 0) throw Failure{kExitUsage, "--n must be positive"};
  sxai_toy_options opts;
  sxai_toy_options_init(&opts);
  opts.utterances = a.n;
  opts.classes = a.classes;
  opts.seed = a.seed;
  opts.sample_rate = a.sample_rate;
  Check(sxai_generate_toy(a.out.c_str(), &opts));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speech classifier explanations: word-level and paralinguistic attribution"};
  app.set_version_flag("--version", sxai_version());
  app.require_subcommand(1);

  ExplainArgs ex;
  auto* explain = app.add_subcommand("explain", "Explain one utterance or a manifest");
  explain->add_option("--audio", ex.audio, "Input WAV");
  explain->add_option("--alignment", ex.alignment, "Word alignment JSON");
  explain->add_option("--words", ex.words, "Space-separated transcript, uniformly aligned");
  explain->add_option("--manifest", ex.manifest, "Explain every utterance; --out is a directory");
  explain->add_option("--oracle", ex.oracle, "toy:tone | toy:amplitude | remote:URL")
      ->capture_default_str();
  explain->add_option("--grids", ex.grids, "Perturbation grid config JSON");
  explain->add_option("--targets", ex.targets, "head=class[,head=class...]; default: predicted");
  explain->add_option("--out", ex.out, "Output file (default stdout)");
  explain->add_option("--format", ex.format)
      ->check(CLI::IsMember({"json", "html", "svg", "ansi", "ansi-text"}))
      ->capture_default_str();
  explain->add_option("--seed", ex.seed, "Noise seed");
  explain->add_option("--jobs", ex.jobs)->check(CLI::PositiveNumber)->capture_default_str();
  explain->get_option("--alignment")->excludes("--words");
  explain->get_option("--manifest")->excludes("--audio");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Faithfulness of an explainer over a manifest");
  evaluate->add_option("--manifest", ev.manifest)->required();
  evaluate->add_option("--oracle", ev.oracle)->capture_default_str();
  evaluate->add_option("--explainer", ev.explainer)
      ->check(CLI::IsMember({"l1o", "random"}))
      ->capture_default_str();
  evaluate->add_option("--rounds", ev.rounds)->check(CLI::PositiveNumber)->capture_default_str();
  evaluate->add_option("--seed", ev.seed)->capture_default_str();
  evaluate->add_option("--mode", ev.mode, "Top-k sets")
      ->check(CLI::IsMember({"all_k", "percent_bins"}))
      ->capture_default_str();
  evaluate->add_option("--jobs", ev.jobs)->check(CLI::PositiveNumber)->capture_default_str();
  evaluate->add_option("--out", ev.out, "Output file (default stdout)");

  AggregateArgs ag;
  auto* aggregate = app.add_subcommand("aggregate", "Dataset-level summaries of explain reports");
  aggregate->add_option("--reports", ag.reports, "Directory of report JSON files")->required();
  aggregate->add_option("--top", ag.top)->check(CLI::PositiveNumber)->capture_default_str();
  aggregate->add_option("--out", ag.out, "Summary JSON; CSVs are written next to it");

  ToyArgs ty;
  auto* gen_toy = app.add_subcommand("gen-toy", "Write the synthetic tone benchmark");
  gen_toy->add_option("--out", ty.out)->required();
  gen_toy->add_option("--n", ty.n, "Utterances")->capture_default_str();
  gen_toy->add_option("--classes", ty.classes)->check(CLI::Range(2, 8))->capture_default_str();
  gen_toy->add_option("--seed", ty.seed)->capture_default_str();
  gen_toy->add_option("--sample-rate", ty.sample_rate)
      ->check(CLI::Range(8000, 192000))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    std::cout << sxai_version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return kExitUsage;
  }

  try {
    if (*explain) {
      if (ex.audio.empty() && ex.manifest.empty()) {
        std::cerr << "explain: --audio is required\n\n" << explain->help();
        return kExitUsage;
      }
      if (ex.format == "ansi-text") ex.format = "ansi";
      return RunExplain(ex);
    }
    if (*evaluate) return RunEvaluate(ev);
    if (*aggregate) return RunAggregate(ag);
    if (*gen_toy) return RunGenToy(ty);
  } catch (const Failure& f) {
    std::cerr << "sxai: " << f.message << "\n";
    return f.code;
  }
  return kExitUsage;
}
