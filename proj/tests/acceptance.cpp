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

// Acceptance checks. One PASS/FAIL line per criterion; exit status 0 only if
// every criterion passes. The CLI is driven as an external process.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sxai/aggregate.hpp"
#include "sxai/attribution.hpp"
#include "sxai/faithfulness.hpp"
#include "sxai/manifest.hpp"
#include "sxai/oracle.hpp"
#include "sxai/perturb.hpp"
#include "sxai/report_io.hpp"
#include "test_util.hpp"

#ifndef SXAI_CLI_PATH
#error "SXAI_CLI_PATH must name the CLI binary"
#endif

namespace {

namespace fs = std::filesystem;
using namespace sxai;
using Clock = std::chrono::steady_clock;

constexpr int kToyUtterances = 50;
constexpr uint64_t kSeed = 7;

int failures = 0;

void Report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string Fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool Cli(const std::string& args) {
  const std::string cmd = std::string(SXAI_CLI_PATH) + " " + args + " >/dev/null";
  const int status = std::system(cmd.c_str());
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    std::fprintf(stderr, "command failed: %s\n", cmd.c_str());
    return false;
  }
  return true;
}

struct PipelineRun {
  fs::path dir;
  bool ok = false;
  double seconds_evaluate = 0.0;

  fs::path toy() const { return dir / "toy"; }
  fs::path reports() const { return dir / "reports"; }
  std::string oracle() const { return "toy:tone:" + (toy() / "oracle.json").string(); }
};

// gen-toy -> explain -> evaluate (l1o and random) -> aggregate.
PipelineRun RunPipeline(const fs::path& dir) {
  PipelineRun run{dir};
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string seed = " --seed " + std::to_string(kSeed);
  const std::string manifest = (run.toy() / "manifest.json").string();
  run.ok = Cli("gen-toy --out " + run.toy().string() + " --n " + std::to_string(kToyUtterances) +
               seed) &&
           Cli("explain --manifest " + manifest + " --oracle " + run.oracle() + " --out " +
               run.reports().string() + " --jobs 4" + seed);
  const auto t0 = Clock::now();
  run.ok = run.ok &&
           Cli("evaluate --manifest " + manifest + " --oracle " + run.oracle() +
               " --explainer l1o --jobs 4 --out " + (dir / "faith_l1o.json").string() + seed) &&
           Cli("evaluate --manifest " + manifest + " --oracle " + run.oracle() +
               " --explainer random --rounds 5 --jobs 4 --out " +
               (dir / "faith_random.json").string() + seed);
  run.seconds_evaluate = Seconds(t0);
  run.ok = run.ok && Cli("aggregate --reports " + run.reports().string() + " --top 15 --out " +
                         (dir / "summary.json").string());
  return run;
}

std::map<std::string, AttributionReport> LoadReports(const PipelineRun& run) {
  std::map<std::string, AttributionReport> out;
  for (const auto& e : fs::directory_iterator(run.reports())) {
    auto r = AttributionReportFromJson(Slurp(e.path()));
    out.emplace(r.id, std::move(r));
  }
  return out;
}

void CheckDsp() {
  const auto t0 = Clock::now();
  const auto tone = testing::Tone(440.0, 1.0, 16000, 0.5);
  double worst_pitch = 0.0;
  for (double st : {-4.0, -2.0, 2.0, 4.0, 12.0}) {
    const double expected = 440.0 * std::pow(2.0, st / 12.0);
    const double peak = testing::PeakHz(PitchShift(tone, st));
    worst_pitch = std::max(worst_pitch, std::abs(peak - expected) / expected);
  }
  double worst_stretch = 0.0;
  for (double rate : {0.55, 0.7, 1.25}) {
    const double expected = tone.duration() / rate;
    worst_stretch =
        std::max(worst_stretch, std::abs(TimeStretch(tone, rate).duration() - expected) / expected);
  }
  // SNR of the scaled noise on a full-scale sine, and of the actual residual
  // at an amplitude where the mix does not clip.
  const auto full = testing::Tone(440.0, 1.0, 16000, 1.0);
  const auto quiet = testing::Tone(440.0, 1.0, 16000, 0.25);
  double worst_snr = 0.0;
  for (double snr : {0.0, 5.0, 10.0, 20.0}) {
    const auto n = ScaledNoise(full, snr, kSeed);
    const double m = 10.0 * std::log10(testing::MeanSquare(full.samples()) / testing::MeanSquare(n));
    worst_snr = std::max(worst_snr, std::abs(m - snr));
    const auto mixed = AddWhiteNoise(quiet, snr, kSeed);
    std::vector<double> residual(mixed.size());
    for (size_t i = 0; i < residual.size(); ++i) {
      residual[i] = static_cast<double>(mixed.samples()[i]) - quiet.samples()[i];
    }
    const double r =
        10.0 * std::log10(testing::MeanSquare(quiet.samples()) / testing::MeanSquare(residual));
    worst_snr = std::max(worst_snr, std::abs(r - snr));
  }
  const bool identities =
      Reverb(tone, 0.0) == tone && PitchShift(tone, 0.0) == tone && TimeStretch(tone, 1.0) == tone;
  const bool ok = worst_pitch <= 0.02 && worst_stretch <= 0.01 && worst_snr <= 0.5 && identities;
  Report(ok, "dsp-correctness",
         "pitch err " + Fmt("%.3f%%", 100 * worst_pitch) + " (<=2%), stretch err " +
             Fmt("%.3f%%", 100 * worst_stretch) + " (<=1%), snr err " + Fmt("%.3f dB", worst_snr) +
             " (<=0.5), identities " + (identities ? "exact" : "BROKEN") + ", " +
             Fmt("%.2f s", Seconds(t0)));
}

void CheckMasking() {
  std::mt19937_64 gen(kSeed);
  int cases = 0, good = 0;
  while (cases < 100) {
    const size_t n = 1600 + gen() % 48000;
    std::uniform_real_distribution<float> amp(-1.0f, 1.0f);
    std::vector<float> v(n);
    for (auto& x : v) x = amp(gen);
    const Waveform w(std::move(v), 16000);
    std::uniform_real_distribution<double> t(0.0, w.duration());
    double p[4] = {t(gen), t(gen), t(gen), t(gen)};
    std::sort(p, p + 4);
    if (!(p[0] < p[1] && p[2] < p[3])) continue;
    ++cases;
    const WordSegment a{"a", p[0], p[1]}, b{"b", p[2], p[3]};
    const auto ma = MaskSegment(w, a);
    const bool idempotent = MaskSegment(ma, a) == ma;
    const bool commute = MaskSegment(ma, b) == MaskSegment(MaskSegment(w, b), a);
    good += idempotent && commute;
  }
  Report(good == cases, "masking-algebra",
         std::to_string(good) + "/" + std::to_string(cases) + " cases bit-exact");
}

void CheckEq1(const PipelineRun& run, const std::map<std::string, AttributionReport>& reports) {
  const auto ds = LoadDataset(run.toy() / "manifest.json");
  const auto oracle = CreateOracle(run.oracle());
  double max_err = 0.0;
  size_t tone_top = 0, checked = 0;
  bool complete = ds.utterances.size() >= kToyUtterances && ds.rejected.empty();
  for (const auto& u : ds.utterances) {
    const auto it = reports.find(u.id);
    if (it == reports.end()) {
      complete = false;
      continue;
    }
    const auto& wa = it->second.targets.at(0).words;
    const auto rt = oracle->schema().Resolve(wa.target);
    const double base = oracle->Predict(u.waveform).Probability(rt);
    complete = complete && wa.scores.size() == u.segments.size();
    size_t tone_index = u.segments.size();
    for (size_t i = 0; i < u.segments.size() && i < wa.scores.size(); ++i) {
      const auto masked = testing::ReferenceMask(u.waveform.samples(), u.waveform.sample_rate(),
                                                 u.segments[i].start_s, u.segments[i].end_s);
      const double p = oracle->Predict(Waveform(masked, u.waveform.sample_rate())).Probability(rt);
      max_err = std::max(max_err, std::abs(wa.scores[i].r - (base - p)));
      if (NormalizeWord(u.segments[i].text) == u.metadata.at("keyword")) tone_index = i;
    }
    ++checked;
    if (tone_index == u.segments.size() || wa.target.cls != u.metadata.at("keyword")) continue;
    bool strict = true;
    for (size_t i = 0; i < wa.scores.size(); ++i) {
      if (i != tone_index && !(wa.scores[tone_index].r > wa.scores[i].r)) strict = false;
    }
    tone_top += strict;
  }
  const double frac = checked ? static_cast<double>(tone_top) / checked : 0.0;
  Report(complete && max_err <= 1e-12 && frac >= 0.95, "eq1-word-attribution",
         std::to_string(checked) + " utterances, max |r - brute force| " + Fmt("%.3g", max_err) +
             " (<=1e-12), tone segment strictly top in " + Fmt("%.1f%%", 100 * frac) +
             " (>=95%, target 100%)");
}

void CheckEq2(const PipelineRun& run, const std::map<std::string, AttributionReport>& reports) {
  double max_err = 0.0;
  size_t directions = 0;
  for (const auto& [id, r] : reports) {
    for (const auto& t : r.targets) {
      for (const auto& [dir, rel] : t.paralinguistic.directions) {
        double sum = 0.0;
        for (const auto& g : rel.grid) sum += g.delta;
        max_err = std::max(max_err, std::abs(rel.relevance - sum / rel.grid.size()));
        ++directions;
      }
    }
  }
  // Constant oracle over a slice of the toy set, default grids.
  const auto ds = LoadDataset(run.toy() / "manifest.json");
  const auto constant = CreateOracle("toy:constant");
  size_t nonzero = 0, values = 0;
  for (size_t i = 0; i < ds.utterances.size() && i < 10; ++i) {
    const auto rep = Explain(*constant, ds.utterances[i], {}, GridSet::Defaults(), 4);
    for (const auto& t : rep.targets) {
      for (const auto& s : t.words.scores) nonzero += s.r != 0.0, ++values;
      for (const auto& [dir, rel] : t.paralinguistic.directions) {
        nonzero += rel.relevance != 0.0, ++values;
        for (const auto& g : rel.grid) nonzero += g.delta != 0.0, ++values;
      }
    }
  }
  Report(directions > 0 && max_err <= 1e-12 && nonzero == 0, "eq2-paralinguistic",
         std::to_string(reports.size()) + " reports / " + std::to_string(directions) +
             " directions, max |relevance - mean(deltas)| " + Fmt("%.3g", max_err) +
             " (<=1e-12); constant oracle " + std::to_string(nonzero) + "/" +
             std::to_string(values) + " non-zero");
}

void CheckFaithfulnessOrdering(const PipelineRun& run) {
  const auto l1o = FaithfulnessReportFromJson(Slurp(run.dir / "faith_l1o.json"));
  const auto rnd = FaithfulnessReportFromJson(Slurp(run.dir / "faith_random.json"));
  const auto& lc = l1o.heads.at(0).comprehensiveness;
  const auto& ls = l1o.heads.at(0).sufficiency;
  const auto& rc = rnd.heads.at(0).comprehensiveness;
  const auto& rs = rnd.heads.at(0).sufficiency;
  const bool comp_ok = lc.mean > rc.mean && lc.mean - rc.mean >= 3.0 * rc.std;
  const bool suff_ok = ls.mean < rs.mean && rs.mean - ls.mean >= 3.0 * rs.std;
  const bool rounds_ok = rnd.rounds == 5 && rc.rounds.size() == 5;
  const bool fast = run.seconds_evaluate < 60.0;
  Report(comp_ok && suff_ok && rounds_ok && fast, "faithfulness-ordering",
         "comp l1o " + Fmt("%.4f", lc.mean) + " vs random " + Fmt("%.4f", rc.mean) + "+-" +
             Fmt("%.4f", rc.std) + " (margin " + Fmt("%.1f", (lc.mean - rc.mean) / rc.std) +
             " sd); suff l1o " + Fmt("%.4f", ls.mean) + " vs random " + Fmt("%.4f", rs.mean) +
             "+-" + Fmt("%.4f", rs.std) + " (margin " + Fmt("%.1f", (rs.mean - ls.mean) / rs.std) +
             " sd); " + Fmt("%.1f s", run.seconds_evaluate) + " (<60 s)");
}

void CheckDegenerate(const PipelineRun& run) {
  const auto ds = LoadDataset(run.toy() / "manifest.json");
  const auto constant = CreateOracle("toy:constant");
  const auto tone = CreateOracle(run.oracle());
  size_t nonzero = 0, cases = 0;
  for (const auto& u : ds.utterances) {
    const auto target = PredictedTargets(constant->schema(), constant->Predict(u.waveform))[0];
    for (uint64_t s = 0; s < 2; ++s) {
      const auto scores = RandomExplainer(s)(*constant, u, target);
      for (auto mode : {KSetMode::kAllK, KSetMode::kPercentBins}) {
        nonzero += Comprehensiveness(*constant, u, target, scores, mode) != 0.0;
        nonzero += Sufficiency(*constant, u, target, scores, mode) != 0.0;
        cases += 2;
      }
    }
  }
  // n = 1: each toy word as its own single-segment utterance.
  size_t mismatched = 0, singles = 0;
  for (size_t i = 0; i < ds.utterances.size() && i < 20; ++i) {
    const auto& u = ds.utterances[i];
    for (const auto& seg : u.segments) {
      const auto [a, b] = SegmentSampleRange(seg, u.waveform.sample_rate(), u.waveform.size());
      std::vector<float> v(u.waveform.samples().begin() + a, u.waveform.samples().begin() + b);
      const auto single = MakeUtterance(u.id + "_" + seg.text, Waveform(v, u.waveform.sample_rate()),
                                        {{seg.text, 0.0, static_cast<double>(v.size()) /
                                                             u.waveform.sample_rate()}});
      const auto target = PredictedTargets(tone->schema(), tone->Predict(single.waveform))[0];
      const auto wa = ComputeWordAttribution(*tone, single, target);
      const std::vector<double> scores = {wa.scores[0].r};
      mismatched += Comprehensiveness(*tone, single, target, scores) != wa.scores[0].r;
      ++singles;
    }
  }
  Report(nonzero == 0 && mismatched == 0, "metric-degenerate-cases",
         "constant oracle " + std::to_string(nonzero) + "/" + std::to_string(cases) +
             " non-zero metrics; n=1 comprehensiveness != r in " + std::to_string(mismatched) +
             "/" + std::to_string(singles));
}

void CheckReproducibility(const PipelineRun& a, const PipelineRun& b) {
  size_t files = 0, differing = 0;
  bool ok = a.ok && b.ok;
  for (const auto& e : fs::recursive_directory_iterator(a.dir)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), a.dir);
    ++files;
    if (!fs::exists(b.dir / rel) || Slurp(e.path()) != Slurp(b.dir / rel)) ++differing;
  }
  size_t files_b = 0;
  for (const auto& e : fs::recursive_directory_iterator(b.dir)) files_b += e.is_regular_file();
  ok = ok && files > 0 && differing == 0 && files == files_b;
  Report(ok, "reproducibility",
         std::to_string(files) + " files (wav, json, csv) from two pipeline runs, " +
             std::to_string(differing) + " differ");
}

void CheckSerialization(const PipelineRun& run) {
  size_t docs = 0, bad = 0;
  for (const auto& e : fs::directory_iterator(run.reports())) {
    const auto text = Slurp(e.path());
    const auto r = AttributionReportFromJson(text);
    bad += AttributionReportToJson(r) != text || AttributionReportFromJson(AttributionReportToJson(r)) != r;
    ++docs;
  }
  for (const char* name : {"faith_l1o.json", "faith_random.json"}) {
    const auto text = Slurp(run.dir / name);
    const auto f = FaithfulnessReportFromJson(text);
    bad += FaithfulnessReportToJson(f) != text || FaithfulnessReportFromJson(FaithfulnessReportToJson(f)) != f;
    ++docs;
  }
  const auto text = Slurp(run.dir / "summary.json");
  const auto s = GlobalSummaryFromJson(text);
  bad += GlobalSummaryToJson(s) != text || GlobalSummaryFromJson(GlobalSummaryToJson(s)) != s;
  ++docs;
  Report(bad == 0, "serialization-round-trip",
         std::to_string(docs) + " documents (attribution, faithfulness, summary), " +
             std::to_string(bad) + " lossy");
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1])
                                 : fs::temp_directory_path() / "sxai_acceptance";
  CheckDsp();
  CheckMasking();

  const auto t0 = Clock::now();
  const auto a = RunPipeline(work / "run_a");
  const auto b = RunPipeline(work / "run_b");
  std::printf("      pipeline: two runs of %d utterances in %.1f s\n", kToyUtterances, Seconds(t0));
  if (!a.ok) {
    Report(false, "pipeline", "CLI pipeline failed; remaining criteria not evaluated");
    return 1;
  }
  try {
    const auto reports = LoadReports(a);
    CheckEq1(a, reports);
    CheckEq2(a, reports);
    CheckFaithfulnessOrdering(a);
    CheckDegenerate(a);
    CheckReproducibility(a, b);
    CheckSerialization(a);
  } catch (const std::exception& e) {
    Report(false, "exception", e.what());
  }
  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
