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

#include "sxai/report_io.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "sxai/error.hpp"

namespace sxai {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kIndent = 2;

std::string Dump(const Json& j) { return j.dump(kIndent) + "\n"; }

Json Parse(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    ThrowFormat(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

// Wraps nlohmann access errors (missing keys, wrong types) as kFormat.
template <typename Fn>
auto Guard(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    ThrowFormat(std::string("invalid ") + what + " JSON: " + e.what());
  }
}

FeatureDirection DirectionFromKey(const std::string& key) {
  const auto d = ParseDirection(key);
  if (!d) ThrowFormat("unknown paralinguistic direction \"" + key + "\"");
  return *d;
}

Json MetricToJson(const MetricSummary& m) {
  Json j;
  j["mean"] = m.mean;
  j["std"] = m.std;
  j["rounds"] = m.rounds;
  return j;
}

MetricSummary MetricFromJson(const Json& j) {
  return {j.at("mean").get<double>(), j.at("std").get<double>(),
          j.at("rounds").get<std::vector<double>>()};
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string AttributionReportToJson(const AttributionReport& report) {
  Json j;
  j["id"] = report.id;
  j["targets"] = Json::array();
  for (const auto& t : report.targets) {
    Json jt;
    jt["head"] = t.words.target.head;
    jt["class"] = t.words.target.cls;
    jt["base_prob"] = t.words.base_prob;
    jt["words"] = Json::array();
    for (const auto& s : t.words.scores) {
      Json w;
      w["word"] = s.segment.text;
      w["start"] = s.segment.start_s;
      w["end"] = s.segment.end_s;
      w["r"] = s.r;
      jt["words"].push_back(std::move(w));
    }
    jt["paralinguistic"] = Json::object();
    for (const auto& [dir, rel] : t.paralinguistic.directions) {
      Json d;
      d["r"] = rel.relevance;
      d["grid"] = Json::array();
      for (const auto& g : rel.grid) d["grid"].push_back(Json::array({g.parameter, g.delta}));
      jt["paralinguistic"][std::string(DirectionName(dir))] = std::move(d);
    }
    j["targets"].push_back(std::move(jt));
  }
  return Dump(j);
}

AttributionReport AttributionReportFromJson(const std::string& text) {
  const Json j = Parse(text, "attribution report");
  return Guard("attribution report", [&] {
    AttributionReport report;
    report.id = j.at("id").get<std::string>();
    for (const auto& jt : j.at("targets")) {
      const TargetSpec target{jt.at("head").get<std::string>(), jt.at("class").get<std::string>()};
      const double base = jt.at("base_prob").get<double>();
      TargetExplanation te{{report.id, target, base, {}}, {report.id, target, base, {}}};
      for (const auto& w : jt.at("words")) {
        te.words.scores.push_back({{w.at("word").get<std::string>(), w.at("start").get<double>(),
                                    w.at("end").get<double>()},
                                   w.at("r").get<double>()});
      }
      for (const auto& [key, d] : jt.at("paralinguistic").items()) {
        DirectionRelevance rel{d.at("r").get<double>(), {}};
        for (const auto& g : d.at("grid")) {
          rel.grid.push_back({g.at(0).get<double>(), g.at(1).get<double>()});
        }
        te.paralinguistic.directions[DirectionFromKey(key)] = std::move(rel);
      }
      report.targets.push_back(std::move(te));
    }
    return report;
  });
}

std::string FaithfulnessReportToJson(const FaithfulnessReport& report) {
  Json j;
  j["explainer"] = report.explainer;
  j["rounds"] = report.rounds;
  j["seed"] = report.seed;
  j["metadata"] = {{"k_sets", std::string(KSetModeName(report.mode))},
                   {"gap_policy", "zeroed"},
                   {"targets", "predicted"}};
  j["n_utterances"] = report.n_utterances;
  j["n_skipped"] = report.n_skipped;
  j["skipped"] = report.skipped;
  j["heads"] = Json::object();
  for (const auto& h : report.heads) {
    Json e;
    e["comprehensiveness"] = MetricToJson(h.comprehensiveness);
    e["sufficiency"] = MetricToJson(h.sufficiency);
    e["n_utterances"] = report.n_utterances;
    e["n_skipped"] = report.n_skipped;
    j["heads"][h.head][report.explainer] = std::move(e);
  }
  j["per_utterance"] = Json::array();
  for (const auto& u : report.per_utterance) {
    Json ju;
    ju["id"] = u.id;
    ju["heads"] = Json::object();
    for (const auto& h : u.heads) {
      ju["heads"][h.head] = {{"class", h.cls},
                             {"comprehensiveness", h.comprehensiveness},
                             {"sufficiency", h.sufficiency}};
    }
    j["per_utterance"].push_back(std::move(ju));
  }
  return Dump(j);
}

FaithfulnessReport FaithfulnessReportFromJson(const std::string& text) {
  const Json j = Parse(text, "faithfulness report");
  return Guard("faithfulness report", [&] {
    FaithfulnessReport r;
    r.explainer = j.at("explainer").get<std::string>();
    r.rounds = j.at("rounds").get<int>();
    r.seed = j.at("seed").get<uint64_t>();
    const auto mode = j.at("metadata").at("k_sets").get<std::string>();
    if (mode == KSetModeName(KSetMode::kAllK)) {
      r.mode = KSetMode::kAllK;
    } else if (mode == KSetModeName(KSetMode::kPercentBins)) {
      r.mode = KSetMode::kPercentBins;
    } else {
      ThrowFormat("unknown k_sets mode \"" + mode + "\"");
    }
    r.n_utterances = j.at("n_utterances").get<size_t>();
    r.n_skipped = j.at("n_skipped").get<size_t>();
    r.skipped = j.at("skipped").get<std::vector<std::string>>();
    for (const auto& [head, by_explainer] : j.at("heads").items()) {
      const auto& e = by_explainer.at(r.explainer);
      r.heads.push_back({head, MetricFromJson(e.at("comprehensiveness")),
                         MetricFromJson(e.at("sufficiency"))});
    }
    for (const auto& ju : j.at("per_utterance")) {
      UtteranceFaithfulness u{ju.at("id").get<std::string>(), {}};
      for (const auto& [head, m] : ju.at("heads").items()) {
        u.heads.push_back({head, m.at("class").get<std::string>(),
                           m.at("comprehensiveness").get<double>(),
                           m.at("sufficiency").get<double>()});
      }
      r.per_utterance.push_back(std::move(u));
    }
    return r;
  });
}

namespace {

Json WordToJson(const WordImportance& w) {
  Json j;
  j["word"] = w.word;
  j["key"] = w.key;
  j["classes"] = Json::object();
  for (const auto& c : w.classes) j["classes"][c.cls] = {{"mean", c.mean}, {"count", c.count}};
  return j;
}

}  // namespace

std::string GlobalSummaryToJson(const GlobalSummary& summary) {
  Json j;
  j["top_m"] = summary.words.top_m;
  j["words"] = Json::object();
  for (size_t h = 0; h < summary.words.heads.size(); ++h) {
    const auto& hs = summary.words.heads[h];
    Json jh;
    jh["top"] = Json::array();
    for (const auto& w : summary.words.Top(h)) jh["top"].push_back(WordToJson(w));
    jh["all"] = Json::array();
    for (const auto& w : hs.words) jh["all"].push_back(WordToJson(w));
    j["words"][hs.head] = std::move(jh);
  }
  j["paralinguistic"] = Json::object();
  for (const auto& hs : summary.paralinguistic.heads) {
    Json jh = Json::object();
    for (const auto& [dir, m] : hs.directions) {
      jh[std::string(DirectionName(dir))] = {{"mean", m.mean}, {"count", m.count}};
    }
    j["paralinguistic"][hs.head] = std::move(jh);
  }
  return Dump(j);
}

GlobalSummary GlobalSummaryFromJson(const std::string& text) {
  const Json j = Parse(text, "summary");
  return Guard("summary", [&] {
    GlobalSummary s;
    s.words.top_m = j.at("top_m").get<size_t>();
    for (const auto& [head, jh] : j.at("words").items()) {
      HeadWordSummary hs{head, {}};
      for (const auto& jw : jh.at("all")) {
        WordImportance w{jw.at("word").get<std::string>(), jw.at("key").get<double>(), {}};
        for (const auto& [cls, m] : jw.at("classes").items()) {
          w.classes.push_back({cls, m.at("mean").get<double>(), m.at("count").get<size_t>()});
        }
        hs.words.push_back(std::move(w));
      }
      s.words.heads.push_back(std::move(hs));
    }
    for (const auto& [head, jh] : j.at("paralinguistic").items()) {
      HeadParalinguisticSummary hs{head, {}};
      for (const auto& [key, m] : jh.items()) {
        hs.directions[DirectionFromKey(key)] = {m.at("mean").get<double>(),
                                                m.at("count").get<size_t>()};
      }
      s.paralinguistic.heads.push_back(std::move(hs));
    }
    return s;
  });
}

std::string WordSummaryToCsv(const GlobalWordSummary& summary) {
  std::ostringstream out;
  out << "head,word,class,mean,count,key\n";
  for (const auto& hs : summary.heads) {
    for (const auto& w : hs.words) {
      for (const auto& c : w.classes) {
        out << CsvField(hs.head) << ',' << CsvField(w.word) << ',' << CsvField(c.cls) << ','
            << Num(c.mean) << ',' << c.count << ',' << Num(w.key) << '\n';
      }
    }
  }
  return out.str();
}

std::string ParalinguisticSummaryToCsv(const GlobalParalinguisticSummary& summary) {
  std::ostringstream out;
  out << "head,direction,mean,count\n";
  for (const auto& hs : summary.heads) {
    for (const auto& [dir, m] : hs.directions) {
      out << CsvField(hs.head) << ',' << DirectionName(dir) << ',' << Num(m.mean) << ','
          << m.count << '\n';
    }
  }
  return out.str();
}

}  // namespace sxai
