// Copyright 2026 The SemantiX Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "semantix/cli_config.hpp"
#include "semantix/corpus_io.hpp"
#include "semantix/embedding_cache.hpp"
#include "semantix/error.hpp"
#include "semantix/gradient_check.hpp"
#include "semantix/http_embedder.hpp"
#include "semantix/normalizer.hpp"
#include "semantix/provider_spec.hpp"
#include "semantix/report.hpp"

namespace semantix::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kDataError = 2, kProviderError = 3 };

namespace detail {

inline bool on_off(const std::string& v, const char* flag) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw RangeError(std::string("--") + flag + " expects on or off, got '" + v + "'");
}

inline BleuConfig parse_bleu(int order, const std::string& smoothing) {
  BleuConfig c;
  c.max_ngram_order = order;
  if (smoothing == "none") {
    c.smoothing = BleuConfig::Smoothing::none;
  } else if (smoothing.starts_with("additive")) {
    c.smoothing = BleuConfig::Smoothing::additive;
    if (auto colon = smoothing.find(':'); colon != std::string::npos) {
      try {
        c.epsilon = std::stod(smoothing.substr(colon + 1));
      } catch (const std::exception&) {
        throw RangeError("bad smoothing epsilon in '" + smoothing + "'");
      }
    }
  } else {
    throw RangeError("--bleu-smoothing expects none or additive[:EPS]");
  }
  c.validate();
  return c;
}

inline std::pair<std::filesystem::path, std::filesystem::path> report_paths(const std::string& out) {
  std::filesystem::path p(out);
  if (p.extension() == ".json") {
    auto txt = p;
    txt.replace_extension(".txt");
    return {p, txt};
  }
  return {std::filesystem::path(out + ".json"), std::filesystem::path(out + ".txt")};
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write " + p.string());
  f << content;
  if (!f) throw DataError("failed writing " + p.string());
}

inline std::vector<std::string> distinct_texts(const Corpus& corpus) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& p : corpus)
    for (const auto* t : {&p.reference, &p.hypothesis})
      if (seen.insert(*t).second) out.push_back(*t);
  return out;
}

}  // namespace detail

struct EvaluateFlags {
  std::string corpus;
  std::string format;
  std::string metrics = "wer,cer,bleu";
  std::string embedder;
  std::string cache;
  std::string normalize = "on";
  std::string charset = "german";
  std::string group_by;
  std::string out;
  int bleu_order = 4;
  std::string bleu_smoothing = "none";
  double significance = 0.05;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::size_t batch_size = 64;
  std::size_t max_in_flight = 4;
};

struct NormalizeFlags {
  std::string in;
  std::string out;
  std::string lowercase = "on";
  std::string charset = "german";
  std::string spell_numbers = "on";
  std::string collapse_whitespace = "on";
};

struct LossCheckFlags {
  std::uint64_t seed = GradientCheckOptions{}.seed;
  int trials = 100;
  double inject_fault = 0.0;
};

struct EmbedFlags {
  std::string corpus;
  std::string format;
  std::string embedder;
  std::string cache;
  std::size_t batch_size = 64;
  std::size_t max_in_flight = 4;
};

inline std::optional<CorpusFormat> parse_format(const std::string& f) {
  if (f.empty()) return std::nullopt;
  if (f == "tsv") return CorpusFormat::tsv;
  if (f == "jsonl") return CorpusFormat::jsonl;
  throw RangeError("--format expects tsv or jsonl");
}

inline int cmd_evaluate(const EvaluateFlags& f, std::ostream& out) {
  ReportOptions opt;
  opt.metrics = MetricSet::parse(f.metrics);
  if (opt.metrics.semdist && f.embedder.empty()) throw RangeError("semdist requires --embedder");
  if (!opt.metrics.semdist && !f.embedder.empty()) throw RangeError("--embedder given but semdist not requested");
  if (!f.cache.empty() && f.embedder.empty()) throw RangeError("--cache requires --embedder");
  if (detail::on_off(f.normalize, "normalize")) {
    NormalizationConfig n;
    n.allowed_charset = Charset::parse(f.charset);
    opt.normalization = n;
  } else {
    opt.normalization.reset();
  }
  if (f.group_by == "dialect") opt.group_by = GroupKey::dialect;
  else if (f.group_by == "dataset") opt.group_by = GroupKey::dataset;
  else if (!f.group_by.empty()) throw RangeError("--group-by expects dialect or dataset");
  opt.bleu = detail::parse_bleu(f.bleu_order, f.bleu_smoothing);
  if (!(f.significance > 0.0 && f.significance < 1.0)) throw RangeError("--significance must lie in (0, 1)");
  opt.significance_level = f.significance;
  opt.jobs = std::max(1u, f.jobs);
  const auto format = parse_format(f.format);

  Corpus corpus = load_corpus(f.corpus, format);
  std::unique_ptr<EmbeddingProvider> provider;
  if (opt.metrics.semdist) {
    HttpEmbedderOptions http;
    http.batch_size = f.batch_size;
    http.max_in_flight = f.max_in_flight;
    provider = make_provider(f.embedder, f.cache.empty() ? std::nullopt : std::optional(f.cache), http);
  }
  MetricReport report = build_report(corpus, opt, provider.get());
  const auto [json_path, text_path] = detail::report_paths(f.out);
  const std::string text = report_to_text(report);
  detail::write_file(json_path, report_to_json(report).dump(2) + "\n");
  detail::write_file(text_path, text);
  out << text << "reports: " << json_path.string() << ", " << text_path.string() << '\n';
  return kSuccess;
}

inline int cmd_normalize(const NormalizeFlags& f, std::istream& stdin_stream, std::ostream& stdout_stream,
                         std::ostream& err) {
  NormalizationConfig config;
  config.lowercase = detail::on_off(f.lowercase, "lowercase");
  config.allowed_charset = Charset::parse(f.charset);
  config.spell_numbers = detail::on_off(f.spell_numbers, "spell-numbers");
  config.collapse_whitespace = detail::on_off(f.collapse_whitespace, "collapse-whitespace");

  std::ifstream file_in;
  if (!f.in.empty() && f.in != "-") {
    file_in.open(f.in, std::ios::binary);
    if (!file_in) throw DataError("cannot read " + f.in);
  }
  std::istream& in = file_in.is_open() ? static_cast<std::istream&>(file_in) : stdin_stream;
  std::ofstream file_out;
  if (!f.out.empty() && f.out != "-") {
    file_out.open(f.out, std::ios::binary | std::ios::trunc);
    if (!file_out) throw DataError("cannot write " + f.out);
  }
  std::ostream& out = file_out.is_open() ? static_cast<std::ostream&>(file_out) : stdout_stream;

  std::size_t unspelled = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto r = normalize_counted(line, config);
    unspelled += r.unspelled_numbers;
    out << r.text << '\n';
  }
  if (in.bad()) throw DataError("error reading input");
  if (unspelled > 0) err << "warning: " << unspelled << " numeral(s) left unspelled (out of range or non-integer)\n";
  return kSuccess;
}

inline int cmd_loss_check(const LossCheckFlags& f, std::ostream& out) {
  if (f.trials < 1) throw RangeError("--trials must be positive");
  GradientCheckOptions opt;
  opt.seed = f.seed;
  opt.trials = f.trials;
  opt.inject_fault = f.inject_fault;
  auto report = run_gradient_check(opt);
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "seed %llu, %d trials per loss, step %g, tolerance %g\n"
                "loss_ce        worst relative error %.3e\n"
                "grad_sem_dist  worst relative error %.3e\n",
                static_cast<unsigned long long>(opt.seed), opt.trials, opt.step, opt.tolerance, report.worst_ce,
                report.worst_sem_dist);
  out << buf;
  if (report.passed()) {
    out << "result: PASS\n";
    return kSuccess;
  }
  out << "result: FAIL (" << report.failures.size() << " failing instances)\n";
  for (const auto& fail : report.failures) {
    nlohmann::json replay = {{"loss", fail.loss},   {"trial", fail.trial},         {"seed", opt.seed},
                             {"relative_error", fail.relative_error}, {"instance", fail.instance}};
    out << replay.dump() << '\n';
  }
  return kUsageError;
}

inline int cmd_embed(const EmbedFlags& f, std::ostream& out, std::ostream& err) {
  if (!f.embedder.starts_with("http:")) throw RangeError("embed requires --embedder http:URL");
  if (f.batch_size == 0 || f.max_in_flight == 0) throw RangeError("batch size and in-flight limit must be positive");
  Corpus corpus = load_corpus(f.corpus, parse_format(f.format));
  auto texts = detail::distinct_texts(corpus);

  HttpEmbedderOptions http;
  http.batch_size = f.batch_size;
  http.max_in_flight = f.max_in_flight;
  auto provider = make_provider(f.embedder, f.cache, http);
  auto& cached = dynamic_cast<CachedEmbedder&>(*provider);
  const std::size_t before = cached.cache().size();
  try {
    std::size_t added = cached.fill(texts, f.batch_size * f.max_in_flight);
    out << "added " << added << " record(s); " << cached.cache().size() << " in " << f.cache << '\n';
  } catch (const ProviderError&) {
    err << "interrupted after " << (cached.cache().size() - before) << " new record(s); " << f.cache
        << " holds " << cached.cache().size() << " complete record(s)\n";
    throw;
  }
  return kSuccess;
}

// Entry point shared by the binary and the tests. `args` excludes the program
// name. Exit codes: 0 success, 1 usage error, 2 data error, 3 provider error.
inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semantic-aware ASR evaluation: WER, CER, BLEU, SemDist and SemantiX losses", "semantix"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  std::string config_path;
  app.add_option("--config", config_path, "Flat key = value file of flag defaults; explicit flags win");

  EvaluateFlags ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score a corpus and write JSON and text reports");
  evaluate->add_option("--corpus", ev.corpus, "TSV or JSONL corpus")->required();
  evaluate->add_option("--format", ev.format, "tsv or jsonl (default: by extension)");
  evaluate->add_option("--metrics", ev.metrics, "Comma list from wer,cer,bleu,semdist")->capture_default_str();
  evaluate->add_option("--embedder", ev.embedder, "test-hash | cache:PATH | http:URL (required for semdist)");
  evaluate->add_option("--cache", ev.cache, "Embedding cache wrapped around the embedder");
  evaluate->add_option("--normalize", ev.normalize, "on|off, applies to wer/cer/bleu")->capture_default_str();
  evaluate->add_option("--charset", ev.charset, "german | all | literal characters")->capture_default_str();
  evaluate->add_option("--group-by", ev.group_by, "dialect | dataset");
  evaluate->add_option("--out", ev.out, "Report path; writes OUT.json and OUT.txt")->required();
  evaluate->add_option("--bleu-order", ev.bleu_order, "Maximum n-gram order")->capture_default_str();
  evaluate->add_option("--bleu-smoothing", ev.bleu_smoothing, "none | additive[:EPS]")->capture_default_str();
  evaluate->add_option("--significance", ev.significance, "Correlation significance level")->capture_default_str();
  evaluate->add_option("--jobs", ev.jobs, "Worker threads")->capture_default_str();
  evaluate->add_option("--batch-size", ev.batch_size, "Texts per remote request")->capture_default_str();
  evaluate->add_option("--max-in-flight", ev.max_in_flight, "Concurrent remote requests")->capture_default_str();

  NormalizeFlags nf;
  auto* normalize_cmd = app.add_subcommand("normalize", "Normalize text line by line");
  normalize_cmd->add_option("--in", nf.in, "Input file (default: stdin)");
  normalize_cmd->add_option("--out", nf.out, "Output file (default: stdout)");
  normalize_cmd->add_option("--lowercase", nf.lowercase, "on|off")->capture_default_str();
  normalize_cmd->add_option("--charset", nf.charset, "german | all | literal characters")->capture_default_str();
  normalize_cmd->add_option("--spell-numbers", nf.spell_numbers, "on|off")->capture_default_str();
  normalize_cmd->add_option("--collapse-whitespace", nf.collapse_whitespace, "on|off")->capture_default_str();

  LossCheckFlags lf;
  auto* loss_check = app.add_subcommand("loss-check", "Finite-difference check of the loss gradients");
  loss_check->add_option("--seed", lf.seed, "RNG seed")->capture_default_str();
  loss_check->add_option("--trials", lf.trials, "Random instances per loss")->capture_default_str();
  loss_check->add_option("--inject-fault", lf.inject_fault, "Offset added to one analytic gradient entry (testing)");

  EmbedFlags ef;
  auto* embed_cmd = app.add_subcommand("embed", "Fill an embedding cache from a remote embedder");
  embed_cmd->add_option("--corpus", ef.corpus, "TSV or JSONL corpus")->required();
  embed_cmd->add_option("--format", ef.format, "tsv or jsonl (default: by extension)");
  embed_cmd->add_option("--embedder", ef.embedder, "http:URL")->required();
  embed_cmd->add_option("--cache", ef.cache, "Cache file to create or extend")->required();
  embed_cmd->add_option("--batch-size", ef.batch_size, "Texts per request")->capture_default_str();
  embed_cmd->add_option("--max-in-flight", ef.max_in_flight, "Concurrent requests")->capture_default_str();

  try {
    // --config is resolved before parsing so its entries can be layered under
    // the chosen subcommand's flags.
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      std::size_t consumed = 0;
      if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1], consumed = 2;
      else if (args[i].starts_with("--config=")) path = args[i].substr(9), consumed = 1;
      if (consumed == 0) continue;
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + consumed));
      CLI::App* sub = nullptr;
      for (auto* s : {evaluate, normalize_cmd, loss_check, embed_cmd})
        if (std::find(args.begin(), args.end(), s->get_name()) != args.end()) sub = s;
      std::map<std::string, std::string> relevant;
      for (const auto& [key, value] : load_config(path)) {
        if (sub == nullptr || sub->get_option_no_throw("--" + key) == nullptr)
          throw RangeError("config key '" + key + "' is not a flag of this subcommand");
        relevant.emplace(key, value);
      }
      args = layer_config(std::move(args), relevant);
      break;
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  } catch (const RangeError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }

  try {
    if (*evaluate) return cmd_evaluate(ev, out);
    if (*normalize_cmd) return cmd_normalize(nf, in, out, err);
    if (*loss_check) return cmd_loss_check(lf, out);
    if (*embed_cmd) return cmd_embed(ef, out, err);
  } catch (const RangeError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ProviderError& e) {
    err << "embedder error" << (e.retryable() ? " (retryable)" : "") << ": " << e.what() << '\n';
    return kProviderError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace semantix::cli
