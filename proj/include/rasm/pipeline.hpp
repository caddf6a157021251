// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Full pipeline orchestration: enhance -> segment -> decode -> correct ->
// evaluate, with every intermediate artifact persisted under an output
// directory with stable names. Apart from run.log (the only file allowed to
// carry timestamps) identical configs, inputs and seeds produce byte-identical
// output directories.
//
// Config files are UTF-8 lines of `section.key = value`; `#` starts a
// comment line. Unknown keys are rejected. The effective values (after CLI
// overrides) are echoed to effective_config.txt.

#ifndef RASM_PIPELINE_HPP
#define RASM_PIPELINE_HPP

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rasm/alphabet.hpp"
#include "rasm/decode.hpp"
#include "rasm/emission.hpp"
#include "rasm/enhance.hpp"
#include "rasm/error.hpp"
#include "rasm/eval.hpp"
#include "rasm/lexicon.hpp"
#include "rasm/lm.hpp"
#include "rasm/pnm.hpp"
#include "rasm/postcorrect.hpp"
#include "rasm/segment.hpp"
#include "rasm/sim.hpp"
#include "rasm/unicode.hpp"

namespace rasm {

struct PipelineConfig {
  EnhanceConfig enhance;
  SegmentConfig segment;
  NormalizeConfig normalize;
  DecodeConfig decode;
  std::string decode_algorithm = "wbs";  // greedy | beam | dbs | wbs
  CorrectionConfig correct;
  bool correct_enabled = true;
  NoiseConfig noise;
  AugmentConfig augment;
  std::string lexicon_path;
  std::string lm_path;
  std::string alphabet_path;

  void apply(const std::string& key, const std::string& value);
  std::string effective_text() const;

  static PipelineConfig from_text(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::string trimmed = line;
      const auto first = trimmed.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      if (trimmed[first] == '#') continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": expected `section.key = value`");
      auto strip = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string()
                                      : s.substr(b, e - b + 1);
      };
      cfg.apply(strip(trimmed.substr(0, eq)), strip(trimmed.substr(eq + 1)));
    }
    return cfg;
  }

  static PipelineConfig load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
  }
};

namespace detail {

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key " + key + ": expected a boolean, got '" +
                    value + "'");
}
inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": expected a number, got '" +
                      value + "'");
  }
}
inline long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": expected an integer, got '" +
                      value + "'");
  }
}

// `from:to:prob` triples separated by commas, e.g. "ي:ب:0.2,ب:ي:0.2".
inline std::vector<Confusion> parse_confusions(const std::string& key,
                                               const std::string& value) {
  std::vector<Confusion> out;
  if (value.empty()) return out;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto c1 = item.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos
                                            : item.find(':', c1 + 1);
    if (c2 == std::string::npos)
      throw ConfigError("config key " + key + ": expected from:to:prob, got '" +
                        item + "'");
    const std::u32string from = utf8_decode(item.substr(0, c1));
    const std::u32string to = utf8_decode(item.substr(c1 + 1, c2 - c1 - 1));
    if (from.size() != 1 || to.size() != 1)
      throw ConfigError("config key " + key +
                        ": confusion endpoints must be single symbols");
    out.push_back(Confusion{from[0], to[0],
                            parse_double(key, item.substr(c2 + 1))});
  }
  return out;
}

inline std::string format_confusions(const std::vector<Confusion>& confusions) {
  std::string out;
  for (std::size_t i = 0; i < confusions.size(); ++i) {
    if (i) out += ',';
    out += utf8_encode(confusions[i].from) + ":" + utf8_encode(confusions[i].to);
    char buf[32];
    std::snprintf(buf, sizeof(buf), ":%g", confusions[i].prob);
    out += buf;
  }
  return out;
}

}  // namespace detail

inline void PipelineConfig::apply(const std::string& key, const std::string& value) {
  using detail::parse_bool;
  using detail::parse_double;
  using detail::parse_int;
  if (key == "enhance.contrast_low_pct") enhance.contrast_low_pct = parse_double(key, value);
  else if (key == "enhance.contrast_high_pct") enhance.contrast_high_pct = parse_double(key, value);
  else if (key == "enhance.edge_threshold") enhance.edge_threshold = static_cast<int>(parse_int(key, value));
  else if (key == "enhance.cei_threshold") enhance.cei_threshold = static_cast<int>(parse_int(key, value));
  else if (key == "enhance.median_window") enhance.median_window = static_cast<int>(parse_int(key, value));
  else if (key == "segment.min_gap_rows") segment.min_gap_rows = static_cast<int>(parse_int(key, value));
  else if (key == "segment.min_line_height") segment.min_line_height = static_cast<int>(parse_int(key, value));
  else if (key == "segment.smear_radius") segment.smear_radius = static_cast<int>(parse_int(key, value));
  else if (key == "segment.margin_band_frac") segment.margin_band_frac = parse_double(key, value);
  else if (key == "normalize.strip_diacritics") normalize.strip_diacritics = parse_bool(key, value);
  else if (key == "normalize.unify_alef_forms") normalize.unify_alef_forms = parse_bool(key, value);
  else if (key == "normalize.lowercase_latin") normalize.lowercase_latin = parse_bool(key, value);
  else if (key == "decode.algorithm") {
    if (value != "greedy" && value != "beam" && value != "dbs" && value != "wbs")
      throw ConfigError("decode.algorithm must be greedy, beam, dbs or wbs");
    decode_algorithm = value;
  }
  else if (key == "decode.beam_width") decode.beam_width = static_cast<std::uint32_t>(parse_int(key, value));
  else if (key == "decode.dbs_groups") decode.dbs_groups = static_cast<std::uint32_t>(parse_int(key, value));
  else if (key == "decode.dbs_penalty") decode.dbs_penalty = parse_double(key, value);
  else if (key == "decode.max_steps") decode.max_steps = static_cast<std::uint32_t>(parse_int(key, value));
  else if (key == "correct.enabled") correct_enabled = parse_bool(key, value);
  else if (key == "correct.max_iterations") correct.max_iterations = static_cast<std::uint32_t>(parse_int(key, value));
  else if (key == "correct.max_edit_distance") correct.max_edit_distance = static_cast<std::uint32_t>(parse_int(key, value));
  else if (key == "correct.max_candidates") correct.max_candidates = static_cast<std::uint32_t>(parse_int(key, value));
  else if (key == "correct.min_word_length") correct.min_word_length = static_cast<std::uint32_t>(parse_int(key, value));
  else if (key == "noise.epsilon") noise.epsilon = parse_double(key, value);
  else if (key == "noise.space_split_prob") noise.space_split_prob = parse_double(key, value);
  else if (key == "noise.seed") noise.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "noise.confusions") noise.confusions = detail::parse_confusions(key, value);
  else if (key == "augment.rotation_min_deg") augment.rotation_min_deg = parse_double(key, value);
  else if (key == "augment.rotation_max_deg") augment.rotation_max_deg = parse_double(key, value);
  else if (key == "augment.stretch_min") augment.stretch_min = parse_double(key, value);
  else if (key == "augment.stretch_max") augment.stretch_max = parse_double(key, value);
  else if (key == "augment.brightness_min") augment.brightness_min = static_cast<int>(parse_int(key, value));
  else if (key == "augment.brightness_max") augment.brightness_max = static_cast<int>(parse_int(key, value));
  else if (key == "augment.salt_pepper_density") augment.salt_pepper_density = parse_double(key, value);
  else if (key == "augment.crop_max") augment.crop_max = static_cast<int>(parse_int(key, value));
  else if (key == "augment.pad_max") augment.pad_max = static_cast<int>(parse_int(key, value));
  else if (key == "augment.seed") augment.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "paths.lexicon") lexicon_path = value;
  else if (key == "paths.lm") lm_path = value;
  else if (key == "paths.alphabet") alphabet_path = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

inline std::string PipelineConfig::effective_text() const {
  std::ostringstream out;
  auto num = [](double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf);
  };
  out << "augment.brightness_max = " << augment.brightness_max << "\n";
  out << "augment.brightness_min = " << augment.brightness_min << "\n";
  out << "augment.crop_max = " << augment.crop_max << "\n";
  out << "augment.pad_max = " << augment.pad_max << "\n";
  out << "augment.rotation_max_deg = " << num(augment.rotation_max_deg) << "\n";
  out << "augment.rotation_min_deg = " << num(augment.rotation_min_deg) << "\n";
  out << "augment.salt_pepper_density = " << num(augment.salt_pepper_density) << "\n";
  out << "augment.seed = " << augment.seed << "\n";
  out << "augment.stretch_max = " << num(augment.stretch_max) << "\n";
  out << "augment.stretch_min = " << num(augment.stretch_min) << "\n";
  out << "correct.enabled = " << (correct_enabled ? "true" : "false") << "\n";
  out << "correct.max_candidates = " << correct.max_candidates << "\n";
  out << "correct.max_edit_distance = " << correct.max_edit_distance << "\n";
  out << "correct.max_iterations = " << correct.max_iterations << "\n";
  out << "correct.min_word_length = " << correct.min_word_length << "\n";
  out << "decode.algorithm = " << decode_algorithm << "\n";
  out << "decode.beam_width = " << decode.beam_width << "\n";
  out << "decode.dbs_groups = " << decode.dbs_groups << "\n";
  out << "decode.dbs_penalty = " << num(decode.dbs_penalty) << "\n";
  out << "decode.max_steps = " << decode.max_steps << "\n";
  out << "enhance.cei_threshold = " << enhance.cei_threshold << "\n";
  out << "enhance.contrast_high_pct = " << num(enhance.contrast_high_pct) << "\n";
  out << "enhance.contrast_low_pct = " << num(enhance.contrast_low_pct) << "\n";
  out << "enhance.edge_threshold = " << enhance.edge_threshold << "\n";
  out << "enhance.median_window = " << enhance.median_window << "\n";
  out << "noise.confusions = " << detail::format_confusions(noise.confusions) << "\n";
  out << "noise.epsilon = " << num(noise.epsilon) << "\n";
  out << "noise.seed = " << noise.seed << "\n";
  out << "noise.space_split_prob = " << num(noise.space_split_prob) << "\n";
  out << "normalize.lowercase_latin = " << (normalize.lowercase_latin ? "true" : "false") << "\n";
  out << "normalize.strip_diacritics = " << (normalize.strip_diacritics ? "true" : "false") << "\n";
  out << "normalize.unify_alef_forms = " << (normalize.unify_alef_forms ? "true" : "false") << "\n";
  out << "paths.alphabet = " << alphabet_path << "\n";
  out << "paths.lexicon = " << lexicon_path << "\n";
  out << "paths.lm = " << lm_path << "\n";
  out << "segment.margin_band_frac = " << num(segment.margin_band_frac) << "\n";
  out << "segment.min_gap_rows = " << segment.min_gap_rows << "\n";
  out << "segment.min_line_height = " << segment.min_line_height << "\n";
  out << "segment.smear_radius = " << segment.smear_radius << "\n";
  return out.str();
}

struct PipelineInput {
  std::string page_path;                    // optional PGM page
  std::vector<std::string> emission_paths;  // optional EMAT batch
  std::vector<std::u32string> references;   // optional, enables evaluation
};

struct PipelineOutcome {
  std::vector<Region> lines;
  std::vector<DecodeResult> decoded;
  std::vector<std::u32string> output_lines;  // corrected when enabled
  std::optional<EvalReport> report;
};

namespace detail {

class RunLog {
 public:
  explicit RunLog(const std::filesystem::path& path) : out_(path) {}
  void line(const std::string& msg) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    out_ << "[" << ms << "] " << msg << "\n";
    out_.flush();
  }

 private:
  std::ofstream out_;
};

template <typename Fn>
auto run_stage(RunLog& log, const std::string& stage, Fn&& fn) {
  log.line("stage " + stage + " start");
  try {
    auto result = fn();
    log.line("stage " + stage + " done");
    return result;
  } catch (const Error& e) {
    log.line("stage " + stage + " FAILED: " + e.what());
    throw Error("stage " + stage + ": " + e.what());
  }
}

}  // namespace detail

inline PipelineOutcome run_pipeline(const PipelineInput& input,
                                    const PipelineConfig& cfg,
                                    const std::string& out_dir) {
  namespace fs = std::filesystem;
  // Startup validation: every referenced file must exist before work begins.
  for (const std::string& path :
       {cfg.lexicon_path, cfg.lm_path, cfg.alphabet_path}) {
    if (!path.empty() && !fs::exists(path))
      throw ConfigError("referenced file does not exist: " + path);
  }
  if (!input.page_path.empty() && !fs::exists(input.page_path))
    throw ConfigError("referenced file does not exist: " + input.page_path);
  for (const std::string& path : input.emission_paths)
    if (!fs::exists(path))
      throw ConfigError("referenced file does not exist: " + path);

  fs::create_directories(out_dir);
  {
    std::ofstream eff(fs::path(out_dir) / "effective_config.txt",
                      std::ios::binary);
    eff << cfg.effective_text();
  }
  detail::RunLog log(fs::path(out_dir) / "run.log");
  PipelineOutcome outcome;

  if (!input.page_path.empty()) {
    const GrayImage enhanced =
        detail::run_stage(log, "enhance", [&] {
          const GrayImage page = read_pgm(input.page_path);
          GrayImage out = enhance_line(page, cfg.enhance);
          write_pgm(out, (fs::path(out_dir) / "01_enhanced.pgm").string());
          return out;
        });
    outcome.lines = detail::run_stage(log, "segment", [&] {
      const BinaryImage bin =
          binarize(invert(enhanced), cfg.enhance.cei_threshold);
      std::vector<Region> lines = segment_lines(bin, cfg.segment);
      const fs::path line_dir = fs::path(out_dir) / "02_lines";
      fs::create_directories(line_dir);
      write_regions(lines, (line_dir / "regions.txt").string());
      char name[32];
      for (std::size_t i = 0; i < lines.size(); ++i) {
        std::snprintf(name, sizeof(name), "line_%03zu.pgm", i);
        write_pgm(crop(enhanced, lines[i]), (line_dir / name).string());
      }
      return lines;
    });
  }

  if (!input.emission_paths.empty()) {
    if (cfg.alphabet_path.empty())
      throw ConfigError("decoding emissions requires paths.alphabet");
    const Alphabet alphabet = Alphabet::load(cfg.alphabet_path);
    std::optional<Lexicon> lexicon;
    std::optional<PrefixTree> tree;
    if (!cfg.lexicon_path.empty()) {
      lexicon = load_lexicon(cfg.lexicon_path, cfg.normalize);
      tree.emplace(*lexicon);
    }
    outcome.decoded = detail::run_stage(log, "decode", [&] {
      if (cfg.decode_algorithm == "wbs" && !tree)
        throw ConfigError("word beam search requires paths.lexicon");
      std::vector<DecodeResult> decoded;
      for (const std::string& path : input.emission_paths) {
        const EmissionMatrix emissions = EmissionMatrix::load(path);
        if (cfg.decode_algorithm == "greedy") {
          decoded.push_back(greedy_decode(emissions, alphabet));
        } else if (cfg.decode_algorithm == "beam") {
          decoded.push_back(beam_search(emissions, alphabet, cfg.decode).front());
        } else if (cfg.decode_algorithm == "dbs") {
          decoded.push_back(
              diverse_beam_search(emissions, alphabet, cfg.decode).front());
        } else {
          decoded.push_back(word_beam_search(emissions, alphabet, *tree, cfg.decode));
        }
      }
      std::ofstream out(fs::path(out_dir) / "03_decoded.txt", std::ios::binary);
      for (const DecodeResult& r : decoded) out << r.text_utf8() << "\n";
      return decoded;
    });

    if (cfg.correct_enabled && !cfg.lm_path.empty() && lexicon) {
      outcome.output_lines = detail::run_stage(log, "correct", [&] {
        const NGramModel model = NGramModel::load(cfg.lm_path);
        std::vector<std::u32string> corrected;
        for (const DecodeResult& r : outcome.decoded)
          corrected.push_back(
              correct_sentence(r.text, model, *lexicon, *tree, cfg.correct)
                  .corrected);
        std::ofstream out(fs::path(out_dir) / "04_corrected.txt",
                          std::ios::binary);
        for (const std::u32string& line : corrected)
          out << utf8_encode(line) << "\n";
        return corrected;
      });
    } else {
      for (const DecodeResult& r : outcome.decoded)
        outcome.output_lines.push_back(r.text);
    }

    if (!input.references.empty()) {
      outcome.report = detail::run_stage(log, "eval", [&] {
        if (input.references.size() != outcome.output_lines.size())
          throw ContractError("reference count does not match decoded line count");
        std::vector<std::pair<std::u32string, std::u32string>> pairs;
        for (std::size_t i = 0; i < input.references.size(); ++i)
          pairs.emplace_back(input.references[i], outcome.output_lines[i]);
        EvalReport report = evaluate_corpus(pairs);
        std::ofstream out(fs::path(out_dir) / "report.tsv", std::ios::binary);
        out << format_report_tsv(report);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "corpus_cer\t%.6f\ncorpus_wer\t%.6f\n",
                      report.corpus_cer, report.corpus_wer);
        out << buf;
        return report;
      });
    }
  }
  log.line("pipeline complete");
  return outcome;
}

}  // namespace rasm

#endif  // RASM_PIPELINE_HPP
