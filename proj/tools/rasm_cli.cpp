// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end. One subcommand per pipeline stage plus builders
// for lexicons, language models and synthetic test data.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rasm/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rasm::IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rasm::IoError("cannot write " + path);
  out << content;
}

void add_enhance_flags(CLI::App* cmd, rasm::EnhanceConfig& cfg) {
  cmd->add_option("--contrast-low", cfg.contrast_low_pct, "low clip percentile");
  cmd->add_option("--contrast-high", cfg.contrast_high_pct, "high clip percentile");
  cmd->add_option("--edge-threshold", cfg.edge_threshold, "edge binarization threshold");
  cmd->add_option("--cei-threshold", cfg.cei_threshold, "ink binarization threshold");
  cmd->add_option("--median-window", cfg.median_window, "median filter window (odd)");
}

void add_normalize_flags(CLI::App* cmd, rasm::NormalizeConfig& cfg) {
  cmd->add_flag("--keep-diacritics{false}", cfg.strip_diacritics,
                "keep diacritics in lexicon keys");
  cmd->add_flag("--no-unify-alef{false}", cfg.unify_alef_forms,
                "do not unify alef variants");
  cmd->add_flag("--no-lowercase-latin{false}", cfg.lowercase_latin,
                "do not lowercase latin letters");
}

int run(int argc, char** argv) {
  CLI::App app{"rasm: Arabic OCR line decoding and post-correction toolkit"};
  app.require_subcommand(1);

  // enhance
  auto* enhance_cmd = app.add_subcommand("enhance", "enhance a grayscale line/page image");
  std::string enh_in, enh_out;
  rasm::EnhanceConfig enh_cfg;
  enhance_cmd->add_option("--in", enh_in, "input PGM")->required();
  enhance_cmd->add_option("--out", enh_out, "output PGM")->required();
  add_enhance_flags(enhance_cmd, enh_cfg);
  enhance_cmd->callback([&] {
    rasm::write_pgm(rasm::enhance_line(rasm::read_pgm(enh_in), enh_cfg), enh_out);
  });

  // segment
  auto* segment_cmd = app.add_subcommand("segment", "segment a binary page into lines or blocks");
  std::string seg_in, seg_out, seg_crops;
  bool seg_blocks = false;
  rasm::SegmentConfig seg_cfg;
  segment_cmd->add_option("--in", seg_in, "input PBM page")->required();
  segment_cmd->add_option("--out", seg_out, "output annotation file")->required();
  segment_cmd->add_option("--crops", seg_crops, "directory for per-line PGM crops");
  segment_cmd->add_flag("--blocks", seg_blocks, "emit block regions instead of text lines");
  segment_cmd->add_option("--min-gap", seg_cfg.min_gap_rows, "minimum separating gap (rows)");
  segment_cmd->add_option("--min-line-height", seg_cfg.min_line_height, "minimum line height");
  segment_cmd->add_option("--smear", seg_cfg.smear_radius, "smear radius for XY-cut");
  segment_cmd->add_option("--margin-frac", seg_cfg.margin_band_frac, "margin band fraction");
  segment_cmd->callback([&] {
    const rasm::BinaryImage page = rasm::read_pbm(seg_in);
    const std::vector<rasm::Region> regions =
        seg_blocks ? rasm::segment_blocks(page, seg_cfg)
                   : rasm::segment_lines(page, seg_cfg);
    rasm::write_regions(regions, seg_out);
    if (!seg_crops.empty()) {
      fs::create_directories(seg_crops);
      rasm::GrayImage gray(page.width, page.height, std::uint8_t{255});
      for (std::size_t i = 0; i < page.data.size(); ++i)
        if (page.data[i]) gray.data[i] = 0;
      char name[32];
      for (std::size_t i = 0; i < regions.size(); ++i) {
        std::snprintf(name, sizeof(name), "line_%03zu.pgm", i);
        rasm::write_pgm(rasm::crop(gray, regions[i]),
                        (fs::path(seg_crops) / name).string());
      }
    }
  });

  // decode
  auto* decode_cmd = app.add_subcommand("decode", "decode emission matrices to text");
  std::string dec_emat, dec_list, dec_alphabet, dec_lexicon, dec_out;
  std::string dec_algo = "greedy";
  bool dec_scores = false;
  rasm::DecodeConfig dec_cfg;
  rasm::NormalizeConfig dec_norm;
  decode_cmd->add_option("--emissions", dec_emat, "single EMAT file");
  decode_cmd->add_option("--list", dec_list, "file listing EMAT paths, one per line");
  decode_cmd->add_option("--alphabet", dec_alphabet, "alphabet file")->required();
  decode_cmd->add_option("--lexicon", dec_lexicon, "lexicon file (required for wbs)");
  decode_cmd->add_option("--algo", dec_algo, "greedy | beam | dbs | wbs")
      ->check(CLI::IsMember({"greedy", "beam", "dbs", "wbs"}));
  decode_cmd->add_option("--beam-width", dec_cfg.beam_width, "beam width");
  decode_cmd->add_option("--groups", dec_cfg.dbs_groups, "diverse beam groups");
  decode_cmd->add_option("--lambda", dec_cfg.dbs_penalty, "diversity penalty");
  decode_cmd->add_option("--max-steps", dec_cfg.max_steps, "timestep cap (0 = all)");
  decode_cmd->add_option("--out", dec_out, "output text file (default stdout)");
  decode_cmd->add_flag("--scores", dec_scores, "append per-line scores");
  add_normalize_flags(decode_cmd, dec_norm);
  decode_cmd->callback([&] {
    std::vector<std::string> paths;
    if (!dec_emat.empty()) paths.push_back(dec_emat);
    if (!dec_list.empty())
      for (const std::string& p : read_lines(dec_list))
        if (!p.empty()) paths.push_back(p);
    if (paths.empty())
      throw rasm::ConfigError("decode needs --emissions or --list");
    const rasm::Alphabet alphabet = rasm::Alphabet::load(dec_alphabet);
    std::optional<rasm::Lexicon> lexicon;
    std::optional<rasm::PrefixTree> tree;
    if (!dec_lexicon.empty()) {
      lexicon = rasm::load_lexicon(dec_lexicon, dec_norm);
      tree.emplace(*lexicon);
    }
    if (dec_algo == "wbs" && !tree)
      throw rasm::ConfigError("wbs decoding requires --lexicon");
    std::ostringstream out;
    for (const std::string& path : paths) {
      const rasm::EmissionMatrix emissions = rasm::EmissionMatrix::load(path);
      rasm::DecodeResult result;
      if (dec_algo == "greedy") result = rasm::greedy_decode(emissions, alphabet);
      else if (dec_algo == "beam")
        result = rasm::beam_search(emissions, alphabet, dec_cfg).front();
      else if (dec_algo == "dbs")
        result = rasm::diverse_beam_search(emissions, alphabet, dec_cfg).front();
      else result = rasm::word_beam_search(emissions, alphabet, *tree, dec_cfg);
      out << result.text_utf8();
      if (dec_scores) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "\t%.6f", result.score);
        out << buf << (result.unconstrained ? "\tunconstrained" : "");
      }
      out << "\n";
    }
    if (dec_out.empty()) std::cout << out.str();
    else write_file(dec_out, out.str());
  });

  // correct
  auto* correct_cmd = app.add_subcommand("correct", "post-correct decoded sentences");
  std::string cor_in, cor_lexicon, cor_lm, cor_out, cor_audit;
  rasm::CorrectionConfig cor_cfg;
  rasm::NormalizeConfig cor_norm;
  correct_cmd->add_option("--in", cor_in, "input text, one sentence per line")->required();
  correct_cmd->add_option("--lexicon", cor_lexicon, "lexicon file")->required();
  correct_cmd->add_option("--lm", cor_lm, "n-gram model file")->required();
  correct_cmd->add_option("--out", cor_out, "output text file")->required();
  correct_cmd->add_option("--audit", cor_audit, "substitution audit TSV");
  correct_cmd->add_option("--max-iterations", cor_cfg.max_iterations, "refinement passes");
  correct_cmd->add_option("--max-edit-distance", cor_cfg.max_edit_distance, "candidate distance bound");
  correct_cmd->add_option("--max-candidates", cor_cfg.max_candidates, "candidates per word");
  correct_cmd->add_option("--min-word-length", cor_cfg.min_word_length, "minimum flaggable length");
  add_normalize_flags(correct_cmd, cor_norm);
  correct_cmd->callback([&] {
    const rasm::Lexicon lexicon = rasm::load_lexicon(cor_lexicon, cor_norm);
    const rasm::PrefixTree tree(lexicon);
    const rasm::NGramModel model = rasm::NGramModel::load(cor_lm);
    std::ostringstream out, audit;
    audit << "line\tposition\toriginal\treplacement\tce\tppl\tfinal\n";
    const std::vector<std::string> lines = read_lines(cor_in);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const rasm::CorrectionResult result = rasm::correct_sentence(
          rasm::utf8_decode(lines[i]), model, lexicon, tree, cor_cfg);
      out << result.corrected_utf8() << "\n";
      for (const rasm::Substitution& s : result.substitutions) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f\t%.6f\t%.6f", s.ce_score,
                      s.ppl_score, s.final_score);
        audit << i << "\t" << s.word_position << "\t"
              << rasm::utf8_encode(s.original) << "\t"
              << rasm::utf8_encode(s.replacement) << "\t" << buf << "\n";
      }
    }
    write_file(cor_out, out.str());
    if (!cor_audit.empty()) write_file(cor_audit, audit.str());
  });

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "CER/WER against a reference");
  std::string ev_ref, ev_hyp, ev_tsv;
  rasm::EvalConfig ev_cfg;
  eval_cmd->add_option("--ref", ev_ref, "reference text file")->required();
  eval_cmd->add_option("--hyp", ev_hyp, "hypothesis text file")->required();
  eval_cmd->add_option("--tsv", ev_tsv, "per-line TSV output");
  eval_cmd->add_flag("--strip-diacritics", ev_cfg.strip_diacritics,
                     "strip diacritics before scoring");
  eval_cmd->add_flag("--collapse-whitespace", ev_cfg.collapse_whitespace,
                     "normalize whitespace before scoring");
  eval_cmd->callback([&] {
    const std::vector<std::string> refs = read_lines(ev_ref);
    const std::vector<std::string> hyps = read_lines(ev_hyp);
    if (refs.size() != hyps.size())
      throw rasm::ContractError("reference and hypothesis line counts differ");
    std::vector<std::pair<std::u32string, std::u32string>> pairs;
    for (std::size_t i = 0; i < refs.size(); ++i)
      pairs.emplace_back(rasm::utf8_decode(refs[i]), rasm::utf8_decode(hyps[i]));
    const rasm::EvalReport report = rasm::evaluate_corpus(pairs, ev_cfg);
    if (!ev_tsv.empty()) write_file(ev_tsv, rasm::format_report_tsv(report));
    std::printf("lines\t%zu\nexcluded\t%zu\ncer\t%.6f\nwer\t%.6f\n",
                report.lines.size(), report.excluded_lines, report.corpus_cer,
                report.corpus_wer);
  });

  // lexicon build
  auto* lexicon_cmd = app.add_subcommand("lexicon", "lexicon utilities");
  lexicon_cmd->require_subcommand(1);
  auto* lex_build = lexicon_cmd->add_subcommand("build", "build a lexicon from corpora");
  std::string lexb_out;
  std::vector<std::string> lexb_corpora;
  rasm::NormalizeConfig lexb_norm;
  lex_build->add_option("--out", lexb_out, "output lexicon file")->required();
  lex_build->add_option("corpora", lexb_corpora, "corpus text files")->required();
  add_normalize_flags(lex_build, lexb_norm);
  lex_build->callback([&] {
    rasm::Lexicon lexicon(lexb_norm);
    for (const std::string& path : lexb_corpora) {
      const rasm::Lexicon part = rasm::build_lexicon(read_file(path), lexb_norm);
      for (const auto& [word, count] : part.entries()) lexicon.add(word, count);
    }
    rasm::save_lexicon(lexicon, lexb_out);
    std::printf("words\t%zu\ntokens\t%llu\n", lexicon.size(),
                static_cast<unsigned long long>(lexicon.total_tokens()));
  });

  // lm train / score
  auto* lm_cmd = app.add_subcommand("lm", "n-gram language model utilities");
  lm_cmd->require_subcommand(1);
  auto* lm_train = lm_cmd->add_subcommand("train", "train a backoff n-gram model");
  std::string lmt_out;
  std::vector<std::string> lmt_corpora;
  unsigned lmt_order = 3;
  double lmt_alpha = 0.4;
  rasm::NormalizeConfig lmt_norm;
  lm_train->add_option("--out", lmt_out, "output model file")->required();
  lm_train->add_option("--order", lmt_order, "n-gram order");
  lm_train->add_option("--alpha", lmt_alpha, "stupid-backoff factor");
  lm_train->add_option("corpora", lmt_corpora, "corpus text files")->required();
  add_normalize_flags(lm_train, lmt_norm);
  lm_train->callback([&] {
    rasm::NGramModel model(lmt_order, lmt_alpha);
    for (const std::string& path : lmt_corpora) {
      for (const std::string& line : read_lines(path)) {
        std::vector<std::u32string> sentence;
        for (const std::u32string& tok :
             rasm::word_tokens(rasm::utf8_decode(line))) {
          const std::u32string norm = rasm::normalize_token(tok, lmt_norm);
          if (!norm.empty()) sentence.push_back(norm);
        }
        model.add_sentence(sentence);
      }
    }
    if (!model.trained())
      throw rasm::ContractError("cannot train n-gram model on an empty corpus");
    model.save(lmt_out);
    std::printf("order\t%u\nvocab\t%zu\ntokens\t%llu\n", model.order(),
                model.vocab_size(),
                static_cast<unsigned long long>(model.total_tokens()));
  });
  auto* lm_score = lm_cmd->add_subcommand("score", "log-probability and perplexity per line");
  std::string lms_model, lms_in;
  rasm::NormalizeConfig lms_norm;
  lm_score->add_option("--model", lms_model, "model file")->required();
  lm_score->add_option("--in", lms_in, "input text file")->required();
  add_normalize_flags(lm_score, lms_norm);
  lm_score->callback([&] {
    const rasm::NGramModel model = rasm::NGramModel::load(lms_model);
    for (const std::string& line : read_lines(lms_in)) {
      std::vector<std::u32string> tokens;
      for (const std::u32string& tok : rasm::word_tokens(rasm::utf8_decode(line))) {
        const std::u32string norm = rasm::normalize_token(tok, lms_norm);
        if (!norm.empty()) tokens.push_back(norm);
      }
      if (tokens.empty()) {
        std::printf("0.0\t-\n");
        continue;
      }
      const double lp = rasm::sequence_logprob(model, tokens);
      std::printf("%.6f\t%.6f\n", lp, rasm::perplexity(model, tokens));
    }
  });

  // sim
  auto* sim_cmd = app.add_subcommand("sim", "synthetic data generators");
  sim_cmd->require_subcommand(1);

  auto* sim_emissions = sim_cmd->add_subcommand("emissions", "emission matrices from ground-truth text");
  std::string sime_text, sime_alphabet, sime_emit_alphabet, sime_out;
  rasm::NoiseConfig sime_noise;
  double sime_dot_prob = -1.0;
  sim_emissions->add_option("--text", sime_text, "ground-truth text, one line per matrix")->required();
  sim_emissions->add_option("--alphabet", sime_alphabet, "alphabet file (default: derive from text)");
  sim_emissions->add_option("--emit-alphabet", sime_emit_alphabet, "write the derived alphabet here");
  sim_emissions->add_option("--out", sime_out, "output directory")->required();
  sim_emissions->add_option("--epsilon", sime_noise.epsilon, "smoothing mass");
  sim_emissions->add_option("--dot-prob", sime_dot_prob, "override dotting confusion probability");
  sim_emissions->add_option("--space-split-prob", sime_noise.space_split_prob, "spurious-space probability");
  sim_emissions->add_option("--seed", sime_noise.seed, "random seed");
  sim_emissions->callback([&] {
    if (sime_dot_prob >= 0.0)
      for (rasm::Confusion& c : sime_noise.confusions) c.prob = sime_dot_prob;
    const std::vector<std::string> lines = read_lines(sime_text);
    std::u32string all;
    for (const std::string& line : lines) all += rasm::utf8_decode(line) + U"\n";
    const rasm::Alphabet alphabet = sime_alphabet.empty()
                                        ? rasm::Alphabet::covering(all)
                                        : rasm::Alphabet::load(sime_alphabet);
    if (!sime_emit_alphabet.empty()) alphabet.save(sime_emit_alphabet);
    fs::create_directories(sime_out);
    rasm::NoiseConfig noise = sime_noise;
    char name[32];
    for (std::size_t i = 0; i < lines.size(); ++i) {
      noise.seed = sime_noise.seed + i;  // one substream per line
      const rasm::EmissionMatrix emissions =
          rasm::synth_emissions(rasm::utf8_decode(lines[i]), alphabet, noise);
      std::snprintf(name, sizeof(name), "line_%04zu.emat", i);
      emissions.save((fs::path(sime_out) / name).string());
    }
  });

  auto* sim_corrupt = sim_cmd->add_subcommand("corrupt", "word-level character corruption");
  std::string simc_in, simc_out;
  double simc_rate = 0.1;
  std::uint64_t simc_seed = 0;
  sim_corrupt->add_option("--in", simc_in, "input text")->required();
  sim_corrupt->add_option("--out", simc_out, "output text")->required();
  sim_corrupt->add_option("--rate", simc_rate, "per-word corruption probability");
  sim_corrupt->add_option("--seed", simc_seed, "random seed");
  sim_corrupt->callback([&] {
    std::ostringstream out;
    std::uint64_t line_index = 0;
    for (const std::string& line : read_lines(simc_in))
      out << rasm::utf8_encode(rasm::corrupt_text(rasm::utf8_decode(line),
                                                  simc_rate,
                                                  simc_seed + line_index++))
          << "\n";
    write_file(simc_out, out.str());
  });

  auto* sim_augment = sim_cmd->add_subcommand("augment", "image augmentation");
  std::string sima_in, sima_out;
  rasm::AugmentConfig sima_cfg;
  sim_augment->add_option("--in", sima_in, "input PGM")->required();
  sim_augment->add_option("--out", sima_out, "output PGM")->required();
  sim_augment->add_option("--rot-min", sima_cfg.rotation_min_deg, "min rotation (deg)");
  sim_augment->add_option("--rot-max", sima_cfg.rotation_max_deg, "max rotation (deg)");
  sim_augment->add_option("--stretch-min", sima_cfg.stretch_min, "min horizontal stretch");
  sim_augment->add_option("--stretch-max", sima_cfg.stretch_max, "max horizontal stretch");
  sim_augment->add_option("--brightness-min", sima_cfg.brightness_min, "min brightness delta");
  sim_augment->add_option("--brightness-max", sima_cfg.brightness_max, "max brightness delta");
  sim_augment->add_option("--salt-pepper", sima_cfg.salt_pepper_density, "impulse noise density");
  sim_augment->add_option("--crop-max", sima_cfg.crop_max, "max crop per side");
  sim_augment->add_option("--pad-max", sima_cfg.pad_max, "max pad per side");
  sim_augment->add_option("--seed", sima_cfg.seed, "random seed");
  sim_augment->callback([&] {
    rasm::write_pgm(rasm::augment_image(rasm::read_pgm(sima_in), sima_cfg), sima_out);
  });

  auto* sim_page = sim_cmd->add_subcommand("page", "synthetic page with line ground truth");
  std::string simp_out, simp_truth;
  int simp_lines = 5;
  std::uint64_t simp_seed = 0;
  rasm::PageGeometry simp_geo;
  sim_page->add_option("--lines", simp_lines, "band count")->required();
  sim_page->add_option("--out", simp_out, "output PBM page")->required();
  sim_page->add_option("--truth", simp_truth, "ground-truth annotation file");
  sim_page->add_option("--width", simp_geo.width, "page width");
  sim_page->add_option("--height", simp_geo.height, "page height");
  sim_page->add_option("--min-band", simp_geo.min_band_height, "min band height");
  sim_page->add_option("--max-band", simp_geo.max_band_height, "max band height");
  sim_page->add_option("--min-gap", simp_geo.min_gap, "min gap");
  sim_page->add_option("--max-gap", simp_geo.max_gap, "max gap");
  sim_page->add_option("--seed", simp_seed, "random seed");
  sim_page->callback([&] {
    const auto [page, truth] = rasm::synth_page(simp_lines, simp_geo, simp_seed);
    rasm::write_pbm(page, simp_out);
    if (!simp_truth.empty()) rasm::write_regions(truth, simp_truth);
  });

  // pipeline
  auto* pipeline_cmd = app.add_subcommand("pipeline", "run the full pipeline");
  std::string pl_config, pl_page, pl_emissions, pl_refs, pl_out;
  std::vector<std::string> pl_sets;
  pipeline_cmd->add_option("--config", pl_config, "config file (section.key = value)");
  pipeline_cmd->add_option("--set", pl_sets, "override, e.g. --set decode.beam_width=8");
  pipeline_cmd->add_option("--page", pl_page, "input PGM page");
  pipeline_cmd->add_option("--emissions", pl_emissions, "file listing EMAT paths");
  pipeline_cmd->add_option("--refs", pl_refs, "reference transcriptions (one per line)");
  pipeline_cmd->add_option("--out", pl_out, "output directory")->required();
  pipeline_cmd->callback([&] {
    rasm::PipelineConfig cfg;
    if (!pl_config.empty()) cfg = rasm::PipelineConfig::load(pl_config);
    for (const std::string& kv : pl_sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw rasm::ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.apply(kv.substr(0, eq), kv.substr(eq + 1));
    }
    rasm::PipelineInput input;
    input.page_path = pl_page;
    if (!pl_emissions.empty())
      for (const std::string& p : read_lines(pl_emissions))
        if (!p.empty()) input.emission_paths.push_back(p);
    if (!pl_refs.empty())
      for (const std::string& r : read_lines(pl_refs))
        input.references.push_back(rasm::utf8_decode(r));
    const rasm::PipelineOutcome outcome = rasm::run_pipeline(input, cfg, pl_out);
    if (outcome.report) {
      std::printf("cer\t%.6f\nwer\t%.6f\n", outcome.report->corpus_cer,
                  outcome.report->corpus_wer);
    }
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const rasm::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
