/* Copyright 2026 The amralign Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Command-line front end: align, eval, significance, correlate, loss-check,
// linearize.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "amralign/aam1.h"
#include "amralign/alignment.h"
#include "amralign/errors.h"
#include "amralign/extraction.h"
#include "amralign/guided_loss.h"
#include "amralign/linearization.h"
#include "amralign/metrics.h"
#include "amralign/penman.h"
#include "amralign/rules.h"
#include "amralign/score_matrix.h"
#include "amralign/sentence.h"

namespace amralign {
namespace {

namespace fs = std::filesystem;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

// A graph with the words of its sentence.
struct Item {
  AmrGraph graph;
  std::vector<std::string> words;
};

std::vector<Item> load_items(const std::string& amr, const std::string& sents) {
  std::vector<Item> items;
  for (AmrGraph& g : read_penman_file(amr)) items.push_back({std::move(g), {}});
  std::vector<std::string> lines;
  if (!sents.empty()) {
    lines = read_lines(sents);
    if (lines.size() != items.size()) {
      throw ValidationError(sents + " has " + std::to_string(lines.size()) + " sentences for " +
                            std::to_string(items.size()) + " graphs");
    }
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string text = sents.empty() ? items[i].graph.sentence() : lines[i];
    if (text.empty()) throw ValidationError("graph " + items[i].graph.id() + " has no sentence");
    if (items[i].graph.id().empty()) items[i].graph.set_meta("id", std::to_string(i));
    items[i].words = word_tokenize(text);
  }
  return items;
}

std::map<std::string, aam1::Bundle> bundles_by_id(const std::string& dir) {
  std::map<std::string, aam1::Bundle> out;
  for (aam1::Bundle& b : aam1::load_bundle_dir(dir)) {
    std::string id = b.sentence_id;
    if (!out.emplace(id, std::move(b)).second) throw ValidationError("two bundles for sentence " + id);
  }
  return out;
}

const aam1::Bundle& bundle_for(const std::map<std::string, aam1::Bundle>& bundles, const std::string& id) {
  auto it = bundles.find(id);
  if (it == bundles.end()) throw ValidationError("no attention bundle for sentence " + id);
  return it->second;
}

std::map<std::string, AlignmentSet> sets_by_id(const std::vector<AlignmentSet>& sets) {
  std::map<std::string, AlignmentSet> out;
  for (const AlignmentSet& s : sets) out[s.id] = s;
  return out;
}

// Alignment matrix of one sentence over its bundle's model tokens.
AlignMatrix align_matrix_for(const Item& item, const aam1::Bundle& b, const AlignmentSet& gold,
                             bool mask_punctuation) {
  Linearization lin = linearize(item.graph);
  GraphPosMap gp = map_output_tokens(lin, b.decoder_tokens);
  SentenceTokens st = map_input_tokens(b.encoder_tokens, item.words);
  return build_align_matrix(gold, st, gp, lin.units, mask_punctuation);
}

struct AlignOptions {
  std::string amr, sents, matrices, layers = "0:4", heads, mix_weights, rules = "all", spans, lexicon;
  std::string standard = "leamr", output;
  bool no_rules = false;
};

int run_align(const AlignOptions& o) {
  std::vector<Item> items = load_items(o.amr, o.sents);
  auto bundles = bundles_by_id(o.matrices);
  ExtractionConfig cfg;
  cfg.standard = parse_standard(o.standard);
  cfg.rules = o.no_rules ? RuleSet::none() : RuleSet::parse(o.rules);
  std::vector<SpanList> given;
  if (!o.spans.empty()) {
    given = read_span_file(o.spans);
    if (given.size() != items.size()) throw ValidationError("span file and AMR file differ in length");
  }
  Lexicon lexicon = o.lexicon.empty() ? Lexicon{} : Lexicon::load(o.lexicon);
  std::optional<MixWeights> mix;
  if (!o.mix_weights.empty()) mix = aam1::read_mix_weights(o.mix_weights);
  LayerRange range = LayerRange::parse(o.layers);
  std::vector<int> heads = o.heads.empty() ? std::vector<int>{} : parse_int_list(o.heads);

  std::vector<AlignmentSet> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& item = items[i];
    const aam1::Bundle& b = bundle_for(bundles, item.graph.id());
    ScoreMatrix reduced = mix ? scalar_mix(b.layer(mix->layer), *mix) : sum_layers(b.matrices, range, heads);
    SpanList spans = given.empty() ? segment_spans(item.words, lexicon) : given[i];
    if (!given.empty() && span_words(spans) != item.words) {
      throw ValidationError("span file words differ from sentence " + item.graph.id());
    }
    Extraction ex = align_sentence(item.graph, spans, reduced, cfg);
    for (const auto& w : ex.warnings) std::cerr << "warning: " << item.graph.id() << ": " << w << "\n";
    out.push_back(std::move(ex.alignments));
  }
  write_output(o.output, write_alignments(out, cfg.standard));
  return 0;
}

int run_eval(const std::string& pred, const std::string& gold, const std::string& standard,
             const std::string& report, const std::string& amr, const std::string& output) {
  Standard s = parse_standard(standard);
  std::vector<AmrGraph> graphs;
  if (!amr.empty()) graphs = read_penman_file(amr);
  EvalReport r = evaluate(read_alignment_file(pred, s), read_alignment_file(gold, s), graphs);
  if (report != "json" && report != "text") throw Error("unknown report format '" + report + "'");
  write_output(output, report == "json" ? r.to_json() : r.to_text());
  return 0;
}

int run_significance(const std::string& a, const std::string& b, const std::string& gold,
                     const std::string& standard, const std::string& series, std::size_t exact_max_n) {
  Standard s = parse_standard(standard);
  SeriesKind kind;
  if (series == "matches") {
    kind = SeriesKind::kMatches;
  } else if (series == "f1") {
    kind = SeriesKind::kF1;
  } else {
    throw Error("unknown series '" + series + "'");
  }
  auto g = read_alignment_file(gold, s);
  auto xa = per_graph_series(read_alignment_file(a, s), g, kind);
  auto xb = per_graph_series(read_alignment_file(b, s), g, kind);
  WilcoxonResult r = wilcoxon_signed_rank(xa, xb, exact_max_n);
  std::printf("W=%.1f W+=%.1f W-=%.1f n=%zu p=%.6g method=%s\n", r.statistic, r.w_plus, r.w_minus, r.n,
              r.p_value, r.exact ? "exact" : "normal");
  return 0;
}

int run_correlate(const std::string& matrices, const std::string& gold_path, const std::string& amr,
                  const std::string& sents, const std::string& standard, const std::string& svg,
                  const std::string& csv, bool keep_punctuation) {
  std::vector<Item> items = load_items(amr, sents);
  auto bundles = bundles_by_id(matrices);
  auto gold = sets_by_id(read_alignment_file(gold_path, parse_standard(standard)));
  std::vector<AlignMatrix> aligns;
  std::vector<const aam1::Bundle*> used;
  aligns.reserve(items.size());
  for (const Item& item : items) {
    auto g = gold.find(item.graph.id());
    if (g == gold.end()) throw ValidationError("no gold alignment for sentence " + item.graph.id());
    const aam1::Bundle& b = bundle_for(bundles, item.graph.id());
    aligns.push_back(align_matrix_for(item, b, g->second, !keep_punctuation));
    used.push_back(&b);
  }
  std::vector<CorrelationSample> samples;
  for (std::size_t i = 0; i < aligns.size(); ++i) samples.push_back({&used[i]->matrices, &aligns[i]});
  CorrelationGrid grid = correlation_heatmap(samples);
  write_output(svg, render_heatmap_svg(grid, "Pearson r per layer and head"));
  if (!csv.empty()) write_output(csv, grid_csv(grid));
  int best_l = -1, best_h = -1;
  for (int l = 0; l < grid.n_layers; ++l) {
    for (int h = 0; h < grid.n_heads; ++h) {
      double r = grid.at(l, h);
      if (!std::isnan(r) && (best_l < 0 || r > grid.at(best_l, best_h))) {
        best_l = l;
        best_h = h;
      }
    }
  }
  if (best_l >= 0) std::fprintf(stderr, "best head: layer %d head %d r=%.4f\n", best_l, best_h, grid.at(best_l, best_h));
  return 0;
}

struct LossOptions {
  std::string matrices, gold, amr, sents, standard = "leamr", heads, output, scale = "declared";
  int layer = 3;
  bool fit = false;
  int steps = 500;
  double lr = 0.1;
  double eps = 1e-5;
};

int run_loss_check(const LossOptions& o) {
  std::vector<Item> items = load_items(o.amr, o.sents);
  auto bundles = bundles_by_id(o.matrices);
  auto gold = sets_by_id(read_alignment_file(o.gold, parse_standard(o.standard)));
  std::vector<int> subset = o.heads.empty() ? std::vector<int>{} : parse_int_list(o.heads);
  std::vector<LossInput> dataset;
  for (const Item& item : items) {
    auto g = gold.find(item.graph.id());
    if (g == gold.end()) throw ValidationError("no gold alignment for sentence " + item.graph.id());
    const aam1::Bundle& b = bundle_for(bundles, item.graph.id());
    if (o.layer < 0 || o.layer >= b.n_layers) throw ValidationError("layer out of range for " + b.sentence_id);
    LossInput inp;
    for (const ScoreMatrix& m : b.layer(o.layer)) inp.head_mats.push_back(m.values);
    inp.mix = MixWeights::uniform(b.n_heads, subset, o.layer);
    inp.align = align_targets(align_matrix_for(item, b, g->second, true));
    if (o.scale == "declared") {
      inp.scale = b.scale;
    } else if (o.scale == "pre") {
      inp.scale = aam1::Scale::kPreSoftmax;
    } else if (o.scale == "post") {
      inp.scale = aam1::Scale::kPostSoftmax;
    } else {
      throw Error("unknown scale '" + o.scale + "'");
    }
    double mass = inp.align.sum();
    if (mass == 0.0) {
      std::cerr << "warning: " << item.graph.id() << ": no supervised rows, skipped\n";
      continue;
    }
    dataset.push_back(std::move(inp));
  }
  if (dataset.empty()) throw DegenerateError("no sentence has supervised rows");

  double worst = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) worst = std::max(worst, grad_check(dataset[i], o.eps, i));
  MixWeights w = dataset.front().mix;
  std::printf("sentences=%zu loss=%.9g max_grad_rel_error=%.3g\n", dataset.size(), mean_loss(dataset, w), worst);
  if (o.fit) {
    w = fit_mix(dataset, o.steps, o.lr);
    std::printf("fitted loss=%.9g gamma=%.6g\n", mean_loss(dataset, w), w.gamma);
    auto s = w.softmax();
    auto heads = w.heads();
    for (std::size_t k = 0; k < heads.size(); ++k) std::printf("  head %d weight %.6f\n", heads[k], s[k]);
  }
  if (!o.output.empty()) write_output(o.output, aam1::mix_weights_json(w));
  return 0;
}

int run_linearize(const std::string& amr) {
  for (const AmrGraph& g : read_penman_file(amr)) {
    Linearization lin = linearize(g);
    std::string line = g.id() + "\t";
    for (std::size_t i = 0; i < lin.tokens.size(); ++i) line += (i ? " " : "") + lin.tokens[i];
    std::cout << line << "\n";
  }
  return 0;
}

}  // namespace
}  // namespace amralign

int main(int argc, char** argv) {
  using namespace amralign;
  CLI::App app{"AMR alignment from cross-attention"};
  app.require_subcommand(1);

  AlignOptions ao;
  auto* align = app.add_subcommand("align", "Extract alignments from attention bundles");
  align->add_option("--amr", ao.amr, "Penman file")->required();
  align->add_option("--sents", ao.sents, "Sentences, one per line (default: # ::snt)");
  align->add_option("--matrices", ao.matrices, "Directory of AAM1 bundles")->required();
  align->add_option("--layers", ao.layers, "Layer range lo:hi summed over heads")->capture_default_str();
  align->add_option("--heads", ao.heads, "Comma-separated heads to sum");
  align->add_option("--mix-weights", ao.mix_weights, "AAM1-mix file; replaces the layer sum");
  align->add_flag("--no-rules", ao.no_rules, "Disable every rule");
  align->add_option("--rules", ao.rules, "Rules to apply, e.g. r1,r2,r6")->capture_default_str();
  align->add_option("--spans", ao.spans, "Span file overriding segmentation");
  align->add_option("--lexicon", ao.lexicon, "Multiword expression lexicon");
  align->add_option("--standard", ao.standard, "isi or leamr")->capture_default_str();
  align->add_option("-o,--output", ao.output, "Output file (default stdout)");

  std::string pred, gold, standard = "leamr", report = "text", amr, output;
  auto* eval = app.add_subcommand("eval", "Score predicted alignments against gold");
  eval->add_option("--pred", pred)->required();
  eval->add_option("--gold", gold)->required();
  eval->add_option("--standard", standard)->capture_default_str();
  eval->add_option("--report", report, "json or text")->capture_default_str();
  eval->add_option("--amr", amr, "Penman file for coverage");
  eval->add_option("-o,--output", output);

  std::string sig_a, sig_b, series = "matches";
  std::size_t exact_max_n = 25;
  auto* sig = app.add_subcommand("significance", "Wilcoxon signed-rank test of two systems");
  sig->add_option("--a", sig_a)->required();
  sig->add_option("--b", sig_b)->required();
  sig->add_option("--gold", gold)->required();
  sig->add_option("--standard", standard)->capture_default_str();
  sig->add_option("--series", series, "matches or f1 per graph")->capture_default_str();
  sig->add_option("--exact-max-n", exact_max_n)->capture_default_str();

  std::string matrices, sents, svg, csv;
  bool keep_punct = false;
  auto* corr = app.add_subcommand("correlate", "Pearson r of every head against gold alignments");
  corr->add_option("--matrices", matrices)->required();
  corr->add_option("--gold", gold)->required();
  corr->add_option("--amr", amr)->required();
  corr->add_option("--sents", sents);
  corr->add_option("--standard", standard)->capture_default_str();
  corr->add_option("-o,--output", svg, "Heatmap SVG")->required();
  corr->add_option("--csv", csv, "Grid as CSV");
  corr->add_flag("--keep-punctuation", keep_punct);

  LossOptions lo;
  auto* loss = app.add_subcommand("loss-check", "Guided loss value, gradient check and mix fit");
  loss->add_option("--matrices", lo.matrices)->required();
  loss->add_option("--gold", lo.gold)->required();
  loss->add_option("--amr", lo.amr)->required();
  loss->add_option("--sents", lo.sents);
  loss->add_option("--standard", lo.standard)->capture_default_str();
  loss->add_option("--layer", lo.layer)->capture_default_str();
  loss->add_option("--heads", lo.heads, "Head subset");
  loss->add_option("--scale", lo.scale, "declared, pre or post")->capture_default_str();
  loss->add_flag("--fit", lo.fit, "Fit the mix weights");
  loss->add_option("--steps", lo.steps)->capture_default_str();
  loss->add_option("--lr", lo.lr)->capture_default_str();
  loss->add_option("--eps", lo.eps)->capture_default_str();
  loss->add_option("-o,--output", lo.output, "Write the mix weights manifest");

  auto* lin = app.add_subcommand("linearize", "Print the linearization of every graph");
  lin->add_option("--amr", amr)->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*align) return run_align(ao);
    if (*eval) return run_eval(pred, gold, standard, report, amr, output);
    if (*sig) return run_significance(sig_a, sig_b, gold, standard, series, exact_max_n);
    if (*corr) return run_correlate(matrices, gold, amr, sents, standard, svg, csv, keep_punct);
    if (*loss) return run_loss_check(lo);
    if (*lin) return run_linearize(amr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
