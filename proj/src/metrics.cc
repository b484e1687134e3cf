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

#include "amralign/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "amralign/errors.h"
#include "json.hpp"

namespace amralign {

Prf MatchCounts::prf() const {
  Prf out;
  out.precision = predicted ? 100.0 * matched / static_cast<double>(predicted) : 0.0;
  out.recall = gold ? 100.0 * matched / static_cast<double>(gold) : 0.0;
  double sum = out.precision + out.recall;
  out.f1 = sum > 0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

namespace {

template <typename T>
double jaccard_of(std::vector<T> a, std::vector<T> b) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  if (a.empty() && b.empty()) return 1.0;
  std::vector<T> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  double inter = static_cast<double>(common.size());
  return inter / (static_cast<double>(a.size() + b.size()) - inter);
}

std::vector<std::string> sorted_keys(const AlignmentRecord& r) {
  auto keys = r.key_units();
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

bool exact_match(const AlignmentRecord& p, const AlignmentRecord& g) {
  return p.type == g.type && p.tokens == g.tokens && sorted_keys(p) == sorted_keys(g);
}

// Gold-ordered (pred, gold) pairs; throws when the id sets differ.
std::vector<std::pair<const AlignmentSet*, const AlignmentSet*>> pair_sentences(
    const std::vector<AlignmentSet>& pred, const std::vector<AlignmentSet>& gold) {
  std::map<std::string, const AlignmentSet*> by_id;
  for (const AlignmentSet& p : pred) {
    if (!by_id.emplace(p.id, &p).second) throw ValidationError("duplicate predicted sentence " + p.id);
  }
  std::vector<std::pair<const AlignmentSet*, const AlignmentSet*>> out;
  for (const AlignmentSet& g : gold) {
    auto it = by_id.find(g.id);
    if (it == by_id.end()) throw ValidationError("sentence-id mismatch: no prediction for " + g.id);
    out.emplace_back(it->second, &g);
    by_id.erase(it);
  }
  if (!by_id.empty()) {
    throw ValidationError("sentence-id mismatch: prediction for unknown sentence " + by_id.begin()->first);
  }
  return out;
}

void count_records(const AlignmentSet& pred, const AlignmentSet& gold, ScoreTable& table) {
  for (const auto& r : pred.records) {
    table.by_type[static_cast<std::size_t>(r.type)].predicted++;
    table.overall.predicted++;
  }
  for (const auto& r : gold.records) {
    table.by_type[static_cast<std::size_t>(r.type)].gold++;
    table.overall.gold++;
  }
}

void add_match(ScoreTable& table, AlignmentType t, double credit) {
  table.by_type[static_cast<std::size_t>(t)].matched += credit;
  table.overall.matched += credit;
}

void exact_sentence(const AlignmentSet& pred, const AlignmentSet& gold, ScoreTable& table) {
  count_records(pred, gold, table);
  std::vector<bool> used(gold.records.size(), false);
  for (const auto& p : pred.records) {
    for (std::size_t j = 0; j < gold.records.size(); ++j) {
      if (!used[j] && exact_match(p, gold.records[j])) {
        used[j] = true;
        add_match(table, p.type, 1.0);
        break;
      }
    }
  }
}

void partial_sentence(const AlignmentSet& pred, const AlignmentSet& gold, ScoreTable& table) {
  count_records(pred, gold, table);
  struct Candidate {
    double credit;
    std::size_t p;
    std::size_t g;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < pred.records.size(); ++i) {
    for (std::size_t j = 0; j < gold.records.size(); ++j) {
      double c = partial_credit(pred.records[i], gold.records[j]);
      if (c > 0) candidates.push_back({c, i, j});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.credit > b.credit; });
  std::vector<bool> pred_used(pred.records.size(), false), gold_used(gold.records.size(), false);
  for (const Candidate& c : candidates) {
    if (pred_used[c.p] || gold_used[c.g]) continue;
    pred_used[c.p] = gold_used[c.g] = true;
    add_match(table, pred.records[c.p].type, c.credit);
  }
}

}  // namespace

double jaccard(std::vector<std::string> a, std::vector<std::string> b) {
  return jaccard_of(std::move(a), std::move(b));
}
double jaccard(std::vector<int> a, std::vector<int> b) { return jaccard_of(std::move(a), std::move(b)); }

double partial_credit(const AlignmentRecord& pred, const AlignmentRecord& gold) {
  if (pred.type != gold.type) return 0.0;
  return jaccard(pred.key_units(), gold.key_units()) * jaccard(pred.tokens, gold.tokens);
}

ScoreTable exact_scores(const std::vector<AlignmentSet>& pred, const std::vector<AlignmentSet>& gold) {
  ScoreTable table;
  for (auto [p, g] : pair_sentences(pred, gold)) exact_sentence(*p, *g, table);
  return table;
}

ScoreTable exact_scores(const AlignmentSet& pred, const AlignmentSet& gold) {
  return exact_scores(std::vector{pred}, std::vector{gold});
}

ScoreTable partial_scores(const std::vector<AlignmentSet>& pred, const std::vector<AlignmentSet>& gold) {
  ScoreTable table;
  for (auto [p, g] : pair_sentences(pred, gold)) partial_sentence(*p, *g, table);
  return table;
}

ScoreTable partial_scores(const AlignmentSet& pred, const AlignmentSet& gold) {
  return partial_scores(std::vector{pred}, std::vector{gold});
}

MatchCounts span_counts(const std::vector<SpanBounds>& pred, const std::vector<SpanBounds>& gold) {
  std::set<SpanBounds> p(pred.begin(), pred.end()), g(gold.begin(), gold.end());
  MatchCounts c;
  c.predicted = p.size();
  c.gold = g.size();
  for (const auto& s : p) c.matched += g.count(s) ? 1.0 : 0.0;
  return c;
}

double span_f1(const std::vector<SpanBounds>& pred, const std::vector<SpanBounds>& gold) {
  return span_counts(pred, gold).prf().f1;
}

std::vector<SpanBounds> aligned_spans(const AlignmentSet& a, std::optional<AlignmentType> type) {
  std::set<SpanBounds> spans;
  for (const auto& r : a.records) {
    if (r.tokens.empty() || (type && r.type != *type)) continue;
    spans.emplace(r.tokens.front(), r.tokens.back() + 1);
  }
  return {spans.begin(), spans.end()};
}

double coverage(const AlignmentSet& a, const AmrGraph& g) {
  auto units = enumerate_units(g);
  if (units.empty()) return 100.0;
  std::set<std::string> named;
  for (const auto& r : a.records) {
    named.insert(r.nodes.begin(), r.nodes.end());
    named.insert(r.edges.begin(), r.edges.end());
  }
  std::size_t covered = std::count_if(units.begin(), units.end(),
                                      [&](const SemanticUnit& u) { return named.count(u.path) > 0; });
  return 100.0 * static_cast<double>(covered) / static_cast<double>(units.size());
}

EvalReport evaluate(const std::vector<AlignmentSet>& pred, const std::vector<AlignmentSet>& gold,
                    const std::vector<AmrGraph>& graphs) {
  auto pairs = pair_sentences(pred, gold);
  ScoreTable exact = exact_scores(pred, gold);
  ScoreTable partial = partial_scores(pred, gold);
  EvalReport report;
  MatchCounts all_spans;
  for (AlignmentType t : kAlignmentTypes) {
    MatchCounts spans;
    for (auto [p, g] : pairs) spans += span_counts(aligned_spans(*p, t), aligned_spans(*g, t));
    auto i = static_cast<std::size_t>(t);
    report.types[i] = {exact.by_type[i].prf(), partial.by_type[i].prf(), spans.prf().f1,
                       exact.by_type[i].predicted, exact.by_type[i].gold};
  }
  for (auto [p, g] : pairs) all_spans += span_counts(aligned_spans(*p), aligned_spans(*g));
  report.overall = {exact.overall.prf(), partial.overall.prf(), all_spans.prf().f1,
                    exact.overall.predicted, exact.overall.gold};
  if (!graphs.empty()) {
    std::map<std::string, const AmrGraph*> by_id;
    for (const AmrGraph& g : graphs) by_id[g.id()] = &g;
    double total = 0.0;
    std::size_t n = 0;
    for (auto [p, g] : pairs) {
      auto it = by_id.find(p->id);
      if (it == by_id.end()) throw ValidationError("no graph for sentence " + p->id);
      total += coverage(*p, *it->second);
      ++n;
    }
    report.coverage = n ? total / static_cast<double>(n) : 100.0;
  }
  return report;
}

std::vector<double> per_graph_series(const std::vector<AlignmentSet>& pred,
                                     const std::vector<AlignmentSet>& gold, SeriesKind kind) {
  std::vector<double> out;
  for (auto [p, g] : pair_sentences(pred, gold)) {
    ScoreTable t;
    exact_sentence(*p, *g, t);
    out.push_back(kind == SeriesKind::kMatches ? t.overall.matched : t.overall.prf().f1);
  }
  return out;
}

namespace {

nlohmann::ordered_json prf_json(const Prf& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

nlohmann::ordered_json type_json(const TypeReport& t) {
  return {{"exact", prf_json(t.exact)},
          {"partial", prf_json(t.partial)},
          {"span_f1", t.span_f1},
          {"predicted", t.predicted},
          {"gold", t.gold}};
}

}  // namespace

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  for (AlignmentType t : kAlignmentTypes) {
    j["types"][std::string(type_name(t))] = type_json(types[static_cast<std::size_t>(t)]);
  }
  j["overall"] = type_json(overall);
  if (coverage) j["coverage"] = *coverage;
  for (const auto& s : significance) {
    j["significance"].push_back({{"a", s.system_a},
                                 {"b", s.system_b},
                                 {"statistic", s.test.statistic},
                                 {"p", s.test.p_value},
                                 {"n", s.test.n},
                                 {"exact", s.test.exact}});
  }
  return j.dump(2) + "\n";
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %7s %7s %7s | %7s %7s %7s | %7s %6s %6s\n", "type", "P", "R",
                "F1", "pP", "pR", "pF1", "spanF1", "pred", "gold");
  out << line;
  auto row = [&](std::string_view name, const TypeReport& t) {
    std::snprintf(line, sizeof line,
                  "%-12s %7.2f %7.2f %7.2f | %7.2f %7.2f %7.2f | %7.2f %6zu %6zu\n",
                  std::string(name).c_str(), t.exact.precision, t.exact.recall, t.exact.f1,
                  t.partial.precision, t.partial.recall, t.partial.f1, t.span_f1, t.predicted, t.gold);
    out << line;
  };
  for (AlignmentType t : kAlignmentTypes) row(type_name(t), types[static_cast<std::size_t>(t)]);
  row("overall", overall);
  if (coverage) {
    std::snprintf(line, sizeof line, "coverage %.2f\n", *coverage);
    out << line;
  }
  for (const auto& s : significance) {
    std::snprintf(line, sizeof line, "wilcoxon %s vs %s: W=%.1f p=%.4f n=%zu (%s)\n",
                  s.system_a.c_str(), s.system_b.c_str(), s.test.statistic, s.test.p_value, s.test.n,
                  s.test.exact ? "exact" : "normal");
    out << line;
  }
  return out.str();
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    std::size_t exact_max_n) {
  if (a.size() != b.size()) throw ValidationError("paired samples differ in length");
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] - b[i] != 0.0) d.push_back(a[i] - b[i]);
  }
  if (d.empty()) throw DegenerateError("no nonzero differences");
  if (d.size() < 6) {
    throw DegenerateError("too few nonzero differences (" + std::to_string(d.size()) + " < 6)");
  }
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return std::abs(d[x]) < std::abs(d[y]); });
  // Doubled mid-ranks stay integral.
  std::vector<long> rank2(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    long mid2 = static_cast<long>(i + j + 2);  // 2 * ((i+1 + j+1) / 2)
    for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = mid2;
    double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  long w_plus2 = 0, total2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total2 += rank2[i];
    if (d[i] > 0) w_plus2 += rank2[i];
  }

  WilcoxonResult res;
  res.n = n;
  res.w_plus = w_plus2 / 2.0;
  res.w_minus = (total2 - w_plus2) / 2.0;
  res.statistic = std::min(res.w_plus, res.w_minus);
  if (n <= exact_max_n) {
    std::vector<double> count(static_cast<std::size_t>(total2) + 1, 0.0);
    count[0] = 1.0;
    long reach = 0;
    for (long r : rank2) {
      for (long s = reach; s >= 0; --s) count[static_cast<std::size_t>(s + r)] += count[static_cast<std::size_t>(s)];
      reach += r;
    }
    double all = std::ldexp(1.0, static_cast<int>(n));
    double lower = 0.0, upper = 0.0;
    for (long s = 0; s <= total2; ++s) {
      if (s <= w_plus2) lower += count[static_cast<std::size_t>(s)];
      if (s >= w_plus2) upper += count[static_cast<std::size_t>(s)];
    }
    res.exact = true;
    res.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / all);
  } else {
    double nn = static_cast<double>(n);
    double mean = nn * (nn + 1) / 4.0;
    double var = nn * (nn + 1) * (2 * nn + 1) / 24.0 - tie_term / 48.0;
    res.z = (res.w_plus - mean) / std::sqrt(var);
    res.p_value = std::min(1.0, std::erfc(std::abs(res.z) / std::sqrt(2.0)));
  }
  return res;
}

AlignMatrix build_align_matrix(const AlignmentSet& a, const SentenceTokens& st,
                               const GraphPosMap& gp, std::span<const SemanticUnit> units,
                               bool mask_punctuation) {
  std::map<std::string, std::set<int>> words_of_unit;
  for (const auto& r : a.records) {
    std::vector<std::string> named = r.edges;
    if (r.type != AlignmentType::kReentrancy) named.insert(named.end(), r.nodes.begin(), r.nodes.end());
    for (const auto& u : named) words_of_unit[u].insert(r.tokens.begin(), r.tokens.end());
  }
  const std::size_t rows = gp.size(), cols = st.encoder_tokens.size();
  AlignMatrix am{Matrix(rows, cols), std::vector<char>(rows * cols, 0)};
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& word = st.word_of_token[c];
      bool masked = !gp[r] || !word || (mask_punctuation && is_punctuation(st.words[*word]));
      if (masked) {
        am.masked[r * cols + c] = 1;
        continue;
      }
      if (*gp[r] >= units.size()) throw ValidationError("graph position map names an unknown unit");
      auto it = words_of_unit.find(units[*gp[r]].path);
      if (it != words_of_unit.end() && it->second.count(static_cast<int>(*word))) am.values(r, c) = 1.0;
    }
  }
  return am;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson: vectors differ in length");
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) throw DegenerateError("pearson: fewer than two points");
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateError("pearson: constant vector");
  return sxy / std::sqrt(sxx * syy);
}

double pearson_correlation(const ScoreMatrix& m, const AlignMatrix& am) {
  if (m.values.rows() != am.values.rows() || m.values.cols() != am.values.cols()) {
    throw ValidationError("score matrix and alignment matrix differ in shape");
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < am.masked.size(); ++i) {
    if (am.masked[i]) continue;
    x.push_back(m.values.data()[i]);
    y.push_back(am.values.data()[i]);
  }
  return pearson(x, y);
}

CorrelationGrid correlation_heatmap(std::span<const CorrelationSample> samples) {
  CorrelationGrid grid;
  for (const auto& s : samples) {
    for (const ScoreMatrix& m : *s.matrices) {
      grid.n_layers = std::max(grid.n_layers, m.layer + 1);
      grid.n_heads = std::max(grid.n_heads, m.head + 1);
    }
  }
  std::size_t cells = static_cast<std::size_t>(grid.n_layers * grid.n_heads);
  std::vector<std::vector<double>> xs(cells), ys(cells);
  for (const auto& s : samples) {
    for (const ScoreMatrix& m : *s.matrices) {
      if (m.head < 0) continue;
      if (m.values.rows() != s.align->values.rows() || m.values.cols() != s.align->values.cols()) {
        throw ValidationError("score matrix and alignment matrix differ in shape");
      }
      auto cell = static_cast<std::size_t>(m.layer * grid.n_heads + m.head);
      for (std::size_t i = 0; i < s.align->masked.size(); ++i) {
        if (s.align->masked[i]) continue;
        xs[cell].push_back(m.values.data()[i]);
        ys[cell].push_back(s.align->values.data()[i]);
      }
    }
  }
  grid.r.assign(cells, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t c = 0; c < cells; ++c) {
    try {
      grid.r[c] = pearson(xs[c], ys[c]);
    } catch (const DegenerateError&) {
    }
  }
  return grid;
}

CorrelationGrid correlation_heatmap(const std::vector<ScoreMatrix>& matrices, const AlignMatrix& am) {
  CorrelationSample sample{&matrices, &am};
  return correlation_heatmap(std::span<const CorrelationSample>(&sample, 1));
}

std::string render_heatmap_svg(const CorrelationGrid& grid, const std::string& title) {
  constexpr int kCell = 34, kLeft = 56, kTop = 44;
  int width = kLeft + grid.n_heads * kCell + 16;
  int height = kTop + grid.n_layers * kCell + 24;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) svg << "<text x=\"" << kLeft << "\" y=\"16\" font-size=\"12\">" << title << "</text>\n";
  for (int h = 0; h < grid.n_heads; ++h) {
    svg << "<text x=\"" << kLeft + h * kCell + kCell / 2 << "\" y=\"" << kTop - 6
        << "\" text-anchor=\"middle\">" << h << "</text>\n";
  }
  char buf[64];
  for (int l = 0; l < grid.n_layers; ++l) {
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + l * kCell + kCell / 2 + 3
        << "\" text-anchor=\"end\">L" << l << "</text>\n";
    for (int h = 0; h < grid.n_heads; ++h) {
      double r = grid.at(l, h);
      int red = 200, green = 200, blue = 200;
      if (!std::isnan(r)) {
        double v = std::clamp(r, -1.0, 1.0);
        // white at 0, red towards +1, blue towards -1
        int fade = static_cast<int>(255 * (1.0 - std::abs(v)));
        red = v >= 0 ? 255 : fade;
        blue = v >= 0 ? fade : 255;
        green = fade;
      }
      std::snprintf(buf, sizeof buf, "#%02x%02x%02x", red, green, blue);
      svg << "<rect x=\"" << kLeft + h * kCell << "\" y=\"" << kTop + l * kCell << "\" width=\"" << kCell
          << "\" height=\"" << kCell << "\" fill=\"" << buf << "\" stroke=\"#ffffff\"/>\n";
      if (std::isnan(r)) {
        std::snprintf(buf, sizeof buf, "n/a");
      } else {
        std::snprintf(buf, sizeof buf, "%.2f", r);
      }
      svg << "<text x=\"" << kLeft + h * kCell + kCell / 2 << "\" y=\"" << kTop + l * kCell + kCell / 2 + 3
          << "\" text-anchor=\"middle\" font-size=\"8\">" << buf << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string grid_csv(const CorrelationGrid& grid) {
  std::ostringstream out;
  out << "layer";
  for (int h = 0; h < grid.n_heads; ++h) out << ",h" << h;
  out << '\n';
  char buf[32];
  for (int l = 0; l < grid.n_layers; ++l) {
    out << l;
    for (int h = 0; h < grid.n_heads; ++h) {
      double r = grid.at(l, h);
      if (std::isnan(r)) {
        out << ",nan";
      } else {
        std::snprintf(buf, sizeof buf, ",%.6f", r);
        out << buf;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace amralign
