#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cofenet/labels.hpp"

namespace cofenet {

struct LabeledSequence {
  std::vector<std::string> tokens;
  std::vector<int> labels;  // label ids, aligned with tokens
};

// JSONL interchange: one {"tokens": [...], "labels": [...]} object per line,
// labels as names. Malformed lines are reported with their line number.
std::vector<LabeledSequence> load_jsonl(std::istream& in, const std::string& source_name);
std::vector<LabeledSequence> load_jsonl(const std::string& path);
void save_jsonl(std::ostream& out, const std::vector<LabeledSequence>& data);
void save_jsonl(const std::string& path, const std::vector<LabeledSequence>& data);

// Synthetic quotation corpus. Every quotation sentence carries exactly one
// source (1-4 tokens), one cue (1-2 tokens) and one content span; direct
// quotes wrap the content in quote-mark tokens labeled O, indirect quotes
// attach a complementizer after the cue. A fraction of sentences are
// distractors: cue verbs or quote marks used non-quotatively, all-O.
struct GeneratorConfig {
  int train_count = 2000;
  int valid_count = 250;
  int test_count = 250;
  std::uint64_t seed = 1;
  int content_min = 5;
  int content_max = 40;
  double fraction_direct = 0.5;     // quote-marked content
  double fraction_cue_first = 0.25; // of direct quotes: content fronted, cue before source
  double nesting_prob = 0.0;        // content embeds an inner quotation
  double distractor_rate = 0.1;
  double hard_token_rate = 0.1;     // content tokens drawn from names/cue verbs

  void validate() const;
};

struct CorpusSplits {
  std::vector<LabeledSequence> train;
  std::vector<LabeledSequence> valid;
  std::vector<LabeledSequence> test;
};

CorpusSplits generate(const GeneratorConfig& config);

}  // namespace cofenet
