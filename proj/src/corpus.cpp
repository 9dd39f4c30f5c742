#include "cofenet/corpus.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cofenet/metrics.hpp"
#include "cofenet/rng.hpp"
#include "json.hpp"

namespace cofenet {

std::vector<LabeledSequence> load_jsonl(std::istream& in, const std::string& source_name) {
  std::vector<LabeledSequence> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error(source_name + ":" + std::to_string(lineno) +
                               ": invalid JSON: " + e.what());
    }
    if (!rec.contains("tokens") || !rec["tokens"].is_array()) {
      throw std::runtime_error(source_name + ":" + std::to_string(lineno) +
                               ": missing \"tokens\" array");
    }
    if (!rec.contains("labels") || !rec["labels"].is_array()) {
      throw std::runtime_error(source_name + ":" + std::to_string(lineno) +
                               ": missing \"labels\" array");
    }
    LabeledSequence seq;
    for (const auto& t : rec["tokens"]) seq.tokens.push_back(t.get<std::string>());
    for (std::size_t i = 0; i < rec["labels"].size(); ++i) {
      const std::string name = rec["labels"][i].get<std::string>();
      int id;
      try {
        id = label_from_name(name);
      } catch (const std::invalid_argument&) {
        throw std::runtime_error(source_name + ":" + std::to_string(lineno) + ": token " +
                                 std::to_string(i) + ": unknown label \"" + name + "\"");
      }
      if (id == kStartLabel) {
        throw std::runtime_error(source_name + ":" + std::to_string(lineno) + ": token " +
                                 std::to_string(i) + ": <start> is not assignable");
      }
      seq.labels.push_back(id);
    }
    if (seq.tokens.size() != seq.labels.size()) {
      throw std::runtime_error(source_name + ":" + std::to_string(lineno) + ": " +
                               std::to_string(seq.tokens.size()) + " tokens vs " +
                               std::to_string(seq.labels.size()) + " labels");
    }
    out.push_back(std::move(seq));
  }
  return out;
}

std::vector<LabeledSequence> load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open corpus file: " + path);
  }
  return load_jsonl(in, path);
}

void save_jsonl(std::ostream& out, const std::vector<LabeledSequence>& data) {
  for (const LabeledSequence& seq : data) {
    nlohmann::json rec;
    rec["tokens"] = seq.tokens;
    std::vector<std::string> names;
    names.reserve(seq.labels.size());
    for (int l : seq.labels) names.push_back(kLabelNames[l]);
    rec["labels"] = names;
    out << rec.dump() << "\n";
  }
}

void save_jsonl(const std::string& path, const std::vector<LabeledSequence>& data) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write corpus file: " + path);
  }
  save_jsonl(out, data);
}

void GeneratorConfig::validate() const {
  if (train_count < 0 || valid_count < 0 || test_count < 0) {
    throw std::invalid_argument("generator: split counts must be >= 0");
  }
  if (content_min < 1 || content_max < content_min) {
    throw std::invalid_argument("generator: content length range must be positive");
  }
  for (double f : {fraction_direct, fraction_cue_first, nesting_prob, distractor_rate,
                   hard_token_rate}) {
    if (f < 0.0 || f > 1.0) {
      throw std::invalid_argument("generator: fractions must lie in [0, 1]");
    }
  }
}

namespace {

const std::vector<std::string> kFirstNames = {
    "john", "mary", "ahmed", "elena", "david", "sofia",  "liam",  "noor", "james",
    "anna", "peter", "lucia", "omar",  "grace", "henry",  "nadia", "emma", "felix",
    "iris", "oscar", "maya",  "leo",   "ruth",  "victor", "simon"};

const std::vector<std::string> kLastNames = {
    "smith", "johnson", "garcia", "chen",  "petrov", "kim",   "brown", "silva", "tanaka",
    "ali",   "novak",   "jones",  "weber", "rossi",  "lopez", "murphy", "khan", "berg"};

// multi-token source phrases, 2-4 tokens
const std::vector<std::vector<std::string>> kTitledSources = {
    {"the", "minister"},
    {"a", "spokesman"},
    {"the", "mayor"},
    {"the", "governor"},
    {"one", "senior", "official"},
    {"the", "market", "analyst"},
    {"her", "lawyer"},
    {"the", "committee", "chair"},
    {"a", "senior", "party", "aide"},
    {"the", "head", "coach"}};

const std::vector<std::string> kCueVerbs = {
    "said",    "says",     "stated",   "claimed",  "argued",    "noted",
    "added",   "warned",   "insisted", "suggested", "replied",  "declared",
    "admitted", "explained", "announced"};

const std::vector<std::vector<std::string>> kCuePhrases = {
    {"pointed", "out"}, {"made", "clear"}};

const std::vector<std::string> kPrefixes = {
    "yesterday", "on monday", "earlier today", "in a statement", "meanwhile",
    "after the meeting", "last week"};

const std::vector<std::string> kFiller = {
    "the",      "a",        "of",       "to",       "and",      "in",       "on",
    "for",      "with",     "will",     "would",    "could",    "must",     "might",
    "new",      "old",      "long",     "early",    "late",     "public",   "private",
    "local",    "national", "federal",  "economic", "political", "financial", "social",
    "plan",     "plans",    "policy",   "budget",   "deal",     "talks",    "vote",
    "bill",     "reform",   "measure",  "proposal", "project",  "report",   "review",
    "market",   "markets",  "economy",  "growth",   "rates",    "prices",   "taxes",
    "spending", "funding",  "support",  "pressure", "risk",     "risks",    "impact",
    "city",     "state",    "country",  "region",   "border",   "council",  "board",
    "committee", "party",   "campaign", "election", "deadline", "decision", "agreement",
    "people",   "workers",  "voters",   "students", "families", "companies", "banks",
    "be",       "been",     "remain",   "become",   "continue", "start",    "stop",
    "rise",     "fall",     "grow",     "slow",     "improve",  "change",   "move",
    "need",     "needs",    "take",     "make",     "keep",     "give",     "bring",
    "very",     "more",     "less",     "most",     "still",    "soon",     "now",
    "next",     "this",     "that",     "these",    "those",    "not",      "no",
    "year",     "years",    "month",    "week",     "time",     "day",      "future"};

const std::vector<std::vector<std::string>> kDistractors = {
    {"the", "report", "said", "nothing", "new", "about", "the", "budget", "."},
    {"the", "committee", "never", "said", "a", "word", "."},
    {"witnesses", "saw", "heavy", "traffic", "near", "the", "station", "."},
    {"the", "so", "called", "\"", "reform", "\"", "agenda", "stalled", "."},
    {"critics", "called", "the", "plan", "a", "\"", "disaster", "\"", "."},
    {"officials", "declined", "to", "comment", "on", "the", "talks", "."},
    {"the", "announcement", "added", "pressure", "on", "the", "markets", "."},
    {"nobody", "could", "explain", "the", "delay", "."},
    {"the", "deal", "was", "reported", "late", "last", "week", "."},
    {"rumors", "suggested", "otherwise", "for", "months", "."}};

struct SentenceBuilder {
  std::vector<std::string> tokens;
  SpanSet spans;

  void word(const std::string& w) { tokens.push_back(w); }
  void words(const std::vector<std::string>& ws) {
    for (const auto& w : ws) tokens.push_back(w);
  }
  void span_words(int component, const std::vector<std::string>& ws) {
    const int start = static_cast<int>(tokens.size());
    words(ws);
    spans.spans.push_back({component, start, static_cast<int>(tokens.size())});
  }
};

class Generator {
 public:
  Generator(const GeneratorConfig& cfg, Rng rng) : cfg_(cfg), rng_(rng) {}

  LabeledSequence sentence() {
    SentenceBuilder b;
    if (rng_.bernoulli(cfg_.distractor_rate)) {
      b.words(kDistractors[rng_.uniform_int(0, static_cast<int>(kDistractors.size()) - 1)]);
    } else {
      const bool direct = rng_.bernoulli(cfg_.fraction_direct);
      if (direct && rng_.bernoulli(cfg_.fraction_cue_first)) {
        content_first(b);
      } else {
        source_first(b, direct);
      }
    }
    LabeledSequence seq;
    seq.tokens = b.tokens;
    seq.labels = bio_from_spans(b.spans, static_cast<int>(b.tokens.size()));
    return seq;
  }

 private:
  const GeneratorConfig& cfg_;
  Rng rng_;

  const std::string& pick(const std::vector<std::string>& pool) {
    return pool[rng_.uniform_int(0, static_cast<int>(pool.size()) - 1)];
  }

  std::vector<std::string> source_phrase() {
    const int kind = rng_.uniform_int(0, 2);
    if (kind == 0) return {pick(kFirstNames)};
    if (kind == 1) return {pick(kFirstNames), pick(kLastNames)};
    return kTitledSources[rng_.uniform_int(0, static_cast<int>(kTitledSources.size()) - 1)];
  }

  std::vector<std::string> cue_phrase() {
    if (rng_.bernoulli(0.85)) return {pick(kCueVerbs)};
    return kCuePhrases[rng_.uniform_int(0, static_cast<int>(kCuePhrases.size()) - 1)];
  }

  std::vector<std::string> content_phrase(bool allow_nesting) {
    const int len = rng_.uniform_int(cfg_.content_min, cfg_.content_max);
    std::vector<std::string> out;
    if (allow_nesting && rng_.bernoulli(cfg_.nesting_prob) && len >= 6) {
      // inner quotation embedded in the content, labels stay I-content
      for (const auto& w : source_phrase()) out.push_back(w);
      out.push_back(pick(kCueVerbs));
      out.push_back("that");
      while (static_cast<int>(out.size()) < len) out.push_back(content_token());
      return out;
    }
    for (int i = 0; i < len; ++i) out.push_back(content_token());
    return out;
  }

  std::string content_token() {
    if (rng_.bernoulli(cfg_.hard_token_rate)) {
      // tokens that also occur as sources or cues elsewhere
      return rng_.bernoulli(0.5) ? pick(kFirstNames) : pick(kCueVerbs);
    }
    return pick(kFiller);
  }

  void maybe_prefix(SentenceBuilder& b) {
    if (rng_.bernoulli(0.4)) {
      std::istringstream words(pick(kPrefixes));
      std::string w;
      while (words >> w) b.word(w);
      b.word(",");
    }
  }

  void source_first(SentenceBuilder& b, bool direct) {
    maybe_prefix(b);
    b.span_words(0, source_phrase());
    b.span_words(1, cue_phrase());
    if (direct) {
      b.word(",");
      b.word("\"");
      b.span_words(2, content_phrase(true));
      b.word("\"");
    } else {
      b.word("that");
      b.span_words(2, content_phrase(true));
    }
    b.word(".");
  }

  void content_first(SentenceBuilder& b) {
    b.word("\"");
    b.span_words(2, content_phrase(true));
    b.word(",");
    b.word("\"");
    b.span_words(1, cue_phrase());
    b.span_words(0, source_phrase());
    b.word(".");
  }
};

std::vector<LabeledSequence> make_split(const GeneratorConfig& cfg, int count, Rng rng) {
  Generator gen(cfg, rng);
  std::vector<LabeledSequence> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(gen.sentence());
  return out;
}

}  // namespace

CorpusSplits generate(const GeneratorConfig& config) {
  config.validate();
  Rng root(config.seed);
  CorpusSplits splits;
  splits.train = make_split(config, config.train_count, root.fork(0xA11CE));
  splits.valid = make_split(config, config.valid_count, root.fork(0xB0B));
  splits.test = make_split(config, config.test_count, root.fork(0xCAFE));
  return splits;
}

}  // namespace cofenet
