#include "cofenet/vocab.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cofenet {

Vocabulary::Vocabulary() {
  index_to_token_ = {"<pad>", "<unk>"};
  token_to_index_ = {{"<pad>", kPad}, {"<unk>", kUnk}};
}

int Vocabulary::lookup(const std::string& token) const {
  auto it = token_to_index_.find(token);
  return it == token_to_index_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int index) const {
  if (index < 0 || index >= size()) {
    throw std::out_of_range("vocab: index " + std::to_string(index) + " out of range (size " +
                            std::to_string(size()) + ")");
  }
  return index_to_token_[index];
}

void Vocabulary::add(const std::string& token) {
  if (token_to_index_.count(token)) return;
  token_to_index_[token] = size();
  index_to_token_.push_back(token);
}

void Vocabulary::save(std::ostream& out) const {
  for (int i = 0; i < size(); ++i) {
    out << index_to_token_[i] << '\t' << i << '\n';
  }
}

Vocabulary Vocabulary::load(std::istream& in) {
  Vocabulary v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("vocab: line " + std::to_string(lineno) + " has no tab");
    }
    const std::string token = line.substr(0, tab);
    const int index = std::stoi(line.substr(tab + 1));
    if (index < 2) continue;  // reserved entries are fixed
    if (index != v.size()) {
      throw std::runtime_error("vocab: line " + std::to_string(lineno) +
                               " index out of order: expected " + std::to_string(v.size()) +
                               ", got " + std::to_string(index));
    }
    v.add(token);
  }
  return v;
}

Vocabulary build_vocab(const std::vector<std::vector<std::string>>& corpus, int min_count) {
  if (corpus.empty()) {
    throw std::invalid_argument("build_vocab: empty corpus");
  }
  std::map<std::string, long long> counts;
  for (const auto& seq : corpus) {
    for (const auto& tok : seq) counts[tok] += 1;
  }
  std::vector<std::pair<std::string, long long>> entries(counts.begin(), counts.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary v;
  for (const auto& [tok, n] : entries) {
    if (n >= min_count) v.add(tok);
  }
  return v;
}

}  // namespace cofenet
