#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace cofenet {

// Token table with reserved entries. Index 0 is PAD, index 1 is UNK;
// everything else is assigned by build order (frequency desc, then
// lexicographic) so two builds over the same corpus agree exactly.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocabulary();

  int lookup(const std::string& token) const;  // UNK for unseen tokens
  const std::string& token(int index) const;
  int size() const { return static_cast<int>(index_to_token_.size()); }

  void add(const std::string& token);  // appends at the next free index

  // line-delimited "token<TAB>index"
  void save(std::ostream& out) const;
  static Vocabulary load(std::istream& in);

 private:
  std::map<std::string, int> token_to_index_;
  std::vector<std::string> index_to_token_;
};

Vocabulary build_vocab(const std::vector<std::vector<std::string>>& corpus, int min_count);

}  // namespace cofenet
