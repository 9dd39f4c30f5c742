#pragma once

#include <array>
#include <string>

namespace cofenet {

// BIO scheme over the three quotation components. Label ids are fixed:
//   0 O, 1 B-source, 2 I-source, 3 B-cue, 4 I-cue, 5 B-content, 6 I-content
// Id 7 is the distinguished <start> state: it is a valid former-label input
// (the state before the first word) but is never assignable to a token.
constexpr int kNumLabels = 7;
constexpr int kStartLabel = 7;
constexpr int kNumComponents = 3;

inline const std::array<std::string, 8> kLabelNames = {
    "O", "B-source", "I-source", "B-cue", "I-cue", "B-content", "I-content", "<start>"};

inline const std::array<std::string, 3> kComponentNames = {"source", "cue", "content"};

int label_from_name(const std::string& name);  // throws on unknown names

inline bool is_begin(int label) { return label == 1 || label == 3 || label == 5; }
inline bool is_inside(int label) { return label == 2 || label == 4 || label == 6; }

// source=0, cue=1, content=2; -1 for O
inline int component_of(int label) { return label == 0 ? -1 : (label - 1) / 2; }
inline int begin_label(int component) { return 1 + 2 * component; }
inline int inside_label(int component) { return 2 + 2 * component; }

}  // namespace cofenet
