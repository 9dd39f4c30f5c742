#include "cofenet/labels.hpp"

#include <stdexcept>

namespace cofenet {

int label_from_name(const std::string& name) {
  for (int i = 0; i < static_cast<int>(kLabelNames.size()); ++i) {
    if (kLabelNames[i] == name) return i;
  }
  throw std::invalid_argument("unknown label name: \"" + name + "\"");
}

}  // namespace cofenet
