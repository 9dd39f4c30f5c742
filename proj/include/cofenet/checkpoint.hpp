#pragma once

#include <map>
#include <string>
#include <vector>

#include "cofenet/tensor.hpp"

namespace cofenet {

// Self-describing parameter container. Layout:
//   magic "COFE1\n"
//   u64 LE  config block length, then that many bytes of "key=value\n" lines
//   u32 LE  parameter count
//   per parameter: u32 LE name length, name bytes,
//                  u32 LE rows, u32 LE cols, rows*cols little-endian f64
inline const std::string kCheckpointMagic = "COFE1\n";

void save_checkpoint(const std::string& path, const std::map<std::string, std::string>& config,
                     const std::vector<ParamRef>& params);

struct LoadedCheckpoint {
  std::map<std::string, std::string> config;
  std::map<std::string, Tensor> params;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace cofenet
