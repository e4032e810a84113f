// Flat key=value experiment configuration with dotted sections:
//
//   paths.dataset_dir = /data/scenes
//   train.learning_rate = 1e-2
//   quality.base_qp = 32
//   metrics.static_threshold = 0.01
//   baseline.x264.encode = x264 --crf {quality} -o {output} {input}
//
// Full-line comments start with '#'. Unknown keys are hard errors.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pic/extern_codec.hpp"
#include "pic/metrics.hpp"
#include "pic/trainer.hpp"

namespace pic {

struct ExperimentConfig {
  std::string dataset_dir;
  std::string model_file;
  std::string output_dir;
  TrainConfig train;  // train.* and quality.* keys land here
  DistortionWeights weights;
  double static_threshold = 0.01;
  std::vector<CodecCommand> baselines;  // baseline.<name>.* keys, file order
};

// `base` seeds the train block so a preset can be refined by the file.
// Throws ConfigError on unknown keys, duplicates, or unparseable values.
ExperimentConfig parse_experiment_config(const std::string& text, const TrainConfig& base = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        const TrainConfig& base = {});

}  // namespace pic
