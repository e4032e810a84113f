#include "pic/config.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "pic/errors.hpp"

namespace pic {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

int parse_int(const std::string& key, const std::string& value) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
  return out;
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
  uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError(key + ": expected an unsigned integer, got '" + value + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
  return out;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

CodecCommand& baseline_by_name(std::vector<CodecCommand>& baselines, const std::string& name) {
  for (CodecCommand& c : baselines) {
    if (c.name == name) return c;
  }
  baselines.push_back({});
  baselines.back().name = name;
  return baselines.back();
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const TrainConfig& base) {
  ExperimentConfig cfg;
  cfg.train = base;
  std::set<std::string> seen;

  std::stringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!seen.insert(key).second) throw ConfigError("duplicate key: " + key);

    if (key == "paths.dataset_dir") {
      cfg.dataset_dir = value;
    } else if (key == "paths.model_file") {
      cfg.model_file = value;
    } else if (key == "paths.output_dir") {
      cfg.output_dir = value;
    } else if (key == "train.clip_len") {
      cfg.train.clip_len = parse_int(key, value);
    } else if (key == "train.learning_rate") {
      cfg.train.learning_rate = parse_double(key, value);
    } else if (key == "train.scale_group_lr") {
      cfg.train.scale_group_lr = parse_double(key, value);
    } else if (key == "train.beta1") {
      cfg.train.beta1 = parse_double(key, value);
    } else if (key == "train.beta2") {
      cfg.train.beta2 = parse_double(key, value);
    } else if (key == "train.epsilon") {
      cfg.train.epsilon = parse_double(key, value);
    } else if (key == "train.plateau_factor") {
      cfg.train.plateau_factor = parse_double(key, value);
    } else if (key == "train.plateau_patience") {
      cfg.train.plateau_patience = parse_int(key, value);
    } else if (key == "train.qp_list") {
      cfg.train.qp_list.clear();
      for (const std::string& item : split_list(value)) {
        cfg.train.qp_list.push_back(parse_int(key, item));
      }
    } else if (key == "train.lambda_list") {
      cfg.train.lambda_list.clear();
      for (const std::string& item : split_list(value)) {
        cfg.train.lambda_list.push_back(parse_double(key, item));
      }
    } else if (key == "train.epochs") {
      cfg.train.epochs = parse_int(key, value);
    } else if (key == "train.seed") {
      cfg.train.seed = parse_u64(key, value);
    } else if (key == "train.val_fraction") {
      cfg.train.val_fraction = parse_double(key, value);
    } else if (key == "quality.base_qp") {
      cfg.train.quality.base_qp = parse_int(key, value);
    } else if (key == "quality.qp_offsets") {
      const auto items = split_list(value);
      if (items.size() != cfg.train.quality.qp_offsets.size()) {
        throw ConfigError("quality.qp_offsets: expected 8 comma-separated integers");
      }
      for (size_t i = 0; i < items.size(); ++i) {
        cfg.train.quality.qp_offsets[i] = parse_int(key, items[i]);
      }
    } else if (key == "quality.lambda_min") {
      cfg.train.quality.lambda_min = parse_double(key, value);
    } else if (key == "quality.lambda_max") {
      cfg.train.quality.lambda_max = parse_double(key, value);
    } else if (key == "quality.reset_period") {
      cfg.train.quality.reset_period = parse_int(key, value);
    } else if (key == "quality.step_ref") {
      cfg.train.quality.step_ref = parse_double(key, value);
    } else if (key == "metrics.w_y") {
      cfg.weights.w_y = parse_double(key, value);
    } else if (key == "metrics.w_u") {
      cfg.weights.w_u = parse_double(key, value);
    } else if (key == "metrics.w_v") {
      cfg.weights.w_v = parse_double(key, value);
    } else if (key == "metrics.static_threshold") {
      cfg.static_threshold = parse_double(key, value);
    } else if (key.starts_with("baseline.")) {
      const std::string rest = key.substr(9);
      const size_t dot = rest.find('.');
      if (dot == std::string::npos || dot == 0) {
        throw ConfigError("baseline keys look like baseline.<name>.<field>: " + key);
      }
      const std::string name = rest.substr(0, dot);
      const std::string field = rest.substr(dot + 1);
      CodecCommand& cc = baseline_by_name(cfg.baselines, name);
      if (field == "encode") {
        cc.encode_template = value;
      } else if (field == "decode") {
        cc.decode_template = value;
      } else if (field == "quality_values") {
        cc.quality_values = split_list(value);
      } else if (field == "timeout_seconds") {
        cc.timeout_seconds = parse_double(key, value);
      } else {
        throw ConfigError("unknown baseline field: " + key);
      }
    } else {
      throw ConfigError("unknown key: " + key);
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        const TrainConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_experiment_config(text, base);
}

}  // namespace pic
