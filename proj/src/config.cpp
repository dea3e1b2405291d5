// SPDX-License-Identifier: Apache-2.0
#include "uqx/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "uqx/errors.hpp"

namespace uqx {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct IniData {
  // section -> key -> value, plus line numbers for diagnostics
  std::map<std::string, std::map<std::string, std::string>> sections;
};

IniData parse_ini(const std::string& text, std::vector<std::string>& errors) {
  IniData ini;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back("line " + std::to_string(lineno) + ": unterminated section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      ini.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      errors.push_back("line " + std::to_string(lineno) + ": empty key");
      continue;
    }
    if (section.empty()) {
      errors.push_back("line " + std::to_string(lineno) + ": key outside any [section]");
      continue;
    }
    if (!ini.sections[section].emplace(key, value).second)
      errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key +
                       "' in [" + section + "]");
  }
  return ini;
}

class Reader {
 public:
  Reader(const IniData& ini, std::vector<std::string>& errors) : ini_(ini), errors_(errors) {}

  bool has(const std::string& section, const std::string& key) const {
    auto s = ini_.sections.find(section);
    return s != ini_.sections.end() && s->second.count(key) > 0;
  }

  std::string str(const std::string& section, const std::string& key,
                  const std::string& fallback) {
    mark(section, key);
    auto s = ini_.sections.find(section);
    if (s == ini_.sections.end()) return fallback;
    auto it = s->second.find(key);
    return it == s->second.end() ? fallback : it->second;
  }

  double real(const std::string& section, const std::string& key, double fallback) {
    const std::string v = str(section, key, "");
    if (v.empty()) return fallback;
    try {
      std::size_t used = 0;
      const double out = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
      return out;
    } catch (const std::exception&) {
      errors_.push_back("[" + section + "] " + key + ": expected a number, got '" + v + "'");
      return fallback;
    }
  }

  long integer(const std::string& section, const std::string& key, long fallback) {
    const std::string v = str(section, key, "");
    if (v.empty()) return fallback;
    try {
      std::size_t used = 0;
      const long out = std::stol(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
      return out;
    } catch (const std::exception&) {
      errors_.push_back("[" + section + "] " + key + ": expected an integer, got '" + v + "'");
      return fallback;
    }
  }

  std::uint64_t u64(const std::string& section, const std::string& key,
                    std::uint64_t fallback) {
    const std::string v = str(section, key, "");
    if (v.empty()) return fallback;
    try {
      std::size_t used = 0;
      const unsigned long long out = std::stoull(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
      return out;
    } catch (const std::exception&) {
      errors_.push_back("[" + section + "] " + key +
                        ": expected an unsigned integer, got '" + v + "'");
      return fallback;
    }
  }

  bool boolean(const std::string& section, const std::string& key, bool fallback) {
    std::string v = str(section, key, "");
    if (v.empty()) return fallback;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    errors_.push_back("[" + section + "] " + key + ": expected on/off, got '" + v + "'");
    return fallback;
  }

  void mark(const std::string& section, const std::string& key) {
    seen_.insert(section + "\x1f" + key);
  }

  // Every configured key must have been consumed by a reader call.
  void check_unknown(const std::map<std::string, std::string>& passthrough_sections) {
    for (const auto& [section, kv] : ini_.sections) {
      if (passthrough_sections.count(section)) continue;
      for (const auto& [key, value] : kv) {
        (void)value;
        if (!seen_.count(section + "\x1f" + key))
          errors_.push_back("[" + section + "] " + key + ": unknown key");
      }
    }
  }

  const IniData& ini() const { return ini_; }

 private:
  const IniData& ini_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

}  // namespace

std::vector<double> RunConfig::default_alpha_grid() {
  return {0.001, 0.01, 0.025, 0.05, 0.1, 0.15, 0.2, 0.5, 0.9, 0.99};
}

RunConfig parse_run_config(const std::string& text) {
  std::vector<std::string> errors;
  const IniData ini = parse_ini(text, errors);
  Reader rd(ini, errors);
  RunConfig cfg;

  cfg.name = rd.str("experiment", "name", cfg.name);
  cfg.output_dir = rd.str("experiment", "output_dir", cfg.output_dir);
  cfg.timing = rd.boolean("experiment", "timing", cfg.timing);

  cfg.dataset_source = rd.str("dataset", "source", cfg.dataset_source);
  cfg.dataset_path = rd.str("dataset", "path", cfg.dataset_path);
  cfg.synth_height = static_cast<int>(rd.integer("dataset", "height", cfg.synth_height));
  cfg.synth_width = static_cast<int>(rd.integer("dataset", "width", cfg.synth_width));
  cfg.synth_count = static_cast<int>(rd.integer("dataset", "count", cfg.synth_count));
  cfg.synth_prior = rd.str("dataset", "prior", cfg.synth_prior);
  cfg.synth_scale = rd.real("dataset", "scale", cfg.synth_scale);
  cfg.synth_ridge = rd.real("dataset", "ridge", cfg.synth_ridge);
  cfg.synth_mean = rd.real("dataset", "mean", cfg.synth_mean);
  cfg.synth_tail_dof = rd.real("dataset", "tail_dof", cfg.synth_tail_dof);
  cfg.synth_seed = rd.u64("dataset", "seed", cfg.synth_seed);

  cfg.kernel = rd.str("model", "kernel", cfg.kernel);
  cfg.has_bsnr = rd.has("model", "bsnr_db");
  cfg.has_sigma = rd.has("model", "sigma");
  cfg.bsnr_db = rd.real("model", "bsnr_db", 0.0);
  cfg.sigma = rd.real("model", "sigma", 0.0);

  cfg.method = rd.str("method", "name", "");
  if (ini.sections.count("method")) {
    for (const auto& [key, value] : ini.sections.at("method")) {
      if (key == "name") continue;
      cfg.method_params[key] = value;
      rd.mark("method", key);
    }
  }

  const std::string alphas_str = rd.str("audit", "alphas", "");
  if (!alphas_str.empty()) {
    std::istringstream as(alphas_str);
    std::string tok;
    while (std::getline(as, tok, ',')) {
      tok = trim(tok);
      if (tok.empty()) continue;
      try {
        cfg.alphas.push_back(std::stod(tok));
      } catch (const std::exception&) {
        errors.push_back("[audit] alphas: '" + tok + "' is not a number");
      }
    }
  }
  cfg.n_trials = static_cast<int>(rd.integer("audit", "n_trials", cfg.n_trials));
  cfg.region = rd.str("audit", "region", cfg.region);
  cfg.sampling = rd.str("audit", "sampling", cfg.sampling);
  cfg.seed = rd.u64("audit", "seed", cfg.seed);

  rd.check_unknown({});

  // Semantic validation; every violation is reported.
  static const std::set<std::string> kSections{"experiment", "dataset", "model", "method",
                                               "audit"};
  for (const auto& [section, kv] : ini.sections) {
    (void)kv;
    if (!kSections.count(section)) errors.push_back("[" + section + "]: unknown section");
  }
  if (cfg.dataset_source != "synthetic-gaussian" && cfg.dataset_source != "directory")
    errors.push_back("[dataset] source: must be 'synthetic-gaussian' or 'directory'");
  if (cfg.dataset_source == "directory" && cfg.dataset_path.empty())
    errors.push_back("[dataset] path: required when source = directory");
  if (cfg.dataset_source != "directory") {
    if (cfg.synth_height < 1 || cfg.synth_width < 1)
      errors.push_back("[dataset] height/width: must be at least 1");
    if (cfg.synth_count < 1) errors.push_back("[dataset] count: must be at least 1");
    if (cfg.synth_prior != "smooth" && cfg.synth_prior != "iid")
      errors.push_back("[dataset] prior: must be 'smooth' or 'iid'");
    if (!(cfg.synth_scale > 0.0)) errors.push_back("[dataset] scale: must be positive");
    if (!(cfg.synth_ridge > 0.0)) errors.push_back("[dataset] ridge: must be positive");
    if (cfg.synth_tail_dof < 0.0)
      errors.push_back("[dataset] tail_dof: must be zero (gaussian) or positive");
  }
  if (cfg.kernel != "uniform3" && cfg.kernel != "uniform5" && cfg.kernel != "identity")
    errors.push_back("[model] kernel: must be uniform3, uniform5 or identity");
  if (cfg.has_bsnr && cfg.has_sigma)
    errors.push_back("[model] bsnr_db and sigma: mutually exclusive, both are set");
  if (!cfg.has_bsnr && !cfg.has_sigma)
    errors.push_back("[model] bsnr_db or sigma: one of the two is required");
  if (cfg.has_sigma && !(cfg.sigma > 0.0))
    errors.push_back("[model] sigma: must be positive");
  static const std::set<std::string> kMethods{"exact-gaussian", "gibbs-gmrf", "tv-sapg",
                                              "crr", "pnp-ula", "external"};
  if (cfg.method.empty())
    errors.push_back("[method] name: required");
  else if (!kMethods.count(cfg.method))
    errors.push_back("[method] name: unknown method '" + cfg.method + "'");
  if (cfg.alphas.empty()) cfg.alphas = RunConfig::default_alpha_grid();
  std::sort(cfg.alphas.begin(), cfg.alphas.end());
  for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
    if (!(cfg.alphas[i] > 0.0 && cfg.alphas[i] < 1.0)) {
      errors.push_back("[audit] alphas: values must lie in (0,1)");
      break;
    }
    if (i > 0 && cfg.alphas[i] == cfg.alphas[i - 1]) {
      errors.push_back("[audit] alphas: duplicate value");
      break;
    }
  }
  if (cfg.n_trials < 1) errors.push_back("[audit] n_trials: must be at least 1");
  if (cfg.region != "ball" && cfg.region != "hpd")
    errors.push_back("[audit] region: must be 'ball' or 'hpd'");
  if (cfg.sampling != "cyclic" && cfg.sampling != "with-replacement")
    errors.push_back("[audit] sampling: must be 'cyclic' or 'with-replacement'");

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

nlohmann::json config_echo(const RunConfig& cfg) {
  nlohmann::json dataset{{"source", cfg.dataset_source}};
  if (cfg.dataset_source == "directory") {
    dataset["path"] = cfg.dataset_path;
  } else {
    dataset["height"] = cfg.synth_height;
    dataset["width"] = cfg.synth_width;
    dataset["count"] = cfg.synth_count;
    dataset["prior"] = cfg.synth_prior;
    dataset["scale"] = cfg.synth_scale;
    dataset["ridge"] = cfg.synth_ridge;
    dataset["mean"] = cfg.synth_mean;
    dataset["tail_dof"] = cfg.synth_tail_dof;
    dataset["seed"] = cfg.synth_seed;
  }
  nlohmann::json model{{"kernel", cfg.kernel}};
  if (cfg.has_bsnr) model["bsnr_db"] = cfg.bsnr_db;
  if (cfg.has_sigma) model["sigma"] = cfg.sigma;

  nlohmann::json method{{"name", cfg.method}};
  for (const auto& [k, v] : cfg.method_params) method[k] = v;

  nlohmann::json audit{{"alphas", cfg.alphas},
                       {"n_trials", cfg.n_trials},
                       {"region", cfg.region},
                       {"sampling", cfg.sampling},
                       {"seed", cfg.seed}};
  return nlohmann::json{
      {"dataset", dataset}, {"model", model}, {"method", method}, {"audit", audit}};
}

std::string config_reference() {
  return
      "Config file format: INI-style sections with key = value pairs.\n"
      "Defaults are shown in parentheses.\n"
      "\n"
      "[experiment]\n"
      "  name        experiment label used in reports (experiment)\n"
      "  output_dir  report destination; --out and UQX_OUTPUT_DIR override (out)\n"
      "  timing      on/off, include wall-clock aggregates in report.json (off;\n"
      "              timings make otherwise deterministic reports run-dependent)\n"
      "\n"
      "[dataset]\n"
      "  source      synthetic-gaussian | directory (synthetic-gaussian)\n"
      "  path        image directory for source = directory\n"
      "  height      synthetic image height (16)\n"
      "  width       synthetic image width (16)\n"
      "  count       synthetic dataset size (100)\n"
      "  prior       smooth | iid (smooth)\n"
      "  scale       prior variance (iid) or spectrum scale (smooth) (1.0)\n"
      "  ridge       smooth-field spectral ridge (0.1)\n"
      "  mean        constant prior mean (0.0)\n"
      "  tail_dof    0 for gaussian fields; > 0 draws per-image scales from an\n"
      "              inverse-gamma, giving Student-t tails (0)\n"
      "  seed        dataset generator seed (1)\n"
      "\n"
      "[model]\n"
      "  kernel      uniform3 | uniform5 | identity (uniform3)\n"
      "  bsnr_db     blurred SNR in dB; sigma is then derived from the dataset\n"
      "  sigma       explicit noise standard deviation; exclusive with bsnr_db\n"
      "\n"
      "[method]\n"
      "  name        exact-gaussian | gibbs-gmrf | tv-sapg | crr | pnp-ula | external\n"
      "  (remaining keys are method parameters; see README)\n"
      "\n"
      "[audit]\n"
      "  alphas      comma-separated levels in (0,1) (0.001,0.01,0.025,0.05,0.1,\n"
      "              0.15,0.2,0.5,0.9,0.99)\n"
      "  n_trials    Monte Carlo trials N (100)\n"
      "  region      ball | hpd (ball)\n"
      "  sampling    cyclic | with-replacement (cyclic)\n"
      "  seed        master seed (0)\n";
}

}  // namespace uqx
