#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "cardevo/evolution.hpp"

namespace cardevo {

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error("config: bad boolean for '" + key + "': " + v);
}

inline void apply_config_entry(EvolutionConfig& cfg, const std::string& key,
                               const std::string& value) {
  if (key == "representation") cfg.representation = representation_from_string(value);
  else if (key == "scheme") {
    if (value == "progressive") cfg.scheme = FitnessScheme::Progressive;
    else if (value == "fixed") cfg.scheme = FitnessScheme::FixedOpponent;
    else if (value == "best_of_previous") cfg.scheme = FitnessScheme::BestOfPrevious;
    else if (value == "weak-op" || value == "weakop") {
      cfg.scheme = FitnessScheme::FixedOpponent;
      cfg.opponent = "weakop";
    } else {
      throw std::runtime_error("config: unknown scheme '" + value + "'");
    }
  }
  else if (key == "opponent") cfg.opponent = value;
  else if (key == "generations") cfg.generations = std::stoi(value);
  else if (key == "population") cfg.population = std::stoi(value);
  else if (key == "elitism") cfg.elitism = std::stoi(value);
  else if (key == "drafts") cfg.drafts = std::stoi(value);
  else if (key == "rounds") cfg.rounds = std::stoi(value);
  else if (key == "seed" || key == "master_seed") cfg.master_seed = std::stoull(value);
  else if (key == "init") {
    if (value == "random") cfg.init = InitMode::Random;
    else if (value == "from_linear") cfg.init = InitMode::FromLinear;
    else throw std::runtime_error("config: unknown init mode '" + value + "'");
  }
  else if (key == "init_genome") cfg.init_genome_path = value;
  else if (key == "init_mutations") cfg.init_mutations = std::stoi(value);
  else if (key == "use_crossover") cfg.use_crossover = parse_bool(value, key);
  else if (key == "tournament_size") cfg.tournament_size = std::stoi(value);
  else if (key == "resample_drafts") cfg.resample_drafts = parse_bool(value, key);
  else if (key == "workers") cfg.workers = std::stoi(value);
  else if (key == "mutation_rate") cfg.genome.mutation_rate = std::stod(value);
  else if (key == "max_nodes") cfg.genome.max_nodes = std::stoi(value);
  else if (key == "init_depth_min") cfg.genome.init_depth_min = std::stoi(value);
  else if (key == "init_depth_max") cfg.genome.init_depth_max = std::stoi(value);
  else if (key == "constant_min") cfg.genome.constant_min = std::stod(value);
  else if (key == "constant_max") cfg.genome.constant_max = std::stod(value);
  else if (key == "feature_leaf_probability") cfg.genome.feature_leaf_probability = std::stod(value);
  else if (key == "linear_weight_min") cfg.genome.linear_weight_min = std::stod(value);
  else if (key == "linear_weight_max") cfg.genome.linear_weight_max = std::stod(value);
  else throw std::runtime_error("config: unknown key '" + key + "'");
}

}  // namespace detail

// Parses either flat "key = value" text or a JSON object with the same keys.
inline EvolutionConfig parse_evolution_config(const std::string& text) {
  EvolutionConfig cfg;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j = nlohmann::json::parse(text);
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::string value;
      if (it.value().is_string())
        value = it.value().get<std::string>();
      else
        value = it.value().dump();
      detail::apply_config_entry(cfg, it.key(), value);
    }
    return cfg;
  }
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
    detail::apply_config_entry(cfg, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
  }
  return cfg;
}

inline EvolutionConfig load_evolution_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_evolution_config(ss.str());
}

inline std::string config_text(const EvolutionConfig& cfg) {
  std::ostringstream out;
  out << "representation = " << to_string(cfg.representation) << "\n";
  out << "scheme = " << to_string(cfg.scheme) << "\n";
  if (!cfg.opponent.empty()) out << "opponent = " << cfg.opponent << "\n";
  out << "generations = " << cfg.generations << "\n";
  out << "population = " << cfg.population << "\n";
  out << "elitism = " << cfg.elitism << "\n";
  out << "drafts = " << cfg.drafts << "\n";
  out << "rounds = " << cfg.rounds << "\n";
  out << "master_seed = " << cfg.master_seed << "\n";
  out << "init = " << (cfg.init == InitMode::Random ? "random" : "from_linear") << "\n";
  if (!cfg.init_genome_path.empty()) out << "init_genome = " << cfg.init_genome_path << "\n";
  out << "init_mutations = " << cfg.init_mutations << "\n";
  out << "use_crossover = " << (cfg.use_crossover ? "true" : "false") << "\n";
  out << "tournament_size = " << cfg.tournament_size << "\n";
  out << "resample_drafts = " << (cfg.resample_drafts ? "true" : "false") << "\n";
  out << "mutation_rate = " << cfg.genome.mutation_rate << "\n";
  out << "max_nodes = " << cfg.genome.max_nodes << "\n";
  out << "init_depth_min = " << cfg.genome.init_depth_min << "\n";
  out << "init_depth_max = " << cfg.genome.init_depth_max << "\n";
  out << "constant_min = " << cfg.genome.constant_min << "\n";
  out << "constant_max = " << cfg.genome.constant_max << "\n";
  out << "feature_leaf_probability = " << cfg.genome.feature_leaf_probability << "\n";
  out << "linear_weight_min = " << cfg.genome.linear_weight_min << "\n";
  out << "linear_weight_max = " << cfg.genome.linear_weight_max << "\n";
  return out.str();
}

// The manifest ties a run directory to its configuration and card pool.
inline void save_run_manifest(const std::string& run_dir, const EvolutionConfig& cfg,
                              const CardSet& cards) {
  std::filesystem::create_directories(run_dir);
  std::ofstream f(std::filesystem::path(run_dir) / "run_manifest.txt");
  if (!f) throw std::runtime_error("cannot write run manifest under '" + run_dir + "'");
  f << config_text(cfg);
  f << "cardset_digest = " << cardset_digest(cards) << "\n";
  f << "total_games = " << count_games(cfg) << "\n";
}

}  // namespace cardevo
