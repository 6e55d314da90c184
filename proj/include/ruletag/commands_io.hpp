#ifndef RULETAG_COMMANDS_IO_HPP
#define RULETAG_COMMANDS_IO_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "ruletag/corpus.hpp"
#include "ruletag/rules.hpp"

namespace ruletag {

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

inline ParsedCorpus parse_corpus_file(const std::string& path) {
  if (path.empty()) throw ConfigError("no corpus path given");
  std::ifstream in(path);
  if (!in) throw IoError("cannot read corpus '" + path + "'");
  try {
    return parse_corpus(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

// Dictionary file: {"synonyms": {tag: [words]}, "negative": [words]}.
inline DictionarySet load_dictionaries(const std::string& path, const TagSet& tags,
                                       bool case_fold = true) {
  nlohmann::json j = read_json_file(path);
  std::map<std::string, std::vector<std::string>> raw;
  std::vector<std::string> negative;
  try {
    if (j.contains("synonyms"))
      for (const auto& [tag, words] : j.at("synonyms").items())
        raw[tag] = words.get<std::vector<std::string>>();
    if (j.contains("negative")) negative = j.at("negative").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad dictionary file '" + path + "': " + e.what());
  }
  return compile_dictionaries(raw, negative, tags, case_fold);
}

inline void save_dictionaries(const std::string& path, const DictionarySet& dicts,
                              const TagSet& tags) {
  nlohmann::json synonyms = nlohmann::json::object();
  for (const auto& [id, words] : dicts.synonyms) {
    std::vector<std::string> sorted(words.begin(), words.end());
    std::sort(sorted.begin(), sorted.end());
    synonyms[tags.name(id)] = sorted;
  }
  std::vector<std::string> negative(dicts.negative.begin(), dicts.negative.end());
  std::sort(negative.begin(), negative.end());
  nlohmann::json j{{"synonyms", synonyms}, {"negative", negative}};
  write_file(path, j.dump(1) + "\n");
}

}  // namespace ruletag

#endif  // RULETAG_COMMANDS_IO_HPP
