#include "cgchan/manifest.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "cgchan/artifacts.hpp"

namespace cgchan {

using nlohmann::json;

RunManifest::RunManifest(std::filesystem::path run_dir) : run_dir_(std::move(run_dir)) {}

void RunManifest::load() {
  const auto path = run_dir_ / "manifest.json";
  if (!std::filesystem::exists(path)) return;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("manifest: cannot open " + path.string());
  json j;
  in >> j;
  config_hash_ = j.value("config_hash", std::string());
  entries_.clear();
  for (const auto& [key, val] : j.at("artifacts").items()) {
    Entry e;
    e.files = val.at("files").get<std::vector<std::string>>();
    e.hash = val.at("hash").get<std::string>();
    entries_[key] = std::move(e);
  }
}

void RunManifest::save() const {
  json j;
  j["config_hash"] = config_hash_;
  json arts = json::object();
  for (const auto& [key, e] : entries_) arts[key] = {{"files", e.files}, {"hash", e.hash}};
  j["artifacts"] = arts;
  std::filesystem::create_directories(run_dir_);
  std::ofstream out(run_dir_ / "manifest.json", std::ios::trunc);
  if (!out) throw std::runtime_error("manifest: cannot write manifest.json");
  out << j.dump(2) << "\n";
}

void RunManifest::set_config_hash(const std::string& h) {
  if (!config_hash_.empty() && config_hash_ != h)
    throw std::runtime_error(
        "manifest: run directory was produced with a different config (hash " + config_hash_ +
        " vs " + h + "); use a fresh --out directory");
  config_hash_ = h;
}

bool RunManifest::has_valid(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return false;
  const Entry& e = it->second;
  if (e.files.empty()) return false;
  for (const auto& f : e.files)
    if (!std::filesystem::exists(run_dir_ / f)) return false;
  return to_hex(hash_file(run_dir_ / e.files.front())) == e.hash;
}

void RunManifest::put(const std::string& key, const std::vector<std::string>& relative_files) {
  if (relative_files.empty()) throw std::invalid_argument("manifest: empty file list");
  Entry e;
  e.files = relative_files;
  e.hash = to_hex(hash_file(run_dir_ / relative_files.front()));
  entries_[key] = std::move(e);
}

const RunManifest::Entry& RunManifest::at(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw std::runtime_error("manifest: missing artifact '" + key + "'");
  return it->second;
}

}  // namespace cgchan
