#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace cgchan {

// Content-addressed registry of pipeline artifacts under one output
// directory. Every entry records relative file paths plus the hash of the
// data file; a stage re-run becomes a no-op when the entry verifies.
class RunManifest {
 public:
  struct Entry {
    std::vector<std::string> files;  // relative to the run directory
    std::string hash;                // fnv1a64 of the first (data) file
  };

  explicit RunManifest(std::filesystem::path run_dir);

  void load();
  void save() const;

  const std::string& config_hash() const { return config_hash_; }
  void set_config_hash(const std::string& h);

  // True when the entry exists, all files exist, and the data hash matches.
  bool has_valid(const std::string& key) const;
  void put(const std::string& key, const std::vector<std::string>& relative_files);
  const Entry& at(const std::string& key) const;

  const std::filesystem::path& dir() const { return run_dir_; }

 private:
  std::filesystem::path run_dir_;
  std::string config_hash_;
  std::map<std::string, Entry> entries_;
};

}  // namespace cgchan
