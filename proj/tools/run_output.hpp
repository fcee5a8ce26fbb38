// Output directory handling shared by the CLI commands: every run writes
// its files plus a manifest that references each of them.
#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "oosinfer/errors.hpp"
#include "oosinfer/version.hpp"

namespace oosinfer::cli {

using ordered_json = nlohmann::ordered_json;

class RunOutput {
 public:
  RunOutput(std::string command, std::string out_dir, ordered_json config)
      : command_(std::move(command)),
        dir_(std::move(out_dir)),
        config_(std::move(config)),
        start_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir_.string() + "'");
  }

  std::filesystem::path dir() const { return dir_; }

  void write_text(const std::string& filename, const std::string& content) {
    const auto path = dir_ / filename;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
    outputs_.push_back(filename);
  }

  void write_json(const std::string& filename, const ordered_json& j) {
    write_text(filename, j.dump(2) + "\n");
  }

  /// Writes manifest.json referencing every output of this run.
  void finalize() {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    ordered_json m;
    m["command"] = command_;
    m["version"] = kVersion;
    m["config"] = config_;
    m["outputs"] = outputs_;
    m["wall_time_seconds"] = wall;
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << m.dump(2) << "\n";
  }

 private:
  std::string command_;
  std::filesystem::path dir_;
  ordered_json config_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace oosinfer::cli
