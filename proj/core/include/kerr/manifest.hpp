#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "kerr/config.hpp"
#include "kerr/pipeline.hpp"

namespace kerr {

std::string version_string();

/// Everything needed to reproduce and audit one run.
struct RunManifest {
  RunConfig config;  // pinned: re-running it reproduces the outputs
  const SimulationResult* simulation = nullptr;
  const AnalysisResult* analysis = nullptr;
  std::map<std::string, std::string> files;  // file name -> SHA-256 hex
  std::map<std::string, double> seconds;
};

std::string render_manifest(const RunManifest& manifest);

/// SHA-256 of a file's bytes, hex encoded.
std::string file_digest(const std::filesystem::path& path);

/// Manifest for the classical command.
std::string render_classical_manifest(const ClassicalConfig& config, const ClassicalResult& result,
                                      const std::map<std::string, std::string>& files);

}  // namespace kerr
