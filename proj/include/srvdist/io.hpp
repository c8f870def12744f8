#pragma once

#include <string>

#include "srvdist/datagen.hpp"
#include "srvdist/network.hpp"

namespace srvdist {

// Text curve file: header line `# d=<d> topology=<open|closed>`, then one
// point per line with d comma-separated fields (17 significant digits, so
// write/parse round-trips bit-exactly).
Curve parse_curve_file(const std::string& path);
void write_curve_file(const Curve& c, const std::string& path);

Curve parse_curve_text(const std::string& text, const std::string& origin = "<string>");
std::string format_curve_text(const Curve& c);

// JSON dataset manifest with meta block and inline curve records.
PairDataset parse_manifest(const std::string& path);
void write_manifest(const PairDataset& ds, const std::string& path,
                    const std::string& command_line = "");

// Optional per-record predictions column appended by `predict`.
void write_manifest_with_predictions(const PairDataset& ds, const std::vector<double>& preds,
                                     const std::string& path, const std::string& command_line);
std::vector<double> parse_manifest_predictions(const std::string& path);

// Versioned checkpoint container: JSON header (arch, seeds, config echo)
// followed by a little-endian float64 tensor blob.
void save_checkpoint(const NetworkParams& params, const std::string& path,
                     const std::string& command_line = "");
NetworkParams load_checkpoint(const std::string& path);

void write_history(const TrainHistory& history, const std::string& path,
                   const std::string& command_line = "");

}  // namespace srvdist
