#pragma once

#include "run_config.hpp"

namespace lingshift::cli {

// Trains one embedding space per snapshot into <out>/embeddings/<label>.vec.
void cmd_train(const RunConfig& config);

// Builds each selected method's series and writes <out>/series/<method>.csv
// and <out>/reports/<method>.csv. The distributional method reads the
// embeddings written by cmd_train unless end_to_end is set.
void cmd_detect(const RunConfig& config);

// Runs the donor/receptor benchmark on a base corpus into <out>/bench.csv.
void cmd_bench(const RunConfig& config);

// Writes a synthetic tagged corpus and its function-word list into <out>.
void cmd_synth(const RunConfig& config);

std::filesystem::path embedding_path(const std::filesystem::path& out_dir,
                                     const std::string& label);

}  // namespace lingshift::cli
