#pragma once

#include <filesystem>
#include <string>

#include "rwa/pipeline.hpp"

namespace rwa {

// Benchmark suites mirroring the result sections: changepoint ARL/MDR grids,
// fit-quality histograms and survival curves, assignment rejection and
// iteration statistics, end-to-end accuracy, histogram-bin sweep, timing.
// Every figure is emitted as CSV (or JSON) plus an SVG quick-look, and each
// suite writes a summary JSON. Deterministic given cfg.seed.
//
// suite: one of cpd, rmse, assign, accuracy, bins, timing, all.
void run_benchmarks(const std::string& suite, const PipelineConfig& cfg,
                    const std::filesystem::path& out_dir, const std::string& format);

}  // namespace rwa
