#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tomolearn/experiments.hpp"
#include "tomolearn/types.hpp"

namespace tomolearn {

/// %.17g rendering: round-trip exact and stable across runs, so every CSV
/// writer below is byte-deterministic.
std::string format_double(double v);

void write_image_csv(const std::filesystem::path& path, const Image& img);
Image read_image_csv(const std::filesystem::path& path);

void write_sinogram_csv(const std::filesystem::path& path, const SinogramBlock& sino);

/// 16-bit binary PGM, values affinely mapped from [min, max] to [0, 65535].
void write_image_pgm16(const std::filesystem::path& path, const Image& img);
/// Binary PGM (8 or 16 bit), rescaled to [0, 1]; image must be square.
Image read_image_pgm(const std::filesystem::path& path);

void write_raw_records_csv(const std::filesystem::path& path,
                           const std::vector<RealizationRecord>& records);
void write_summary_csv(const std::filesystem::path& path, const SweepResult& sweep);

/// Log-log rate plot: per-N means (solid, with stddev whiskers) and the
/// fitted monomial (dashed).
void write_rate_plot_svg(const std::filesystem::path& path, const SweepResult& sweep,
                         const std::string& title);

}  // namespace tomolearn
