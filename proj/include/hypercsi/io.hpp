#pragma once

#include <filesystem>

#include "hypercsi/dimred.hpp"

namespace hypercsi::io {

// Binary dataset: magic "HSD1", then three little-endian uint32 (bands M,
// pixels L, generating endmember count or 0), then M*L float64 pixel-major
// (pixel n contiguous).
void write_dataset(const std::filesystem::path& path, const SpectralDataset& data);

// Reads the binary format when the magic matches, otherwise parses the CSV
// alternative (L rows of M comma-separated values, no header).
SpectralDataset read_dataset(const std::filesystem::path& path);

// Plain CSV, one line per matrix row, %.17g values (round-trips exactly).
void write_csv(const std::filesystem::path& path, const MatrixXd& m);
MatrixXd read_csv(const std::filesystem::path& path);

// Dataset CSV alternative: L rows x M columns.
void write_dataset_csv(const std::filesystem::path& path, const SpectralDataset& data);

}  // namespace hypercsi::io
