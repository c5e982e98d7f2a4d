#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Dense>
#include "json.hpp"

#include "weakstrong/analytic.hpp"
#include "weakstrong/config.hpp"
#include "weakstrong/tomography.hpp"

namespace weakstrong::io {

using Json = nlohmann::ordered_json;

// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_double(double value);

// Writes to a sibling temp file and renames it into place, so readers never
// see a partial file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

Json config_to_json(const MeasurementConfig& config);
MeasurementConfig config_from_json(const Json& json);

Json dataset_to_json(const tomography::TomographyDataset& dataset);
tomography::TomographyDataset dataset_from_json(const Json& json);

// Header "z,density" then one row per grid point.
std::string density_csv(const tomography::DensityEstimate& estimate);
std::string density_csv(const Eigen::VectorXd& z, const Eigen::VectorXd& density);

// Two header lines (grid keys, grid values), then n_z rows of n_p values.
std::string wigner_csv(const analytic::PhaseSpaceGrid& grid, const Eigen::MatrixXd& values);

// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace weakstrong::io
