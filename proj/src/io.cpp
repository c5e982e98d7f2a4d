#include "weakstrong/io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "weakstrong/errors.hpp"

namespace weakstrong::io {

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json config_to_json(const MeasurementConfig& config) {
  Json j;
  j["theta"] = config.theta();
  j["gamma"] = config.gamma_big();
  j["delta_z"] = config.delta_z();
  j["eta"] = config.eta();
  j["omega_rabi"] = config.omega_rabi();
  j["units"] = to_string(config.units());
  return j;
}

MeasurementConfig config_from_json(const Json& j) {
  try {
    return MeasurementConfig(j.at("theta").get<double>(), j.at("gamma").get<double>(),
                             j.value("delta_z", 1.0), j.value("eta", MeasurementConfig::kDefaultEta),
                             j.value("omega_rabi", MeasurementConfig::kDefaultRabi),
                             parse_units(j.value("units", std::string("natural"))));
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("bad config JSON: ") + e.what());
  }
}

Json dataset_to_json(const tomography::TomographyDataset& dataset) {
  Json j;
  j["config"] = config_to_json(dataset.source_config);
  j["seed"] = dataset.seed;
  j["noiseless"] = dataset.noiseless;
  j["fock_dim"] = dataset.fock_dim;
  Json records = Json::array();
  for (const auto& r : dataset.records) {
    Json rec;
    rec["k"] = r.k;
    rec["basis"] = tomography::to_string(r.basis);
    rec["shots"] = r.shots;
    rec["ups"] = r.ups;
    rec["mean"] = r.mean;
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  return j;
}

tomography::TomographyDataset dataset_from_json(const Json& j) {
  try {
    tomography::TomographyDataset out{{},
                                      j.at("seed").get<std::uint64_t>(),
                                      j.value("noiseless", false),
                                      config_from_json(j.at("config")),
                                      j.value("fock_dim", fock::kDefaultDimension)};
    for (const auto& rec : j.at("records")) {
      const auto shots = rec.at("shots").get<std::int64_t>();
      const auto ups = rec.at("ups").get<std::int64_t>();
      const double mean = rec.contains("mean") ? rec["mean"].get<double>()
                                               : 2.0 * static_cast<double>(ups) / static_cast<double>(shots) - 1.0;
      out.records.push_back({rec.at("k").get<double>(), tomography::parse_basis(rec.at("basis").get<std::string>()),
                             shots, ups, mean});
    }
    out.validate();
    return out;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("bad dataset JSON: ") + e.what());
  }
}

std::string density_csv(const Eigen::VectorXd& z, const Eigen::VectorXd& density) {
  std::string out = "z,density\n";
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    out += format_double(z(i));
    out += ',';
    out += format_double(density(i));
    out += '\n';
  }
  return out;
}

std::string density_csv(const tomography::DensityEstimate& estimate) {
  return density_csv(estimate.z_grid, estimate.density);
}

std::string wigner_csv(const analytic::PhaseSpaceGrid& grid, const Eigen::MatrixXd& values) {
  std::string out = "z_min,z_max,n_z,p_min,p_max,n_p\n";
  out += format_double(grid.z_min) + ',' + format_double(grid.z_max) + ',' + std::to_string(grid.n_z) + ',' +
         format_double(grid.p_min) + ',' + format_double(grid.p_max) + ',' + std::to_string(grid.n_p) + '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(values(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace weakstrong::io
