#include <clocale>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "weakstrong/errors.hpp"
#include "weakstrong/io.hpp"

using namespace weakstrong;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("weakstrong_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n') + 1); }

}  // namespace

TEST_CASE("doubles round trip and ignore the locale") {
  for (double v : {0.1, -1.0004000177583369, 1e-300, 6.02214076e23, 0.0, -0.0}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(-0.0) == "0");
  CHECK(io::format_double(0.5) == "0.5");
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr) {
    CHECK(io::format_double(0.5) == "0.5");
    std::setlocale(LC_NUMERIC, "C");
  }
}

TEST_CASE("fnv1a reference vectors") {
  CHECK(io::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(io::fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("atomic write replaces the file and leaves no temporaries") {
  const auto dir = scratch("atomic");
  const auto path = dir / "nested" / "out.csv";
  io::write_file_atomic(path, "first\n");
  io::write_file_atomic(path, "second\n");
  CHECK(io::read_file(path) == "second\n");
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir)) files += e.is_regular_file();
  CHECK(files == 1);
  CHECK_THROWS_AS(io::read_file(dir / "missing.json"), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("config JSON round trip") {
  const auto c = MeasurementConfig::physical(0.02, 0.04);
  const auto back = io::config_from_json(io::config_to_json(c));
  CHECK(back.theta() == c.theta());
  CHECK(back.gamma_big() == c.gamma_big());
  CHECK(back.delta_z() == c.delta_z());
  CHECK(back.units() == UnitSystem::physical);
  CHECK_THROWS_AS(io::config_from_json(io::Json{{"theta", 0.1}}), ValidationError);
  CHECK_THROWS_AS(io::config_from_json(io::Json{{"theta", 3.0}, {"gamma", 1.0}}), ValidationError);
}

TEST_CASE("dataset JSON round trip") {
  const auto c = MeasurementConfig::natural(0.5, 1.0);
  tomography::TomographyDataset ds{{{0.0, Basis::sigma_z, 100, 100, 1.0},
                                    {0.5, Basis::sigma_z, 100, 73, 0.46},
                                    {0.0, Basis::sigma_y, 100, 52, 0.04}},
                                   99,
                                   false,
                                   c,
                                   64};
  const auto j = io::dataset_to_json(ds);
  CHECK(j.contains("config"));
  CHECK(j["seed"] == 99);
  CHECK(j["records"][1]["basis"] == "sigma_z");
  CHECK(j["records"][1]["ups"] == 73);
  const auto back = io::dataset_from_json(io::Json::parse(j.dump()));
  REQUIRE(back.records.size() == 3);
  CHECK(back.records[2].basis == Basis::sigma_y);
  CHECK(back.records[1].mean == 0.46);
  CHECK(back.seed == 99);
  CHECK(back.fock_dim == 64);
  CHECK(io::dataset_to_json(back).dump() == j.dump());

  auto broken = j;
  broken["records"][0]["ups"] = 101;
  CHECK_THROWS_AS(io::dataset_from_json(broken), ValidationError);
  broken = j;
  broken["records"][0].erase("k");
  CHECK_THROWS_AS(io::dataset_from_json(broken), ValidationError);
}

TEST_CASE("density and wigner CSV layout") {
  Eigen::VectorXd z(3), rho(3);
  z << -1.0, 0.0, 1.0;
  rho << 0.25, 0.5, 0.25;
  CHECK(io::density_csv(z, rho) == "z,density\n-1,0.25\n0,0.5\n1,0.25\n");

  const analytic::PhaseSpaceGrid grid{-1.0, 1.0, 2, -0.5, 0.5, 3};
  Eigen::MatrixXd w(2, 3);
  w << 1, 2, 3, 4, 5, 6;
  const std::string csv = io::wigner_csv(grid, w);
  std::ifstream golden(std::string(WEAKSTRONG_GOLDEN_DIR) + "/wigner_header.csv");
  std::string expected((std::istreambuf_iterator<char>(golden)), std::istreambuf_iterator<char>());
  CHECK(first_line(csv) == expected);
  CHECK(csv == "z_min,z_max,n_z,p_min,p_max,n_p\n-1,1,2,-0.5,0.5,3\n1,2,3\n4,5,6\n");
}
