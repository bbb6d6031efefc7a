#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "attractor/cli.hpp"

using namespace attractor;
namespace cli = attractor::cli;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') field += line[++i];
        else if (c == '"') quoted = false;
        else field += c;
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(field);
        field.clear();
      } else {
        field += c;
      }
    }
    fields.push_back(field);
    rows.push_back(fields);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_kit(const std::string& args) {
  const int status = std::system((std::string(ATTRACTOR_KIT_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

cli::RunConfig config(cli::Command c) {
  cli::RunConfig cfg;
  cfg.command = c;
  return cfg;
}

}  // namespace

TEST(Validate, RejectsOutOfRangeParameters) {
  auto cfg = config(cli::Command::CeCoeffs);
  cfg.n_max = 0;
  std::ostringstream out, err;
  EXPECT_EQ(cli::run(cfg, out, err), cli::kExitConfig);
  EXPECT_TRUE(out.str().empty());
  cfg.n_max = 201;
  EXPECT_EQ(cli::run(cfg, out, err), cli::kExitConfig);

  auto folds = config(cli::Command::Folds);
  folds.orders = {0};
  EXPECT_EQ(cli::run(folds, out, err), cli::kExitConfig);

  auto disp = config(cli::Command::Dispersion);
  disp.k_max = 1.5;
  EXPECT_EQ(cli::run(disp, out, err), cli::kExitConfig);
  disp = config(cli::Command::Dispersion);
  disp.pade_L = 20;
  EXPECT_EQ(cli::run(disp, out, err), cli::kExitConfig);
  disp = config(cli::Command::Dispersion);
  disp.k_step = 0.0;
  EXPECT_EQ(cli::run(disp, out, err), cli::kExitConfig);

  auto weight = config(cli::Command::CeCoeffs);
  weight.weight_spec = "lorentzian";
  EXPECT_EQ(cli::run(weight, out, err), cli::kExitConfig);
  EXPECT_NE(err.str().find("unknown weight"), std::string::npos);
}

TEST(CeCoeffs, GaussianColumn) {
  auto cfg = config(cli::Command::CeCoeffs);
  cfg.n_max = 7;
  const auto rows = parse_csv(cli::render(cfg));
  ASSERT_EQ(rows.size(), 8U);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "a_2n", "abs_log10", "r_n", "r_n_over_2np1"}));
  const std::vector<std::string> expected{"-1", "1", "-4", "27", "-248", "2830", "-38232"};
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(rows[i + 1][1], expected[i]);
  EXPECT_EQ(rows[1][3], "1");
  EXPECT_EQ(rows[3][3], "6.75");
  EXPECT_EQ(rows[7][3], "");
}

TEST(CeCoeffs, BoundedUniformExactStrings) {
  auto cfg = config(cli::Command::CeCoeffs);
  cfg.n_max = 2;
  cfg.weight_spec = "bounded-uniform";
  const auto rows = parse_csv(cli::render(cfg));
  ASSERT_EQ(rows.size(), 3U);
  EXPECT_EQ(rows[1][1], "-1/3");
  EXPECT_EQ(rows[2][1], "-1/45");
}

TEST(CeCoeffs, CustomMomentFile) {
  const auto path = std::filesystem::temp_directory_path() / "attractor_moments.txt";
  {
    std::ofstream f(path);
    f << "# uniform weight\n1/3\n\n1/5   # mu_4\n1/7\n";
  }
  auto cfg = config(cli::Command::CeCoeffs);
  cfg.weight_spec = "bounded-custom=" + path.string();
  cfg.n_max = 3;
  const auto rows = parse_csv(cli::render(cfg));
  EXPECT_EQ(rows[1][1], "-1/3");
  EXPECT_EQ(rows[2][1], "-1/45");
  {
    std::ofstream f(path);
    f << "1/5\n1/3\n";
  }
  std::ostringstream out, err;
  EXPECT_EQ(cli::run(cfg, out, err), cli::kExitConfig);
  cfg.weight_spec = "bounded-custom=/nonexistent/moments.txt";
  EXPECT_EQ(cli::run(cfg, out, err), cli::kExitConfig);
  std::filesystem::remove(path);
}

TEST(CeCoeffs, JsonCarriesRadiusVerdict) {
  auto cfg = config(cli::Command::CeCoeffs);
  cfg.format = cli::Format::Json;
  const auto j = nlohmann::json::parse(cli::render(cfg));
  EXPECT_EQ(j["coefficients"].size(), 30U);
  EXPECT_EQ(j["coefficients"][6]["a_2n"], "-38232");
  EXPECT_EQ(j["radius_estimate"]["verdict"], "zero-consistent");
  cfg.weight_spec = "bounded-uniform";
  EXPECT_EQ(nlohmann::json::parse(cli::render(cfg))["radius_estimate"]["verdict"], "finite");
}

TEST(Dispersion, DefaultGridColumns) {
  const auto rows = parse_csv(cli::render(config(cli::Command::Dispersion)));
  ASSERT_EQ(rows.size(), 122U);
  const auto& header = rows[0];
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    ADD_FAILURE() << "missing column " << name;
    return std::size_t{0};
  };
  const auto n50 = col("omega_branch_n50"), exact = col("omega_exact"), resummed = col("omega_resummed");
  col("omega_ce2");
  col("omega_ce4");
  col("physical_n50");
  double worst = 0.0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double k = std::stod(rows[r][0]);
    if (k <= 1.03) { EXPECT_FALSE(rows[r][n50].empty()) << k; }
    if (k >= 1.04) { EXPECT_TRUE(rows[r][n50].empty()) << k; }
    if (k <= 1.0 + 1e-12) worst = std::max(worst, std::fabs(std::stod(rows[r][resummed]) - std::stod(rows[r][exact])));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Dispersion, SingleZeroRow) {
  auto cfg = config(cli::Command::Dispersion);
  cfg.k_max = 0.0;
  const auto rows = parse_csv(cli::render(cfg));
  ASSERT_EQ(rows.size(), 2U);
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    if (rows[0][i].rfind("omega_", 0) == 0) { EXPECT_EQ(rows[1][i], "0") << rows[0][i]; }
  }
}

TEST(Folds, NotesAndValues) {
  auto cfg = config(cli::Command::Folds);
  cfg.orders = {1, 2, 5, 20, 50};
  const auto rows = parse_csv(cli::render(cfg));
  ASSERT_EQ(rows.size(), 6U);
  EXPECT_NEAR(std::stod(rows[1][1]), 0.5, 1e-10);
  EXPECT_NE(rows[1][4].find("discrepancy"), std::string::npos);
  EXPECT_NE(rows[1][4].find("closed-form"), std::string::npos);
  EXPECT_NE(rows[4][4].find("within 0.02"), std::string::npos);
  EXPECT_NE(rows[5][4].find("within 0.02"), std::string::npos);
  const double k2 = std::stod(rows[2][1]), k5 = std::stod(rows[3][1]), k20 = std::stod(rows[4][1]);
  EXPECT_GT(k5, k2);
  EXPECT_LT(k5, k20);
}

TEST(Borel, GaussianPolesAndSummability) {
  auto cfg = config(cli::Command::Borel);
  cfg.format = cli::Format::Json;
  const auto j = nlohmann::json::parse(cli::render(cfg));
  EXPECT_EQ(j["summability"], "strict");
  EXPECT_LT(j["nearest_pole_offset"].get<double>(), 0.02);
  EXPECT_EQ(j["pade"]["poles"].size(), 14U);
  EXPECT_EQ(j["borel_coefficients"][6]["exact"], "-531/70");  // -38232 / 7! in lowest terms
}

TEST(Borel, ZeroZeroRequest) {
  auto cfg = config(cli::Command::Borel);
  cfg.pade_L = 0;
  cfg.pade_M = 0;
  cfg.format = cli::Format::Json;
  const auto j = nlohmann::json::parse(cli::render(cfg));
  EXPECT_TRUE(j["pade"]["poles"].empty());
  EXPECT_EQ(j["pade"]["denominator"].size(), 1U);
}

TEST(Borel, SourceSeries) {
  auto cfg = config(cli::Command::Borel);
  cfg.borel_source = cli::BorelSource::Source;
  const auto rows = parse_csv(cli::render(cfg));
  EXPECT_EQ(rows[1][2], "-1");
  EXPECT_EQ(rows[2][2], "3/2");
  EXPECT_EQ(rows[3][2], "-5/2");
}

TEST(SummabilityFlag, Classification) {
  PadeApproximant p;
  p.poles = {{-0.5, 0.0}};
  EXPECT_EQ(cli::summability_flag(p), "strict");
  p.poles = {{-0.5, 0.0}, {0.3, 0.0}};
  EXPECT_EQ(cli::summability_flag(p), "obstructed");
  p.poles = {{0.3, 0.2}, {0.3, -0.2}};
  EXPECT_EQ(cli::summability_flag(p), "unobstructed");
}

TEST(Output, AtomicFileAndDeterminism) {
  const auto dir = std::filesystem::temp_directory_path() / "attractor_cli_test";
  std::filesystem::create_directories(dir);
  for (auto c : {cli::Command::CeCoeffs, cli::Command::Dispersion, cli::Command::Folds, cli::Command::Borel}) {
    for (auto f : {cli::Format::Csv, cli::Format::Json}) {
      auto cfg = config(c);
      cfg.format = f;
      cfg.output_path = (dir / "a.out").string();
      std::ostringstream out, err;
      ASSERT_EQ(cli::run(cfg, out, err), cli::kExitOk) << err.str();
      const auto first = slurp(dir / "a.out");
      cfg.output_path = (dir / "b.out").string();
      ASSERT_EQ(cli::run(cfg, out, err), cli::kExitOk);
      EXPECT_EQ(first, slurp(dir / "b.out")) << cli::to_string(c);
      EXPECT_FALSE(std::filesystem::exists(dir / "a.out.tmp"));
      EXPECT_FALSE(first.empty());
    }
  }
  std::filesystem::remove_all(dir);
}

TEST(Executable, ExitCodes) {
  EXPECT_EQ(run_kit("ce-coeffs --n-max 7"), 0);
  EXPECT_EQ(run_kit("ce-coeffs --n-max 0"), 2);
  EXPECT_EQ(run_kit("folds --orders 0"), 2);
  EXPECT_EQ(run_kit("ce-coeffs --format xml"), 2);
  EXPECT_EQ(run_kit("no-such-command"), 2);
  EXPECT_EQ(run_kit("borel --pade 3"), 2);
}
