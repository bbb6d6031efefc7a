#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "attractor/cli.hpp"

namespace cli = attractor::cli;

int main(int argc, char** argv) {
  CLI::App app{"Chapman-Enskog coefficients, Borel-Pade resummation and spectral branches of the BGK spatial attractor"};
  app.require_subcommand(1, 1);

  cli::RunConfig cfg;
  std::string format = "csv";
  std::vector<long> pade;
  std::string series = "ce";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--weight", cfg.weight_spec, "gaussian | bounded-uniform | bounded-custom=FILE");
    sub->add_option("--n-max", cfg.n_max, "number of CE coefficients");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.output_path, "output path (default: standard output)");
  };
  auto add_pade = [&](CLI::App* sub) { sub->add_option("--pade", pade, "Pade orders L M")->expected(2); };
  auto add_orders = [&](CLI::App* sub) { sub->add_option("--orders", cfg.orders, "spectral truncation orders")->delimiter(','); };

  auto* ce = app.add_subcommand("ce-coeffs", "exact CE coefficients a_2n and ratio analysis");
  add_common(ce);
  auto* disp = app.add_subcommand("dispersion", "exact, resummed, branch and truncated omega(k) on a k grid");
  add_common(disp);
  add_pade(disp);
  add_orders(disp);
  disp->add_option("--k-min", cfg.k_min);
  disp->add_option("--k-max", cfg.k_max);
  disp->add_option("--k-step", cfg.k_step);
  auto* folds = app.add_subcommand("folds", "fold points k_c(n) of the spectral branches");
  add_common(folds);
  add_orders(folds);
  auto* borel = app.add_subcommand("borel", "Borel coefficients and Pade poles");
  add_common(borel);
  add_pade(borel);
  borel->add_option("--series", series, "ce (CE coefficients) or source (F(x))")->check(CLI::IsMember({"ce", "source"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitConfig;
  }

  if (*ce) cfg.command = cli::Command::CeCoeffs;
  if (*disp) cfg.command = cli::Command::Dispersion;
  if (*folds) cfg.command = cli::Command::Folds;
  if (*borel) cfg.command = cli::Command::Borel;
  cfg.format = format == "json" ? cli::Format::Json : cli::Format::Csv;
  cfg.borel_source = series == "source" ? cli::BorelSource::Source : cli::BorelSource::CE;
  if (pade.size() == 2) {
    cfg.pade_L = pade[0];
    cfg.pade_M = pade[1];
  }
  return cli::run(cfg);
}
