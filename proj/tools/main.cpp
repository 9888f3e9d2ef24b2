#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "vexlp/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"variable-exponent Lebesgue space verification harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir, grid_n, grid_points, half_width, seed;

  std::vector<CLI::App*> subs;
  for (const std::string& name : vexlp::harness::subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config file")
        ->required();
    sub->add_option("--out", out_dir, "output directory override");
    sub->add_option("--seed", seed, "seed override");
    sub->add_option("--grid-n", grid_n, "grid dimension override (1 or 2)");
    sub->add_option("--grid-points", grid_points,
                    "points per axis override (power of two)");
    sub->add_option("--half-width", half_width, "box half width override");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    vexlp::harness::ExperimentConfig cfg =
        vexlp::harness::parse_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!seed.empty()) cfg.seed = std::stoull(seed);
    if (!grid_n.empty()) cfg.grid.dimension = std::stoi(grid_n);
    if (!grid_points.empty()) cfg.grid.points = std::stoi(grid_points);
    if (!half_width.empty()) cfg.grid.half_width = std::stod(half_width);

    const std::string sub = app.get_subcommands().front()->get_name();
    return vexlp::harness::run(sub, cfg);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
