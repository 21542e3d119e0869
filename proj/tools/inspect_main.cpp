// inspect: offline replay, live serving and snap-grid dumps for a mesh.
//
//   inspect replay --mesh m.obj --frames f.jsonl --config c.cfg --log out.csv --metrics out.json
//   inspect serve  --mesh m.obj --config c.cfg --bind 127.0.0.1:8080 [--assets ui/dist]
//   inspect grid   --mesh m.obj --out grid.txt [--config c.cfg]
//
// Exit codes: 0 success, 1 input error, 2 runtime error.

#include <fstream>
#include <iostream>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "inspect/config.hpp"
#include "inspect/errors.hpp"
#include "inspect/session.hpp"
#include "inspect/snapgrid.hpp"
#ifdef INSPECT_WITH_SERVICE
#include "inspect/service.hpp"
#endif

namespace {

constexpr int kExitInput = 1;
constexpr int kExitRuntime = 2;

inspect::SessionConfig config_for(const std::string& config_path, const std::string& mesh_path) {
  inspect::SessionConfig cfg =
      config_path.empty() ? inspect::SessionConfig{} : inspect::load_config(config_path);
  if (!mesh_path.empty()) cfg.mesh_path = mesh_path;
  return cfg;
}

int run_replay(const std::string& mesh, const std::string& frames, const std::string& config,
               const std::string& log, const std::string& metrics) {
  const inspect::ReplayResult r =
      inspect::replay(config_for(config, mesh), frames, log, metrics);
  std::cout << "replayed " << r.frames << " frames, " << r.records << " log records\n";
  return 0;
}

int run_grid(const std::string& mesh, const std::string& config, const std::string& out_path) {
  inspect::SessionConfig cfg = config_for(config, mesh);
  inspect::TriangleMesh m = inspect::load_obj(cfg.mesh_path);
  if (cfg.meters_per_model_unit != 1.0) inspect::scale_vertices(m, cfg.meters_per_model_unit);
  const auto p = inspect::resolve_grid_params(cfg.grid, inspect::mesh_aabb(m));
  const inspect::SnapGrid grid = inspect::generate_snap_grid(m, p.step, p.point_radius, p.snap_radius);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw inspect::FileError("cannot open grid output: " + out_path);
  inspect::write_grid_dump(grid, out);
  std::cout << grid.size() << " snap points (step " << p.step << ")\n";
  return 0;
}

#ifdef INSPECT_WITH_SERVICE
int run_serve(const std::string& mesh, const std::string& config, const std::string& bind,
              const std::string& assets) {
  inspect::ServiceOptions options = inspect::parse_bind(bind);
  options.assets_dir = assets;
  inspect::InspectionService service(inspect::new_session(config_for(config, mesh)), options);
  try {
    service.start();
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  std::cout << "serving on ws://" << options.host << ':' << service.port() << '\n' << std::flush;
  service.run_until_signal();
  return 0;
}
#endif

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic headless 3D mesh inspection engine"};
  app.require_subcommand(1);

  std::string mesh, frames, config, log, metrics, bind = "127.0.0.1:8080", out, assets;

  auto* replay = app.add_subcommand("replay", "Replay a frame stream offline");
  replay->add_option("--mesh", mesh, "OBJ mesh")->required();
  replay->add_option("--frames", frames, "JSON-lines frame stream")->required();
  replay->add_option("--config", config, "key = value config file");
  replay->add_option("--log", log, "measurement log CSV output");
  replay->add_option("--metrics", metrics, "manipulation metrics JSON output");

  auto* grid = app.add_subcommand("grid", "Write the snap grid dump");
  grid->add_option("--mesh", mesh, "OBJ mesh")->required();
  grid->add_option("--out", out, "grid dump output")->required();
  grid->add_option("--config", config, "key = value config file");

#ifdef INSPECT_WITH_SERVICE
  auto* serve = app.add_subcommand("serve", "Serve a live session over WebSocket");
  serve->add_option("--mesh", mesh, "OBJ mesh")->required();
  serve->add_option("--config", config, "key = value config file");
  serve->add_option("--bind", bind, "host:port")->capture_default_str();
  serve->add_option("--assets", assets, "directory of static UI files");
#endif

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (replay->parsed()) return run_replay(mesh, frames, config, log, metrics);
    if (grid->parsed()) return run_grid(mesh, config, out);
#ifdef INSPECT_WITH_SERVICE
    if (serve->parsed()) return run_serve(mesh, config, bind, assets);
#endif
  } catch (const inspect::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
