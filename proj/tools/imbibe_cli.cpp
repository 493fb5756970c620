// imbibe: capillary imbibition simulator and calibration toolkit.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "imbibe/commands.hpp"
#include "imbibe/errors.hpp"
#include "json.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Capillary water absorption in porous mortars: simulate, calibrate, validate"};
  app.require_subcommand(1);

  imbibe::Overrides ov;
  std::string manifest, out, model, snapshots, input;
  std::uint64_t seed = 0;
  double dz = 0.0, dt = 0.0;

  for (const char* name : {"simulate", "calibrate", "retention", "sensitivity", "ingest"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--manifest", manifest, "Run manifest (JSON)");
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--seed", seed, "RNG seed");
    sub->add_option("--model", model, "Absorption model: cubic or kp")->check(CLI::IsMember({"cubic", "kp"}));
    sub->add_option("--dz", dz, "Grid spacing [cm]");
    sub->add_option("--dt", dt, "Time step [s]");
    sub->add_option("--snapshots", snapshots, "Comma-separated snapshot times [s]");
    if (std::string(name) == "ingest") sub->add_option("--input", input, "Raw imbibition CSV (t_s,w_g)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << nlohmann::json{{"error", {{"kind", "UsageError"}, {"message", e.what()}}}}.dump() << '\n';
    return 2;
  }

  auto* sub = app.get_subcommands().front();
  try {
    if (sub->count("--manifest")) ov.manifest = manifest;
    if (sub->count("--out")) ov.out = out;
    if (sub->count("--seed")) ov.seed = seed;
    if (sub->count("--model")) ov.model = model;
    if (sub->count("--dz")) ov.dz = dz;
    if (sub->count("--dt")) ov.dt = dt;
    if (sub->count("--snapshots")) ov.snapshots = imbibe::parse_number_list(snapshots);
    if (sub->get_name() == "ingest" && sub->count("--input")) ov.input = input;
    return imbibe::execute(imbibe::parse_command(sub->get_name()), ov, std::cout, std::cerr);
  } catch (const imbibe::Error& e) {
    std::cerr << nlohmann::json{{"error", {{"kind", e.kind()}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  }
}
