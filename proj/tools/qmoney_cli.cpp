// SPDX-License-Identifier: Apache-2.0
//
// Scenario-driven command line front end: run protocol scenarios and
// adversary games, mint a demo banknote blob, or inspect a serialized blob.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "qmoney/banknote.hpp"
#include "qmoney/harness.hpp"
#include "qmoney/wire.hpp"

namespace {

using namespace qmoney;

int cmd_run(const ScenarioConfig& config, const std::string& out_path) {
  Report report;
  try {
    report = run_scenario(config);
  } catch (const InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const UnknownScenario& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  const std::string text = report.render();
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 1;
    }
    out << text;
  } else {
    std::cout << text;
  }
  if (!report.ok) {
    std::cerr << "scenario assertion failed: " << config.scenario << "\n";
    return 2;
  }
  return 0;
}

int cmd_mint_demo(const ScenarioConfig& config, const std::string& out_path) {
  try {
    config.validate();
    QubitStore store(config.seed, config.noise_p);
    Rng rng(config.seed ^ 0x64656d6fULL);
    MintAuthority mint(config.seed, config.merkle_depth);
    NoteParams params;
    params.zeta = config.zeta;
    params.xi = config.xi;
    params.otm.n_otm = config.n_otm;
    params.otm.delta = config.delta;
    params.otm.secret_len = config.l_kappa;
    const Banknote note = mint.mint(store, params, 1, rng);
    const Bytes blob = serialize_banknote(note);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 1;
    }
    out.write(reinterpret_cast<const char*>(blob.data()),
              static_cast<std::streamsize>(blob.size()));
    std::cout << "note_id = " << to_hex(note.classical->note_id) << "\n"
              << "mint_pk = " << to_hex(mint.public_key()) << "\n"
              << "bytes = " << blob.size() << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_inspect(const std::string& in_path, std::uint32_t l_kappa) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << in_path << "\n";
    return 1;
  }
  const Bytes blob((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  try {
    const Banknote note = deserialize_banknote(blob, l_kappa);
    std::cout << "note_id = " << to_hex(note.classical->note_id) << "\n"
              << "zeta = " << note.zeta() << "\n"
              << "sealed = " << note.otms.size() << "\n"
              << "revealed = " << note.revealed.size() << "\n";
    std::string sealed_ids;
    for (const auto& [j, inst] : note.otms) {
      (void)inst;
      sealed_ids += (sealed_ids.empty() ? "" : " ") + std::to_string(j);
    }
    std::cout << "sealed_indices = " << sealed_ids << "\n";
    for (const auto& [k, e] : note.revealed)
      std::cout << "revealed[" << k << "] bit=" << int(e.bit)
                << " kappa=" << to_hex(e.kappa).substr(0, 16) << "...\n";
    std::size_t slot = 0;
    for (const Digest& d : note.classical->hashes) {
      std::cout << "hash[" << slot / 2 << "," << slot % 2
                << "] = " << to_hex(d) << "\n";
      ++slot;
    }
    return 0;
  } catch (const MalformedBlob& e) {
    std::cerr << "malformed blob: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"publicly verifiable quantum money simulator"};
  app.require_subcommand(1);

  ScenarioConfig config;
  std::string out_path;
  std::string in_path;

  auto* run = app.add_subcommand("run", "run a scenario and emit its report");
  run->add_option("--scenario", config.scenario, "scenario name")->required();
  run->add_option("--seed", config.seed, "rng seed");
  run->add_option("--zeta", config.zeta, "memories per note");
  run->add_option("--xi", config.xi, "cut-and-choose sample size");
  run->add_option("--n-otm", config.n_otm, "qubits per memory");
  run->add_option("--delta", config.delta, "token mismatch tolerance");
  run->add_option("--noise-p", config.noise_p, "measurement bit-flip rate");
  run->add_option("--trials", config.trials, "trial count (0 = default)");
  run->add_option("--merkle-depth", config.merkle_depth, "mint key tree depth");
  run->add_option("--out", out_path, "write the report to FILE");

  auto* list = app.add_subcommand("list", "list available scenarios");

  auto* demo =
      app.add_subcommand("mint-demo", "mint a note, write its classical blob");
  demo->add_option("--seed", config.seed, "rng seed");
  demo->add_option("--zeta", config.zeta, "memories per note");
  demo->add_option("--xi", config.xi, "cut-and-choose sample size");
  demo->add_option("--n-otm", config.n_otm, "qubits per memory");
  demo->add_option("--delta", config.delta, "token mismatch tolerance");
  demo->add_option("--noise-p", config.noise_p, "measurement bit-flip rate");
  demo->add_option("--merkle-depth", config.merkle_depth, "mint key tree depth");
  demo->add_option("--out", out_path, "output blob file")->required();

  auto* inspect =
      app.add_subcommand("inspect", "pretty-print a serialized banknote blob");
  std::uint32_t l_kappa = 128;
  inspect->add_option("file", in_path, "blob file")->required();
  inspect->add_option("--l-kappa", l_kappa, "pre-image length in bytes");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config, out_path);
  if (list->parsed()) {
    for (const auto& name : qmoney::list_scenarios()) std::cout << name << "\n";
    return 0;
  }
  if (demo->parsed()) return cmd_mint_demo(config, out_path);
  if (inspect->parsed()) return cmd_inspect(in_path, l_kappa);
  return 1;
}
