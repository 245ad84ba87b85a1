// Copyright 2026 The cshe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cshe: security sweeps, oracle cross-checks and protocol demos.
//
// Exit codes: 0 success, 1 usage error, 2 invariant failure,
// 3 capability error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cshe/encoding.hpp"
#include "cshe/errors.hpp"
#include "cshe/oracle_suite.hpp"
#include "cshe/protocol.hpp"
#include "cshe/sweep.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitCapability = 3;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cshe::UsageError("cannot open '" + path + "' for writing");
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cshe::UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

cshe::EnergyRule parse_rule(const std::string& s) {
  if (s == "alpha") return cshe::EnergyRule::kAlphaGrid;
  if (s == "fixed") return cshe::EnergyRule::kFixed;
  if (s == "power") return cshe::EnergyRule::kPower;
  throw cshe::UsageError("energy rule must be alpha, fixed or power");
}

std::optional<int> parse_d(const std::string& s) {
  if (s == "inf") return std::nullopt;
  const auto values = cshe::parse_int_list(s);
  if (values.size() != 1) throw cshe::UsageError("--d takes a single integer or 'inf'");
  return values.front();
}

struct SweepArgs {
  std::string quantity = "enc_distance";
  std::string m = "10";
  std::string d = "100";
  std::string w = "1";
  std::string rule = "alpha";
  double alpha_min = 0.0;
  double alpha_max = 2.0;
  double alpha_step = 0.02;
  double energy = 1.0;
  double exponent = 0.3;
  std::string out;
};

struct MutinfoArgs {
  std::string m = "2:20";
  std::string rule = "fixed";
  double energy = 1.0;
  double exponent = 0.3;
  std::string d = "100";
  std::string out;
};

struct DemoArgs {
  int m = 3;
  int d = 100;
  double alpha = 1.0;
  std::string x;
  std::string circuit;
  std::uint64_t seed = 1;
  std::string out;
};

int run_sweep(const SweepArgs& a) {
  cshe::SweepSpec spec;
  spec.quantity = cshe::parse_quantity(a.quantity);
  spec.ms = cshe::parse_int_list(a.m);
  spec.d = parse_d(a.d);
  spec.ws = cshe::parse_int_list(a.w);
  spec.rule = parse_rule(a.rule);
  spec.alpha = {a.alpha_min, a.alpha_max, a.alpha_step};
  spec.energy = a.energy;
  spec.exponent = a.exponent;
  write_output(a.out, cshe::security_sweep_csv(spec));
  return 0;
}

int run_mutinfo(const MutinfoArgs& a) {
  cshe::MutinfoSpec spec;
  spec.ms = cshe::parse_int_list(a.m);
  spec.rule = parse_rule(a.rule);
  spec.energy = a.energy;
  spec.exponent = a.exponent;
  (void)parse_d(a.d);  // the PGM bound does not depend on d
  write_output(a.out, cshe::mutinfo_csv(spec));
  return 0;
}

int run_oracle(const std::string& level, const std::string& out) {
  if (level != "fast" && level != "full") throw cshe::UsageError("--level must be fast or full");
  const auto report = cshe::run_oracle_suite(level == "full" ? cshe::OracleLevel::kFull : cshe::OracleLevel::kFast);
  write_output(out, report.format());
  return report.all_passed() ? 0 : kExitInvariant;
}

int run_demo(const DemoArgs& a) {
  std::string bits = a.x;
  if (bits.empty()) {
    for (int i = 0; i < a.m; ++i) bits.push_back(i % 2 ? '1' : '0');
  }
  const auto x = cshe::BitString::parse(bits);
  if (x.size() != a.m) throw cshe::UsageError("--x length differs from --m");
  const cshe::CircuitDescription circuit =
      a.circuit.empty() ? cshe::CircuitDescription{} : cshe::parse_circuit(read_file(a.circuit));
  const auto t = cshe::run_protocol(x, a.alpha, a.d, circuit, a.seed);
  write_output(a.out, t.to_jsonl());

  std::ostream& log = (a.out.empty() || a.out == "-") ? std::cerr : std::cout;
  log << "verdict: " << (t.correct ? "correct" : "INCORRECT") << " x=" << x.to_string()
      << " y=" << t.decryption.bits.to_string() << " reference=" << t.reference.to_string() << '\n';
  if (t.trivial_key_space()) log << "warning: no security: trivial key space\n";
  if (t.cat_fidelity) log << "cat_fidelity: " << cshe::format_double(*t.cat_fidelity) << '\n';
  return t.correct ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent-state phase-key homomorphic encryption: security analysis and protocol simulator"};
  app.require_subcommand(1);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand(
      "sweep",
      "Trace-distance figure data as CSV (quantity,m,d,abs_alpha,E,w,value).\n"
      "  enc_distance vs |alpha| at m=10, d=100, one curve per w = 1..10\n"
      "  unenc_distance vs |alpha| at m=10, one curve per w\n"
      "  ratio (encrypted / unencrypted) vs |alpha| at m=10, d=100, one curve per w\n"
      "  ratio vs m = 2..12 at w=1, d=100 with --energy-rule fixed --E 1.0 or --energy-rule power --r 0.3");
  sweep_cmd->add_option("--quantity", sweep.quantity, "enc_distance | unenc_distance | ratio | mutinfo")
      ->capture_default_str();
  sweep_cmd->add_option("--m", sweep.m, "modes: N, LO:HI or list")->capture_default_str();
  sweep_cmd->add_option("--d", sweep.d, "key-space size or 'inf'")->capture_default_str();
  sweep_cmd->add_option("--w", sweep.w, "Hamming weights wt(u xor v): N, LO:HI or list")->capture_default_str();
  sweep_cmd->add_option("--energy-rule", sweep.rule, "alpha (grid) | fixed (E) | power (E = m^r)")
      ->capture_default_str();
  sweep_cmd->add_option("--alpha-min", sweep.alpha_min)->capture_default_str();
  sweep_cmd->add_option("--alpha-max", sweep.alpha_max)->capture_default_str();
  sweep_cmd->add_option("--alpha-step", sweep.alpha_step)->capture_default_str();
  sweep_cmd->add_option("--E", sweep.energy, "total energy m|alpha|^2 for --energy-rule fixed")
      ->capture_default_str();
  sweep_cmd->add_option("--r", sweep.exponent, "exponent for --energy-rule power")->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "output CSV path (default stdout)");

  MutinfoArgs mutinfo;
  auto* mutinfo_cmd = app.add_subcommand(
      "mutinfo",
      "Pretty-good-measurement information vs code length as CSV (m,E,abs_alpha,i_total).\n"
      "  figure data: m = 2..20 with --energy-rule fixed --E 1.0 and with --energy-rule power --r 0.3");
  mutinfo_cmd->add_option("--m", mutinfo.m, "modes: N, LO:HI or list")->capture_default_str();
  mutinfo_cmd->add_option("--energy-rule", mutinfo.rule, "fixed | power")->capture_default_str();
  mutinfo_cmd->add_option("--E", mutinfo.energy)->capture_default_str();
  mutinfo_cmd->add_option("--r", mutinfo.exponent)->capture_default_str();
  mutinfo_cmd->add_option("--d", mutinfo.d, "key-space size (the bound is independent of d)")
      ->capture_default_str();
  mutinfo_cmd->add_option("--out", mutinfo.out, "output CSV path (default stdout)");

  std::string level = "fast";
  std::string oracle_out;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Cross-check closed forms against brute-force Fock-space oracles");
  oracle_cmd->add_option("--level", level, "fast (m <= 2) | full (adds m = 3 and the PGM)")->capture_default_str();
  oracle_cmd->add_option("--out", oracle_out, "report path (default stdout)");

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("protocol-demo", "Run keygen, encrypt, evaluate, decrypt and write a JSONL transcript");
  demo_cmd->add_option("--m", demo.m)->capture_default_str();
  demo_cmd->add_option("--d", demo.d)->capture_default_str();
  demo_cmd->add_option("--alpha", demo.alpha, "real coherent amplitude")->capture_default_str();
  demo_cmd->add_option("--x", demo.x, "input bits, e.g. 0110 (default alternating)");
  demo_cmd->add_option("--circuit", demo.circuit, "circuit JSON file (default empty circuit)");
  demo_cmd->add_option("--seed", demo.seed)->capture_default_str();
  demo_cmd->add_option("--out", demo.out, "transcript path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sweep_cmd) return run_sweep(sweep);
    if (*mutinfo_cmd) return run_mutinfo(mutinfo);
    if (*oracle_cmd) return run_oracle(level, oracle_out);
    if (*demo_cmd) return run_demo(demo);
  } catch (const cshe::CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << '\n';
    return kExitCapability;
  } catch (const cshe::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cshe::UndecodableError& e) {
    std::cerr << "undecodable: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const cshe::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
