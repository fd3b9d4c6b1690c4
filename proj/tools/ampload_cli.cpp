#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ampload/ampload.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitFlags = 2;
constexpr int kExitCap = 3;
constexpr int kExitZeroPoly = 4;
constexpr int kExitGolden = 5;

struct CliError {
  int code;
  std::string message;
};

int exit_code(ampload_status s) {
  switch (s) {
    case AMPLOAD_E_INVALID_ARGUMENT:
    case AMPLOAD_E_CONFIG: return kExitFlags;
    case AMPLOAD_E_RESOURCE: return kExitCap;
    case AMPLOAD_E_DEGENERATE: return kExitZeroPoly;
    default: return kExitFailure;
  }
}

void check(ampload_status s) {
  if (s != AMPLOAD_OK) throw CliError{exit_code(s), ampload_last_error()};
}

std::string prepare_out(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw CliError{kExitFlags, "cannot create output directory '" + dir + "'"};
  return dir;
}

std::string join(const std::string& dir, const char* file) { return (std::filesystem::path(dir) / file).string(); }

struct Owned {
  ampload_result* result = nullptr;
  ampload_noise* noise = nullptr;
  ampload_bench* bench = nullptr;
  ~Owned() {
    ampload_result_free(result);
    ampload_noise_free(noise);
    ampload_bench_free(bench);
  }
};

ampload_noise* load_noise(const std::string& path) {
  ampload_noise* nm = nullptr;
  check(ampload_noise_load(path.c_str(), &nm));
  return nm;
}

void summary(const char* method, const ampload_metrics& m, const ampload_noise_metrics* noisy) {
  std::printf("%s n=%d k0_or_chi=%d fidelity=%.10g l2=%.10g", method, m.n, m.k0_or_chi, m.fidelity, m.l2);
  if (noisy) std::printf(" noisy_fidelity=%.10g noisy_l2=%.10g", noisy->noisy_fidelity, noisy->noisy_l2);
  std::printf("\n");
}

struct LinearArgs {
  int n = 0;
  int k0 = 0;
  std::string method = "dhwt";
  int chi = 1;
  std::string noise;
  std::size_t shots = 0;
  std::uint64_t seed = 20240917;
  std::string out = ".";
};

int cmd_linear(const LinearArgs& a) {
  const bool dhwt = a.method == "dhwt";
  const int k0 = a.k0 > 0 ? a.k0 : a.n;
  Owned own;
  ampload_request req;
  check(ampload_request_init(&req));
  const double ramp[] = {0.0, 1.0};
  req.n = a.n;
  req.method = dhwt ? AMPLOAD_METHOD_DHWT_LINEAR : AMPLOAD_METHOD_MPS;
  req.k0 = k0;
  req.chi = a.chi;
  req.coeffs = ramp;
  req.num_coeffs = 2;
  check(ampload_run(&req, &own.result));

  ampload_noise_metrics noisy{};
  const bool with_noise = !a.noise.empty();
  if (with_noise) {
    own.noise = load_noise(a.noise);
    check(ampload_linear_noise(a.n, req.method, dhwt ? k0 : a.chi, own.noise, a.shots, a.seed, &noisy));
  }
  const std::string dir = prepare_out(a.out);
  check(ampload_result_write_state_csv(own.result, join(dir, "state.csv").c_str()));
  check(ampload_result_write_metrics_csv(own.result, with_noise ? &noisy : nullptr, join(dir, "metrics.csv").c_str()));
  ampload_metrics m;
  check(ampload_result_metrics(own.result, &m));
  summary(ampload_result_method(own.result), m, with_noise ? &noisy : nullptr);
  return 0;
}

struct PolyArgs {
  int n = 0;
  std::vector<double> coeffs;
  std::vector<std::string> roots;
  std::string method = "dhwt-qsvt";
  int k0 = 0;
  int chi = 1;
  std::string mode = "oracle";
  std::string out = ".";
};

int cmd_poly(const PolyArgs& a) {
  if (a.coeffs.empty() == a.roots.empty()) throw CliError{kExitFlags, "give exactly one of --coeffs and --roots"};
  Owned own;
  ampload_request req;
  check(ampload_request_init(&req));
  if (!ampload_method_parse(a.method.c_str(), &req.method)) throw CliError{kExitFlags, "unknown method " + a.method};
  std::vector<const char*> roots;
  for (const auto& r : a.roots) roots.push_back(r.c_str());
  req.n = a.n;
  req.k0 = a.k0 > 0 ? a.k0 : a.n;
  req.chi = a.chi;
  req.qsvt_mode = a.mode == "circuit" ? AMPLOAD_QSVT_CIRCUIT : AMPLOAD_QSVT_ORACLE;
  req.coeffs = a.coeffs.data();
  req.num_coeffs = a.coeffs.size();
  req.roots = roots.data();
  req.num_roots = roots.size();
  check(ampload_run(&req, &own.result));
  const std::string dir = prepare_out(a.out);
  check(ampload_result_write_state_csv(own.result, join(dir, "state.csv").c_str()));
  check(ampload_result_write_metrics_csv(own.result, nullptr, join(dir, "metrics.csv").c_str()));
  check(ampload_result_write_profile_svg(own.result, join(dir, "profile.svg").c_str()));
  ampload_metrics m;
  check(ampload_result_metrics(own.result, &m));
  summary(ampload_result_method(own.result), m, nullptr);
  return 0;
}

struct BenchArgs {
  std::string suite;
  std::string noise;
  std::string out = ".";
};

int cmd_bench(const BenchArgs& a) {
  if (!a.noise.empty() && a.suite != "fig4") throw CliError{kExitFlags, "--noise applies to the fig4 suite only"};
  Owned own;
  if (!a.noise.empty()) own.noise = load_noise(a.noise);
  check(ampload_bench_run(a.suite.c_str(), own.noise, &own.bench));
  const std::string dir = prepare_out(a.out);
  const std::string file = join(dir, (a.suite + ".csv").c_str());
  check(ampload_bench_write_csv(own.bench, file.c_str()));
  const std::size_t bad = ampload_bench_mismatch_count(own.bench);
  std::printf("bench %s rows=%zu mismatches=%zu soft_misses=%zu csv=%s\n", a.suite.c_str(),
              ampload_bench_row_count(own.bench), bad, ampload_bench_soft_miss_count(own.bench), file.c_str());
  if (bad == 0) return 0;
  for (std::size_t i = 0; i < bad; ++i) std::fprintf(stderr, "golden mismatch: %s\n", ampload_bench_mismatch(own.bench, i));
  return kExitGolden;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Amplitude loading of linear and polynomial functions"};
  app.set_version_flag("--version", std::string(ampload_version()));
  app.require_subcommand(1);

  LinearArgs la;
  auto* lin = app.add_subcommand("linear", "Load the ramp j / C_n");
  lin->add_option("--n", la.n, "Number of qubits")->required()->check(CLI::Range(1, 30));
  lin->add_option("--k0", la.k0, "Retained qubits for dhwt (default n)")->check(CLI::Range(1, 30));
  lin->add_option("--method", la.method, "dhwt or mps")->check(CLI::IsMember({"dhwt", "mps"}));
  lin->add_option("--chi", la.chi, "Bond dimension for mps")->check(CLI::Range(1, 1 << 15));
  lin->add_option("--noise", la.noise, "Noise model INI file")->check(CLI::ExistingFile);
  lin->add_option("--shots", la.shots, "Sample the noisy readout (0: exact distribution)");
  lin->add_option("--seed", la.seed, "Sampling seed");
  lin->add_option("--out", la.out, "Output directory");

  PolyArgs pa;
  auto* poly = app.add_subcommand("poly", "Load a polynomial profile");
  poly->add_option("--n", pa.n, "Number of qubits")->required()->check(CLI::Range(1, 30));
  poly->add_option("--coeffs", pa.coeffs, "c0,c1,... in the monomial basis")->delimiter(',');
  poly->add_option("--roots", pa.roots, "r1,r2,... as p/q or decimals")->delimiter(',');
  poly->add_option("--method", pa.method, "dhwt-qsvt, mps or mps-lin-qsvt")
      ->check(CLI::IsMember({"dhwt-qsvt", "mps", "mps-lin-qsvt"}));
  poly->add_option("--k0", pa.k0, "Retained qubits for dhwt-qsvt (default n)")->check(CLI::Range(1, 30));
  poly->add_option("--chi", pa.chi, "Bond dimension for mps")->check(CLI::Range(1, 1 << 15));
  poly->add_option("--qsvt-mode", pa.mode, "circuit or oracle")->check(CLI::IsMember({"circuit", "oracle"}));
  poly->add_option("--out", pa.out, "Output directory");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Regenerate a reference table and diff it");
  bench->add_option("--suite", ba.suite, "table3, table6 or fig4")
      ->required()
      ->check(CLI::IsMember({"table3", "table6", "fig4"}));
  bench->add_option("--noise", ba.noise, "Noise model INI file (fig4)")->check(CLI::ExistingFile);
  bench->add_option("--out", ba.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitFlags;
  }

  try {
    if (*lin) return cmd_linear(la);
    if (*poly) return cmd_poly(pa);
    return cmd_bench(ba);
  } catch (const CliError& e) {
    std::fprintf(stderr, "ampload: %s\n", e.message.c_str());
    return e.code;
  }
}
