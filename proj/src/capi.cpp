#include "ampload/ampload.h"

#include <cmath>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "ampload/bench.hpp"
#include "ampload/error.hpp"
#include "ampload/linload.hpp"
#include "ampload/noise.hpp"
#include "ampload/pipeline.hpp"
#include "ampload/qsvt.hpp"
#include "ampload/svg.hpp"

struct ampload_result {
  ampload::pipeline::LoadResult r;
};

struct ampload_noise {
  ampload::sim::NoiseModel m;
};

struct ampload_bench {
  ampload::bench::BenchReport report;
  std::vector<std::string> mismatches;
};

namespace {

using namespace ampload;

thread_local std::string g_last_error;

ampload_status set_error(ampload_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
ampload_status guard(F&& f) {
  try {
    f();
    return AMPLOAD_OK;
  } catch (const Error& e) {
    return set_error(static_cast<ampload_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(AMPLOAD_E_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return set_error(AMPLOAD_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(AMPLOAD_E_INTERNAL, "unknown failure");
  }
}

void need(const void* p, const char* what) {
  require(p != nullptr, ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

std::ofstream open_out(const char* path) {
  need(path, "path");
  std::ofstream f(path, std::ios::binary);
  require(f.good(), ErrorCode::Io, std::string("cannot open '") + path + "' for writing");
  return f;
}

void close_out(std::ofstream& f, const char* path) {
  f.close();
  require(!f.fail(), ErrorCode::Io, std::string("write to '") + path + "' failed");
}

pipeline::PolynomialSpec polynomial_from(const ampload_request& req) {
  const bool has_c = req.num_coeffs > 0, has_r = req.num_roots > 0;
  if (req.method == AMPLOAD_METHOD_DHWT_LINEAR && !has_c && !has_r) return {};
  require(has_c != has_r, ErrorCode::InvalidArgument, "give exactly one of coefficients and roots");
  if (has_c) {
    need(req.coeffs, "coeffs");
    return pipeline::PolynomialSpec(std::vector<double>(req.coeffs, req.coeffs + req.num_coeffs));
  }
  need(req.roots, "roots");
  std::vector<pipeline::Root> roots;
  for (std::size_t i = 0; i < req.num_roots; ++i) {
    need(req.roots[i], "root string");
    roots.push_back(pipeline::parse_root(req.roots[i]));
  }
  return pipeline::expand_roots(roots);
}

pipeline::PolynomialSpec coeff_poly(const double* c, std::size_t n) {
  need(c, "coeffs");
  require(n > 0, ErrorCode::InvalidArgument, "no coefficients");
  return pipeline::PolynomialSpec(std::vector<double>(c, c + n));
}

pipeline::Method method_of(ampload_method m) {
  switch (m) {
    case AMPLOAD_METHOD_DHWT_QSVT: return pipeline::Method::DhwtQsvt;
    case AMPLOAD_METHOD_MPS: return pipeline::Method::MpsDirect;
    case AMPLOAD_METHOD_MPS_LIN_QSVT: return pipeline::Method::MpsLinQsvt;
    case AMPLOAD_METHOD_DHWT_LINEAR: return pipeline::Method::DhwtExactLinear;
  }
  fail(ErrorCode::InvalidArgument, "unknown method");
}

void fill_noise(const pipeline::LinearNoiseRow& row, ampload_noise_metrics* out) {
  out->cx_count = row.cx_count;
  out->ideal_fidelity = row.ideal_fidelity;
  out->ideal_l2 = row.ideal_l2;
  out->noisy_fidelity = row.noisy_fidelity;
  out->noisy_l2 = row.noisy_l2;
}

}  // namespace

extern "C" {

const char* ampload_version(void) { return "0.1.0"; }

const char* ampload_last_error(void) { return g_last_error.c_str(); }

const char* ampload_status_string(ampload_status s) {
  switch (s) {
    case AMPLOAD_OK: return "ok";
    case AMPLOAD_E_INVALID_ARGUMENT: return "invalid argument";
    case AMPLOAD_E_STRUCTURAL: return "structural error";
    case AMPLOAD_E_RESOURCE: return "resource limit";
    case AMPLOAD_E_UNSUPPORTED: return "unsupported";
    case AMPLOAD_E_CONFIG: return "configuration error";
    case AMPLOAD_E_DOMAIN: return "domain error";
    case AMPLOAD_E_NUMERIC: return "numeric error";
    case AMPLOAD_E_SOLVER: return "solver failure";
    case AMPLOAD_E_PRECONDITION: return "precondition violated";
    case AMPLOAD_E_NORMALIZATION: return "normalization error";
    case AMPLOAD_E_DEGENERATE: return "degenerate input";
    case AMPLOAD_E_IO: return "i/o error";
    case AMPLOAD_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int ampload_method_parse(const char* name, ampload_method* out) {
  if (!name || !out) return 0;
  try {
    switch (pipeline::parse_method(name)) {
      case pipeline::Method::DhwtQsvt: *out = AMPLOAD_METHOD_DHWT_QSVT; break;
      case pipeline::Method::MpsDirect: *out = AMPLOAD_METHOD_MPS; break;
      case pipeline::Method::MpsLinQsvt: *out = AMPLOAD_METHOD_MPS_LIN_QSVT; break;
      case pipeline::Method::DhwtExactLinear: *out = AMPLOAD_METHOD_DHWT_LINEAR; break;
    }
    return 1;
  } catch (const std::exception&) {
    return 0;
  }
}

ampload_status ampload_request_init(ampload_request* req) {
  return guard([&] {
    need(req, "request");
    *req = ampload_request{};
    req->method = AMPLOAD_METHOD_DHWT_QSVT;
    req->chi = 1;
    req->qsvt_mode = AMPLOAD_QSVT_ORACLE;
  });
}

ampload_status ampload_run(const ampload_request* req, ampload_result** out) {
  return guard([&] {
    need(req, "request");
    need(out, "out");
    *out = nullptr;
    pipeline::LoadRequest r;
    r.n = req->n;
    r.method = method_of(req->method);
    r.k0 = req->k0;
    r.chi = req->chi;
    r.mode = req->qsvt_mode == AMPLOAD_QSVT_CIRCUIT ? pipeline::QsvtMode::Circuit : pipeline::QsvtMode::Oracle;
    r.polynomial = polynomial_from(*req);
    if (req->gamma > 0.0) r.gamma = req->gamma;
    *out = new ampload_result{pipeline::run(r)};
  });
}

void ampload_result_free(ampload_result* result) { delete result; }

ampload_status ampload_result_metrics(const ampload_result* result, ampload_metrics* out) {
  return guard([&] {
    need(result, "result");
    need(out, "out");
    const auto& r = result->r;
    out->n = r.n;
    out->k0_or_chi = r.k0_or_chi;
    out->fidelity = r.fidelity;
    out->l2 = r.l2;
    out->filling_ratio = r.filling_ratio;
    out->success_prob = r.success_prob;
    out->aa_rounds = r.resources.aa_rounds;
    out->delta_inf = r.delta_inf;
    out->delta_inf_bound = r.delta_inf_bound;
    out->delta_within_bound = r.delta_within_bound ? 1 : 0;
    out->gate_count = r.resources.gate_count;
    out->ancillas = r.resources.ancillas;
    out->loader_queries = r.resources.loader_queries;
  });
}

const char* ampload_result_method(const ampload_result* result) {
  return result ? pipeline::method_name(result->r.method).data() : "";
}

size_t ampload_result_size(const ampload_result* result) { return result ? result->r.state.size() : 0; }

ampload_status ampload_result_amplitudes(const ampload_result* result, double* re, double* im, size_t len) {
  return guard([&] {
    need(result, "result");
    need(re, "re");
    require(len == result->r.state.size(), ErrorCode::InvalidArgument, "buffer length does not match the state");
    for (std::size_t j = 0; j < len; ++j) {
      re[j] = result->r.state[j].real();
      if (im) im[j] = result->r.state[j].imag();
    }
  });
}

ampload_status ampload_result_target(const ampload_result* result, double* out, size_t len) {
  return guard([&] {
    need(result, "result");
    need(out, "out");
    require(len == result->r.target.size(), ErrorCode::InvalidArgument, "buffer length does not match the state");
    for (std::size_t j = 0; j < len; ++j) out[j] = result->r.target[j].real();
  });
}

ampload_status ampload_result_write_state_csv(const ampload_result* result, const char* path) {
  return guard([&] {
    need(result, "result");
    std::ofstream f = open_out(path);
    f << "index,amplitude\n";
    for (std::size_t j = 0; j < result->r.state.size(); ++j)
      f << j << ',' << pipeline::format_number(result->r.state[j].real()) << '\n';
    close_out(f, path);
  });
}

ampload_status ampload_result_write_metrics_csv(const ampload_result* result, const ampload_noise_metrics* noisy,
                                                const char* path) {
  return guard([&] {
    need(result, "result");
    std::ofstream f = open_out(path);
    f << pipeline::kCsvHeader;
    if (noisy) f << ",cx_count,noisy_fidelity,noisy_l2";
    f << '\n';
    std::ostringstream row;
    pipeline::write_csv_row(row, result->r);
    std::string s = row.str();
    s.pop_back();
    f << s;
    if (noisy)
      f << ',' << noisy->cx_count << ',' << pipeline::format_number(noisy->noisy_fidelity) << ','
        << pipeline::format_number(noisy->noisy_l2);
    f << '\n';
    close_out(f, path);
  });
}

ampload_status ampload_result_write_profile_svg(const ampload_result* result, const char* path) {
  return guard([&] {
    need(result, "result");
    std::ofstream f = open_out(path);
    const auto& r = result->r;
    plot::Series target{"target", r.target.real_parts(), "#1f77b4"};
    plot::Series produced{"produced", r.state.real_parts(), "#d62728"};
    f << plot::line_plot({target, produced},
                         std::string(pipeline::method_name(r.method)) + ", n = " + std::to_string(r.n) +
                             ", fidelity " + pipeline::format_number(r.fidelity));
    close_out(f, path);
  });
}

ampload_status ampload_noise_calibrated(ampload_noise** out) {
  return guard([&] {
    need(out, "out");
    *out = new ampload_noise{sim::NoiseModel::calibrated()};
  });
}

ampload_status ampload_noise_ideal(ampload_noise** out) {
  return guard([&] {
    need(out, "out");
    *out = new ampload_noise{sim::NoiseModel{}};
  });
}

ampload_status ampload_noise_load(const char* path, ampload_noise** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new ampload_noise{sim::NoiseModel::load(path)};
  });
}

ampload_status ampload_noise_parse(const char* text, ampload_noise** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = nullptr;
    *out = new ampload_noise{sim::NoiseModel::parse(text)};
  });
}

void ampload_noise_free(ampload_noise* noise) { delete noise; }

int ampload_noise_is_ideal(const ampload_noise* noise) { return noise && noise->m.is_ideal() ? 1 : 0; }

ampload_status ampload_linear_noise(int n, ampload_method method, int k0_or_chi, const ampload_noise* noise,
                                    size_t shots, uint64_t seed, ampload_noise_metrics* out) {
  return guard([&] {
    need(noise, "noise");
    need(out, "out");
    require(n >= 1 && n <= Limits::current().max_density_qubits, ErrorCode::Resource,
            "n = " + std::to_string(n) + " exceeds the density-matrix cap");
    if (method == AMPLOAD_METHOD_DHWT_LINEAR) {
      require(k0_or_chi >= 1 && k0_or_chi <= n, ErrorCode::InvalidArgument, "k0 must lie in 1..n");
      fill_noise(pipeline::linear_noise_row(n, k0_or_chi, noise->m, shots, seed), out);
    } else if (method == AMPLOAD_METHOD_MPS) {
      require(k0_or_chi >= 1, ErrorCode::InvalidArgument, "chi must be at least 1");
      fill_noise(pipeline::mps_noise_row(n, k0_or_chi, noise->m, shots, seed), out);
    } else {
      fail(ErrorCode::InvalidArgument, "noisy linear loading supports the dhwt and mps loaders");
    }
  });
}

ampload_status ampload_bench_run(const char* suite, const ampload_noise* noise, ampload_bench** out) {
  return guard([&] {
    need(suite, "suite");
    need(out, "out");
    *out = nullptr;
    const bench::Suite s = bench::parse_suite(suite);
    auto* b = new ampload_bench{bench::run_suite(s, noise ? noise->m : sim::NoiseModel::calibrated()), {}};
    b->mismatches = b->report.mismatches();
    *out = b;
  });
}

void ampload_bench_free(ampload_bench* bench) { delete bench; }

size_t ampload_bench_row_count(const ampload_bench* bench) { return bench ? bench->report.rows.size() : 0; }

size_t ampload_bench_soft_miss_count(const ampload_bench* bench) {
  if (!bench) return 0;
  std::size_t n = 0;
  for (const auto& r : bench->report.rows)
    if (!r.within && !r.golden.hard) ++n;
  return n;
}

size_t ampload_bench_mismatch_count(const ampload_bench* bench) { return bench ? bench->mismatches.size() : 0; }

const char* ampload_bench_mismatch(const ampload_bench* bench, size_t index) {
  if (!bench || index >= bench->mismatches.size()) return nullptr;
  return bench->mismatches[index].c_str();
}

ampload_status ampload_bench_write_csv(const ampload_bench* bench, const char* path) {
  return guard([&] {
    need(bench, "bench");
    std::ofstream f = open_out(path);
    bench->report.write_csv(f);
    close_out(f, path);
  });
}

ampload_status ampload_linear_fidelity(int n, int k0, double* out) {
  return guard([&] {
    need(out, "out");
    *out = linload::fidelity_closed_form(n, k0);
  });
}

ampload_status ampload_k0_for_infidelity(int n, double eps, double* out) {
  return guard([&] {
    need(out, "out");
    *out = linload::k0_for_infidelity(n, eps);
  });
}

ampload_status ampload_filling_ratio(const double* coeffs, size_t num_coeffs, int k0, double* out) {
  return guard([&] {
    need(out, "out");
    *out = qsvt::filling_ratio(coeff_poly(coeffs, num_coeffs), k0);
  });
}

ampload_status ampload_delta_inf_bound(const double* coeffs, size_t num_coeffs, int n, int k0, double* derivative,
                                       double* coefficient) {
  return guard([&] {
    const pipeline::DeltaBound b = pipeline::delta_inf_bound(coeff_poly(coeffs, num_coeffs), n, k0);
    if (derivative) *derivative = b.derivative;
    if (coefficient) *coefficient = b.coefficient;
  });
}

}  // extern "C"
