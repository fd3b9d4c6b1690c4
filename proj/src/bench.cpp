#include "ampload/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "ampload/error.hpp"
#include "ampload_golden.inc"

namespace ampload::bench {

namespace {

constexpr int kN = 6;

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_value(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::Config, "golden value '" + s + "' is not a number");
  }
  require(used == s.size(), ErrorCode::Config, "golden value '" + s + "' is not a number");
  return v;
}

double deviation(double value, double want) {
  return std::isnan(want) ? 0.0 : std::abs(value - want);
}

const char* status(const BenchRow& r) {
  if (r.within) return "ok";
  return r.golden.hard ? "MISMATCH" : "soft";
}

}  // namespace

Suite parse_suite(std::string_view s) {
  if (s == "table3") return Suite::Table3;
  if (s == "table6") return Suite::Table6;
  if (s == "fig4") return Suite::Fig4;
  fail(ErrorCode::InvalidArgument, "unknown suite '" + std::string(s) + "' (table3, table6, fig4)");
}

std::string_view suite_name(Suite s) {
  switch (s) {
    case Suite::Table3: return "table3";
    case Suite::Table6: return "table6";
    case Suite::Fig4: return "fig4";
  }
  return "?";
}

std::vector<GoldenRow> parse_golden(std::string_view csv) {
  std::vector<GoldenRow> rows;
  std::istringstream in{std::string(csv)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const std::vector<std::string> f = split(line);
    require(f.size() == 7, ErrorCode::Config, "golden row needs 7 fields: " + line);
    GoldenRow g;
    g.label = f[0];
    g.method = pipeline::parse_method(f[1]);
    g.k0_or_chi = static_cast<int>(parse_value(f[2]));
    g.filling_ratio = parse_value(f[3]);
    g.l2 = parse_value(f[4]);
    g.fidelity = parse_value(f[5]);
    g.hard = f[6] != "0";
    rows.push_back(std::move(g));
  }
  return rows;
}

std::vector<GoldenRow> golden(Suite s) {
  switch (s) {
    case Suite::Table3: return parse_golden(golden_data::table3);
    case Suite::Table6: return parse_golden(golden_data::table6);
    case Suite::Fig4: return parse_golden(golden_data::fig4);
  }
  return {};
}

pipeline::PolynomialSpec suite_polynomial(std::string_view label) {
  const std::int64_t den = (std::int64_t{1} << kN) - 1;
  auto grid = [den](std::initializer_list<std::int64_t> nums) {
    std::vector<pipeline::Root> r;
    for (auto v : nums) r.push_back({v, den});
    return pipeline::expand_roots(r);
  };
  if (label == "quartic") return grid({1, 20, 50, 60});
  if (label == "P1") return grid({2, 16, 40, 50, 62});
  if (label == "P2") return grid({2, 32, 60});
  if (label == "linear") return pipeline::PolynomialSpec({0.0, 1.0});
  fail(ErrorCode::Config, "unknown golden label '" + std::string(label) + "'");
}

BenchReport run_suite(Suite s, const sim::NoiseModel& noise) {
  BenchReport rep;
  rep.suite = s;
  for (const GoldenRow& g : golden(s)) {
    BenchRow row;
    row.golden = g;
    if (s == Suite::Fig4) {
      row.noise = g.method == pipeline::Method::MpsDirect ? pipeline::mps_noise_row(kN, g.k0_or_chi, noise)
                                                          : pipeline::linear_noise_row(kN, g.k0_or_chi, noise);
      row.diff = std::max(deviation(row.noise.ideal_fidelity, g.fidelity), deviation(row.noise.ideal_l2, g.l2));
    } else {
      pipeline::LoadRequest req;
      req.n = kN;
      req.method = g.method;
      req.k0 = g.k0_or_chi;
      req.chi = g.k0_or_chi;
      req.polynomial = suite_polynomial(g.label);
      row.result = pipeline::run(req);
      row.diff = std::max({deviation(row.result.fidelity, g.fidelity), deviation(row.result.l2, g.l2),
                           std::isnan(g.filling_ratio) ? 0.0 : deviation(row.result.filling_ratio, g.filling_ratio)});
    }
    row.within = row.diff <= kTolerance;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::vector<std::string> BenchReport::mismatches() const {
  std::vector<std::string> out;
  for (const BenchRow& r : rows) {
    if (r.within || !r.golden.hard) continue;
    out.push_back(r.golden.label + " " + std::string(pipeline::method_name(r.golden.method)) + " " +
                  std::to_string(r.golden.k0_or_chi) + ": diff " + pipeline::format_number(r.diff));
  }
  return out;
}

void BenchReport::write_csv(std::ostream& out) const {
  using pipeline::format_number;
  if (suite == Suite::Fig4) {
    out << "label,method,n,k0_or_chi,cx_count,ideal_fidelity,ideal_l2,noisy_fidelity,noisy_l2,golden_fidelity,diff,"
           "status\n";
    for (const BenchRow& r : rows) {
      out << r.golden.label << ',' << pipeline::method_name(r.golden.method) << ',' << kN << ',' << r.golden.k0_or_chi
          << ',' << r.noise.cx_count << ',' << format_number(r.noise.ideal_fidelity) << ','
          << format_number(r.noise.ideal_l2) << ',' << format_number(r.noise.noisy_fidelity) << ','
          << format_number(r.noise.noisy_l2) << ',' << format_number(r.golden.fidelity) << ','
          << format_number(r.diff) << ',' << status(r) << '\n';
    }
    return;
  }
  out << pipeline::kCsvHeader << ",label,golden_fidelity,golden_l2,golden_filling_ratio,diff,status\n";
  for (const BenchRow& r : rows) {
    std::ostringstream line;
    pipeline::write_csv_row(line, r.result);
    std::string s = line.str();
    s.pop_back();
    out << s << ',' << r.golden.label << ',' << format_number(r.golden.fidelity) << ','
        << format_number(r.golden.l2) << ',' << format_number(r.golden.filling_ratio) << ','
        << format_number(r.diff) << ',' << status(r) << '\n';
  }
}

}  // namespace ampload::bench
