// Command line front end. Subcommands cover the full pipeline: coefficient
// generation, energy summation, radius-of-convergence analysis, reference
// comparison, and the integral self-check. All numeric output is rendered
// from decimal strings, headers echo the resolved configuration, and files
// are written atomically, so identical invocations produce identical bytes.

#include <CLI11.hpp>
#include <json.hpp>

#include <zexp/zexp.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace {

using nlohmann::json;
using namespace zexp;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalConfig {
  int digits = 40;
  std::string format = "text";
  std::string output;
};

void write_header(std::ostream& os, const std::string& command,
                  const GlobalConfig& g,
                  const std::vector<std::pair<std::string, std::string>>& extra) {
  os << "# zexp " << command << "\n";
  os << "# digits: " << g.digits << "\n";
  os << "# format: " << g.format << "\n";
  for (const auto& [k, v] : extra) os << "# " << k << ": " << v << "\n";
}

json config_json(const std::string& command, const GlobalConfig& g,
                 const std::vector<std::pair<std::string, std::string>>& extra) {
  json cfg;
  cfg["command"] = command;
  cfg["digits"] = g.digits;
  cfg["format"] = g.format;
  for (const auto& [k, v] : extra) cfg[k] = v;
  return cfg;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write temporary file '" + tmp + "'");
    out << content;
    if (!out) throw UsageError("write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw UsageError("cannot move output into place at '" + path + "'");
  }
}

CoefficientSeries load_series(const std::string& source, const PrecisionConfig& cfg) {
  if (source == "bundled") return bundled_coefficient_series(cfg);
  try {
    return parse_coefficient_file(source, cfg);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

ReferenceEnergyTable load_references(const std::string& source) {
  if (source == "bundled") return bundled_reference_table();
  try {
    return parse_reference_file(source);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

long parse_long_token(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad " + what + " '" + text + "'");
  }
}

std::vector<ChargeSpec> parse_charges(const std::vector<std::string>& tokens,
                                      const PrecisionConfig& cfg) {
  std::vector<ChargeSpec> out;
  for (const std::string& tok : tokens) {
    try {
      if (auto dots = tok.find(".."); dots != std::string::npos) {
        long lo = parse_long_token(tok.substr(0, dots), "charge range bound");
        long hi = parse_long_token(tok.substr(dots + 2), "charge range bound");
        if (lo > hi) throw UsageError("empty charge range '" + tok + "'");
        for (long z = lo; z <= hi; ++z) out.push_back(make_charge_integer(z, cfg));
      } else if (auto slash = tok.find('/'); slash != std::string::npos) {
        long num = parse_long_token(tok.substr(0, slash), "charge numerator");
        long den = parse_long_token(tok.substr(slash + 1), "charge denominator");
        out.push_back(make_charge_rational(num, den, cfg));
      } else if (tok.find('.') == std::string::npos &&
                 tok.find('e') == std::string::npos &&
                 tok.find('E') == std::string::npos) {
        out.push_back(make_charge_integer(parse_long_token(tok, "charge"), cfg));
      } else {
        out.push_back(make_charge_decimal(tok, cfg));
      }
    } catch (const DomainError& e) {
      throw UsageError(std::string(e.what()) + " (from token '" + tok + "')");
    } catch (const ParseError& e) {
      throw UsageError("bad charge '" + tok + "': " + e.what());
    }
  }
  if (out.empty()) throw UsageError("no charges requested");
  return out;
}

IndexWindow parse_window(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw UsageError("window must be 'lo:hi', got '" + text + "'");
  }
  IndexWindow w;
  w.lo = static_cast<int>(parse_long_token(text.substr(0, colon), "window bound"));
  w.hi = static_cast<int>(parse_long_token(text.substr(colon + 1), "window bound"));
  return w;
}

std::string dump_matrix(const char* name, const HPMatrix& m, int digits) {
  std::ostringstream os;
  os << "# matrix " << name << " " << m.rows() << "x" << m.cols() << "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      os << r << " " << c << " " << format_decimal(m.at(r, c), digits) << "\n";
    }
  }
  return os.str();
}

struct ComputeArgs {
  int omega = 0;
  int order = 1;
  std::string alpha = "1";
  bool dump_matrices = false;
};

std::string cmd_compute_coeffs(const GlobalConfig& g, const ComputeArgs& a) {
  PrecisionConfig pc(g.digits);
  HPReal alpha = parse_decimal(a.alpha, pc);
  if (alpha.sign() <= 0) throw UsageError("alpha must be positive");
  if (a.dump_matrices && g.format != "text") {
    throw UsageError("--dump-matrices is only available with --format text");
  }

  BasisSet basis = enumerate_basis(a.omega, alpha, pc);
  OperatorMatrices ops = assemble(basis);
  std::optional<std::string> matrix_text;
  if (a.dump_matrices) {
    matrix_text = dump_matrix("S", ops.S, g.digits) +
                  dump_matrix("H0", ops.H0, g.digits) +
                  dump_matrix("V", ops.V, g.digits);
  }
  PerturbationState st = run_recursion(std::move(ops), a.order);
  CoefficientSeries series = to_series(st);

  std::vector<std::pair<std::string, std::string>> extra{
      {"omega", std::to_string(a.omega)},
      {"alpha", a.alpha},
      {"order", std::to_string(a.order)}};

  std::ostringstream os;
  if (g.format == "text") {
    write_header(os, "compute-coeffs", g, extra);
    emit_coefficient_series(series, g.digits, os);
    if (matrix_text) os << *matrix_text;
  } else if (g.format == "csv") {
    write_header(os, "compute-coeffs", g, extra);
    os << "n,value,digits_trusted\n";
    for (const CoefficientEntry& e : series.entries()) {
      os << e.n << "," << format_decimal(e.value, g.digits) << ","
         << e.digits_trusted << "\n";
    }
  } else {
    json j;
    j["config"] = config_json("compute-coeffs", g, extra);
    j["coefficients"] = json::array();
    for (const CoefficientEntry& e : series.entries()) {
      j["coefficients"].push_back({{"n", e.n},
                                   {"value", format_decimal(e.value, g.digits)},
                                   {"digits_trusted", e.digits_trusted}});
    }
    os << j.dump(2) << "\n";
  }
  return os.str();
}

struct SumArgs {
  std::string input = "bundled";
  std::vector<std::string> z_tokens;
  int fraction_digits = 15;
};

std::string cmd_sum_energy(const GlobalConfig& g, const SumArgs& a) {
  PrecisionConfig pc(g.digits);
  CoefficientSeries series = load_series(a.input, pc);
  std::vector<ChargeSpec> charges = parse_charges(a.z_tokens, pc);

  std::vector<std::pair<std::string, std::string>> extra{
      {"input", a.input},
      {"series-order", std::to_string(series.order())},
      {"fraction-digits", std::to_string(a.fraction_digits)}};

  struct Row {
    std::string label;
    std::string energy;
    int order;
    std::string tail;
  };
  std::vector<Row> rows;
  for (const ChargeSpec& ch : charges) {
    EnergyResult r = sum_energy(series, ch, pc);
    rows.push_back(Row{ch.label, format_fixed(r.energy, a.fraction_digits),
                       r.order_used, format_decimal(r.tail_bound, 3)});
  }

  std::ostringstream os;
  if (g.format == "text") {
    write_header(os, "sum-energy", g, extra);
    std::size_t wz = 1, we = 6;
    for (const Row& r : rows) {
      wz = std::max(wz, r.label.size());
      we = std::max(we, r.energy.size());
    }
    os << std::left << std::setw(static_cast<int>(wz) + 2) << "Z"
       << std::setw(static_cast<int>(we) + 2) << "energy"
       << std::setw(7) << "order" << "tail_bound\n";
    for (const Row& r : rows) {
      os << std::left << std::setw(static_cast<int>(wz) + 2) << r.label
         << std::setw(static_cast<int>(we) + 2) << r.energy
         << std::setw(7) << r.order << r.tail << "\n";
    }
  } else if (g.format == "csv") {
    write_header(os, "sum-energy", g, extra);
    os << "z,energy,order_used,tail_bound\n";
    for (const Row& r : rows) {
      os << r.label << "," << r.energy << "," << r.order << "," << r.tail << "\n";
    }
  } else {
    json j;
    j["config"] = config_json("sum-energy", g, extra);
    j["rows"] = json::array();
    for (const Row& r : rows) {
      j["rows"].push_back({{"z", r.label},
                           {"energy", r.energy},
                           {"order_used", r.order},
                           {"tail_bound", r.tail}});
    }
    os << j.dump(2) << "\n";
  }
  return os.str();
}

struct AnalyzeArgs {
  std::string input;
  std::string method = "ratio";
  std::string window;
};

std::string cmd_analyze_series(const GlobalConfig& g, const AnalyzeArgs& a) {
  PrecisionConfig pc(g.digits);
  CoefficientSeries series = load_series(a.input, pc);
  IndexWindow window = parse_window(a.window);

  RadiusEstimate est = a.method == "ratio"
                           ? ratio_radius(series, window, pc)
                           : domb_sykes_radius(series, window, pc);

  const int shown = 20;
  std::string lambda_star = format_decimal(est.lambda_star, shown);
  std::string residual = format_decimal(est.residual, 3);
  std::optional<std::string> gamma;
  if (est.gamma.has_value()) gamma = format_decimal(*est.gamma, shown);

  std::vector<std::pair<std::string, std::string>> extra{
      {"input", a.input},
      {"method", a.method},
      {"window", std::to_string(window.lo) + ":" + std::to_string(window.hi)},
      {"series-order", std::to_string(series.order())}};

  std::ostringstream os;
  if (g.format == "text") {
    write_header(os, "analyze-series", g, extra);
    os << "lambda_star = " << lambda_star << "\n";
    os << "z_threshold = " << format_decimal(HPReal(1, pc) / est.lambda_star, shown)
       << "\n";
    os << "residual = " << residual << "\n";
    if (gamma) os << "gamma = " << *gamma << "\n";
  } else if (g.format == "csv") {
    write_header(os, "analyze-series", g, extra);
    os << "method,lambda_star,residual,gamma\n";
    os << a.method << "," << lambda_star << "," << residual << ","
       << (gamma ? *gamma : std::string("")) << "\n";
  } else {
    json j;
    j["config"] = config_json("analyze-series", g, extra);
    j["lambda_star"] = lambda_star;
    j["residual"] = residual;
    if (gamma) j["gamma"] = *gamma;
    os << j.dump(2) << "\n";
  }
  return os.str();
}

struct CompareArgs {
  std::string coeffs = "bundled";
  std::string refs = "bundled";
};

std::string cmd_compare(const GlobalConfig& g, const CompareArgs& a) {
  PrecisionConfig pc(g.digits);
  CoefficientSeries series = load_series(a.coeffs, pc);
  ReferenceEnergyTable refs = load_references(a.refs);
  ComparisonReport report = compare_table(series, refs, pc);

  std::vector<std::pair<std::string, std::string>> extra{
      {"coeffs", a.coeffs},
      {"refs", a.refs},
      {"series-order", std::to_string(report.series_order)}};

  std::ostringstream os;
  if (g.format == "text") {
    write_header(os, "compare", g, extra);
    os << render_comparison_text(report);
  } else if (g.format == "csv") {
    write_header(os, "compare", g, extra);
    os << "z,computed,reference,source,comparable,matching_decimal_digits,"
          "tail_bound\n";
    for (const ComparisonRow& r : report.rows) {
      os << r.z << "," << r.energy << "," << r.reference << "," << r.source
         << "," << (r.agreement.comparable ? "yes" : "no") << ","
         << r.agreement.matching_decimal_digits << ","
         << format_decimal(r.tail_bound, 3) << "\n";
    }
  } else {
    json j;
    j["config"] = config_json("compare", g, extra);
    j["rows"] = json::array();
    for (const ComparisonRow& r : report.rows) {
      json row{{"z", r.z},
               {"computed", r.energy},
               {"reference", r.reference},
               {"source", r.source},
               {"comparable", r.agreement.comparable},
               {"matching_decimal_digits", r.agreement.matching_decimal_digits},
               {"first_disagreement_position",
                r.agreement.first_disagreement_position},
               {"tail_bound", format_decimal(r.tail_bound, 3)}};
      if (!r.agreement.note.empty()) row["note"] = r.agreement.note;
      j["rows"].push_back(std::move(row));
    }
    os << j.dump(2) << "\n";
  }
  return os.str();
}

struct CheckArgs {
  int max_power = 4;
  std::string alpha = "2";
  std::string beta = "2";
  int target_digits = 20;
};

struct CheckOutcome {
  std::string text;
  bool passed = true;
};

CheckOutcome cmd_check_integrals(const GlobalConfig& g, const CheckArgs& a) {
  PrecisionConfig pc(g.digits);
  if (a.target_digits < 6 || a.target_digits > g.digits - 6) {
    throw UsageError("target digits must be in [6, digits-6]");
  }
  HPReal alpha = parse_decimal(a.alpha, pc);
  HPReal beta = parse_decimal(a.beta, pc);
  if (alpha.sign() <= 0 || beta.sign() <= 0) {
    throw UsageError("exponents must be positive");
  }
  const int threshold = a.target_digits - 2;

  IntegralGrid grid = quadrature_integral_grid(a.max_power, alpha, beta, pc,
                                               a.target_digits);
  long worst = 1000000;
  int worst_l = 0, worst_m = 0, worst_n = 0;
  long entries = 0;
  for (int l = -1; l <= a.max_power; ++l) {
    for (int m = -1; m <= a.max_power; ++m) {
      for (int n = -1; n <= a.max_power; ++n) {
        HPReal closed = radial_integral(l, m, n, alpha, beta, pc);
        long agree = matching_significant_digits(grid.at(l, m, n), closed);
        if (agree < worst) {
          worst = agree;
          worst_l = l;
          worst_m = m;
          worst_n = n;
        }
        ++entries;
      }
    }
  }
  const bool passed = worst >= threshold;

  std::vector<std::pair<std::string, std::string>> extra{
      {"max-power", std::to_string(a.max_power)},
      {"alpha", a.alpha},
      {"beta", a.beta},
      {"target-digits", std::to_string(a.target_digits)},
      {"agreement-threshold", std::to_string(threshold)}};

  std::ostringstream os;
  if (g.format == "json") {
    json j;
    j["config"] = config_json("check-integrals", g, extra);
    j["entries"] = entries;
    j["panels_used"] = grid.panels_used;
    j["min_agreement"] = worst;
    j["worst_entry"] = {worst_l, worst_m, worst_n};
    j["result"] = passed ? "PASS" : "FAIL";
    os << j.dump(2) << "\n";
  } else {
    write_header(os, "check-integrals", g, extra);
    os << "entries = " << entries << "\n";
    os << "panels_used = " << grid.panels_used << "\n";
    os << "min_agreement = " << worst << " at (" << worst_l << "," << worst_m
       << "," << worst_n << ")\n";
    os << "result = " << (passed ? "PASS" : "FAIL") << "\n";
  }
  return CheckOutcome{os.str(), passed};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arbitrary-precision 1/Z perturbation series toolkit"};
  app.require_subcommand(1);

  GlobalConfig g;
  app.add_option("--digits", g.digits, "working precision in decimal digits")
      ->check(CLI::Range(30, 100000))
      ->capture_default_str();
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--output", g.output, "write output atomically to this path");

  ComputeArgs ca;
  CLI::App* cc = app.add_subcommand("compute-coeffs",
                                    "run the perturbation recursion");
  cc->add_option("--omega", ca.omega, "basis degree cap")
      ->required()
      ->check(CLI::Range(0, 28));
  cc->add_option("--order", ca.order, "highest coefficient order")
      ->required()
      ->check(CLI::Range(1, 200));
  cc->add_option("--alpha", ca.alpha, "basis exponential parameter")
      ->capture_default_str();
  cc->add_flag("--dump-matrices", ca.dump_matrices,
               "append operator matrices to the output (text format)");

  SumArgs sa;
  CLI::App* se = app.add_subcommand("sum-energy",
                                    "sum the series to ground-state energies");
  se->add_option("--input", sa.input, "coefficient file or 'bundled'")
      ->capture_default_str();
  se->add_option("--z", sa.z_tokens,
                 "charges: integer, lo..hi range, p/q, or decimal")
      ->required()
      ->expected(-1);
  se->add_option("--fraction-digits", sa.fraction_digits,
                 "fraction digits in printed energies")
      ->check(CLI::Range(0, 100))
      ->capture_default_str();

  AnalyzeArgs aa;
  CLI::App* an = app.add_subcommand("analyze-series",
                                    "estimate the radius of convergence");
  an->add_option("--input", aa.input, "coefficient file or 'bundled'")
      ->required();
  an->add_option("--method", aa.method, "estimator")
      ->check(CLI::IsMember({"ratio", "domb-sykes"}))
      ->capture_default_str();
  an->add_option("--window", aa.window, "order window lo:hi")->required();

  CompareArgs pa;
  CLI::App* cp = app.add_subcommand("compare",
                                    "compare summed energies with references");
  cp->add_option("--coeffs", pa.coeffs, "coefficient file or 'bundled'")
      ->capture_default_str();
  cp->add_option("--refs", pa.refs, "reference file or 'bundled'")
      ->capture_default_str();

  CheckArgs ka;
  CLI::App* ci = app.add_subcommand("check-integrals",
                                    "cross-check closed-form vs quadrature");
  ci->add_option("--max-power", ka.max_power, "largest monomial power checked")
      ->check(CLI::Range(0, 8))
      ->capture_default_str();
  ci->add_option("--alpha", ka.alpha, "first exponent")->capture_default_str();
  ci->add_option("--beta", ka.beta, "second exponent")->capture_default_str();
  ci->add_option("--target-digits", ka.target_digits,
                 "quadrature stabilization target")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.count("--digits") == 0) {
      if (const char* env = std::getenv("ZEXP_DIGITS")) {
        long v = parse_long_token(env, "ZEXP_DIGITS value");
        if (v < 30 || v > 100000) {
          throw UsageError("ZEXP_DIGITS value " + std::string(env) +
                           " is outside [30, 100000]");
        }
        g.digits = static_cast<int>(v);
      }
    }
    std::string content;
    int status = 0;
    if (cc->parsed()) {
      content = cmd_compute_coeffs(g, ca);
    } else if (se->parsed()) {
      content = cmd_sum_energy(g, sa);
    } else if (an->parsed()) {
      content = cmd_analyze_series(g, aa);
    } else if (cp->parsed()) {
      content = cmd_compare(g, pa);
    } else {
      CheckOutcome outcome = cmd_check_integrals(g, ka);
      content = std::move(outcome.text);
      if (!outcome.passed) status = 1;
    }
    write_output(g.output, content);
    return status;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FileFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
