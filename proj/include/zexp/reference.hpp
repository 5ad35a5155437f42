#pragma once

// Reference energy tables, decimal digit agreement, and the bundled fixture
// data (an 11-term coefficient series and per-Z reference energies).
//
// Digit agreement asks: to how many decimal-fraction digits would the two
// numbers print identically? Both strings are rounded (half-even, exact
// string arithmetic) to d fraction digits for decreasing d until the rounded
// forms coincide. This matches the everyday reading of statements like
// "the values coincide up to 12 decimal digits" even when one string sits
// just below a rounding boundary the other sits above.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coefficients.hpp"
#include "errors.hpp"
#include "precision.hpp"
#include "series.hpp"

namespace zexp {

namespace detail {

struct PlainDecimal {
  bool negative = false;
  std::string int_digits;   // leading zeros stripped, at least "0"
  std::string frac_digits;  // may be empty
};

inline PlainDecimal parse_plain_decimal(std::string_view text) {
  PlainDecimal out;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    out.negative = text[pos] == '-';
    ++pos;
  }
  std::string ip, fp;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ip += text[pos++];
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') fp += text[pos++];
  }
  if (pos != text.size()) {
    throw ParseError("plain decimal expected (no exponent or stray characters)", pos);
  }
  if (ip.empty() && fp.empty()) {
    throw ParseError("no digits in decimal string", pos);
  }
  std::size_t first = ip.find_first_not_of('0');
  ip = first == std::string::npos ? "0" : ip.substr(first);
  if (ip.empty()) ip = "0";
  bool all_zero = ip == "0" && fp.find_first_not_of('0') == std::string::npos;
  if (all_zero) out.negative = false;
  out.int_digits = std::move(ip);
  out.frac_digits = std::move(fp);
  return out;
}

// Increment a digit string by one, growing on carry overflow.
inline std::string increment_digits(std::string digits) {
  for (std::size_t t = digits.size(); t-- > 0;) {
    if (digits[t] != '9') {
      ++digits[t];
      return digits;
    }
    digits[t] = '0';
  }
  return "1" + digits;
}

}  // namespace detail

// Round a plain decimal string to the given number of fraction digits using
// half-even rounding, carried out exactly on the digit string. Shorter
// fractions are zero-padded.
inline std::string round_decimal_string(std::string_view text, int fraction_digits) {
  if (fraction_digits < 0) {
    throw DomainError("fraction digit count must be non-negative");
  }
  detail::PlainDecimal d = detail::parse_plain_decimal(text);
  const std::size_t want = static_cast<std::size_t>(fraction_digits);
  if (d.frac_digits.size() < want) {
    d.frac_digits.append(want - d.frac_digits.size(), '0');
  }
  std::string keep = d.frac_digits.substr(0, want);
  std::string rest = d.frac_digits.substr(want);

  bool round_up = false;
  if (!rest.empty()) {
    char head = rest[0];
    if (head > '5') {
      round_up = true;
    } else if (head == '5') {
      if (rest.find_first_not_of('0', 1) != std::string::npos) {
        round_up = true;
      } else {
        char last = keep.empty() ? d.int_digits.back() : keep.back();
        round_up = ((last - '0') % 2) != 0;
      }
    }
  }

  std::string combined = d.int_digits + keep;
  if (round_up) {
    std::size_t int_len = d.int_digits.size();
    combined = detail::increment_digits(std::move(combined));
    if (combined.size() > int_len + keep.size()) ++int_len;
    d.int_digits = combined.substr(0, int_len);
    keep = combined.substr(int_len);
  }
  std::string out = d.negative ? "-" : "";
  out += d.int_digits;
  if (!keep.empty()) {
    out += '.';
    out += keep;
  }
  return out;
}

struct DigitAgreement {
  std::string a;
  std::string b;
  bool comparable = true;
  int matching_decimal_digits = 0;
  // 1-based fraction position where the rounded forms first differ; 0 when
  // the strings agree through the full comparable range.
  int first_disagreement_position = 0;
  std::string note;
};

inline DigitAgreement digit_agreement(const std::string& a, const std::string& b) {
  DigitAgreement out;
  out.a = a;
  out.b = b;
  detail::PlainDecimal da = detail::parse_plain_decimal(a);
  detail::PlainDecimal db = detail::parse_plain_decimal(b);

  if (da.negative != db.negative) {
    out.comparable = false;
    out.note = "sign mismatch";
    return out;
  }
  if (da.int_digits.size() != db.int_digits.size()) {
    out.comparable = false;
    out.note = "integer-part magnitudes differ";
    return out;
  }
  if (da.int_digits != db.int_digits) {
    out.note = "integer parts differ";
    out.first_disagreement_position = 0;
    return out;
  }

  const int dmax = static_cast<int>(std::min(da.frac_digits.size(), db.frac_digits.size()));
  for (int d = dmax; d >= 0; --d) {
    if (round_decimal_string(a, d) == round_decimal_string(b, d)) {
      out.matching_decimal_digits = d;
      out.first_disagreement_position = d == dmax ? 0 : d + 1;
      return out;
    }
  }
  out.matching_decimal_digits = 0;
  out.first_disagreement_position = 1;
  out.note = "values differ already at zero fraction digits";
  return out;
}

struct ReferenceRow {
  long z = 0;
  std::string energy;  // decimal string, kept verbatim
  std::string source;
};

class ReferenceEnergyTable {
 public:
  explicit ReferenceEnergyTable(std::vector<ReferenceRow> rows) : rows_(std::move(rows)) {
    for (std::size_t t = 0; t < rows_.size(); ++t) {
      const ReferenceRow& r = rows_[t];
      if (r.z <= 0) throw DomainError("reference row charge must be positive");
      detail::parse_plain_decimal(r.energy);
      if (r.source.empty()) throw DomainError("reference row needs a source tag");
      for (std::size_t s = 0; s < t; ++s) {
        if (rows_[s].z == r.z && rows_[s].source == r.source) {
          throw DomainError("duplicate reference row for Z=" + std::to_string(r.z) +
                            " source " + r.source);
        }
      }
    }
  }

  const std::vector<ReferenceRow>& rows() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_.empty(); }

 private:
  std::vector<ReferenceRow> rows_;
};

inline ReferenceEnergyTable parse_reference_stream(std::istream& in,
                                                   const std::string& source_label) {
  std::vector<ReferenceRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string z_tok, energy_tok, source_tok, extra;
    if (!(ls >> z_tok)) continue;
    if (!(ls >> energy_tok >> source_tok)) {
      throw FileFormatError("expected 'Z energy source-tag'", line_no);
    }
    if (ls >> extra) {
      throw FileFormatError("unexpected trailing token '" + extra + "'", line_no);
    }
    long z = 0;
    try {
      std::size_t used = 0;
      z = std::stol(z_tok, &used);
      if (used != z_tok.size() || z <= 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw FileFormatError("bad charge '" + z_tok + "'", line_no);
    }
    try {
      detail::parse_plain_decimal(energy_tok);
    } catch (const ParseError& e) {
      throw FileFormatError("bad energy '" + energy_tok + "': " + e.what(), line_no);
    }
    rows.push_back(ReferenceRow{z, energy_tok, source_tok});
  }
  if (rows.empty()) {
    throw FileFormatError("no reference rows found in " + source_label, line_no);
  }
  try {
    return ReferenceEnergyTable(std::move(rows));
  } catch (const DomainError& e) {
    throw FileFormatError(e.what(), line_no);
  }
}

inline ReferenceEnergyTable parse_reference_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open reference file '" + path + "'");
  return parse_reference_stream(in, path);
}

struct ComparisonRow {
  long z = 0;
  std::string energy;     // computed, printed at the reference's fraction length
  std::string reference;
  std::string source;
  DigitAgreement agreement;
  HPReal tail_bound;
  int order_used = 0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  int series_order = 0;
};

inline ComparisonReport compare_table(const CoefficientSeries& series,
                                      const ReferenceEnergyTable& refs,
                                      const PrecisionConfig& cfg) {
  if (refs.empty()) {
    throw DomainError("reference table is empty");
  }
  ComparisonReport report;
  report.series_order = series.order();
  for (const ReferenceRow& ref : refs.rows()) {
    ChargeSpec charge = make_charge_integer(ref.z, cfg);
    EnergyResult res = sum_energy(series, charge, cfg);
    auto dot_pos = ref.energy.find('.');
    int frac_len = dot_pos == std::string::npos
                       ? 0
                       : static_cast<int>(ref.energy.size() - dot_pos - 1);
    std::string printed = format_fixed(res.energy, frac_len);
    report.rows.push_back(ComparisonRow{ref.z, printed, ref.energy, ref.source,
                                        digit_agreement(printed, ref.energy),
                                        std::move(res.tail_bound), res.order_used});
  }
  return report;
}

inline std::string render_comparison_text(const ComparisonReport& report) {
  std::size_t w_energy = 8, w_ref = 9, w_source = 6;
  for (const ComparisonRow& r : report.rows) {
    w_energy = std::max(w_energy, r.energy.size());
    w_ref = std::max(w_ref, r.reference.size());
    w_source = std::max(w_source, r.source.size());
  }
  std::ostringstream os;
  os << std::left << std::setw(4) << "Z"
     << std::setw(static_cast<int>(w_energy) + 2) << "computed"
     << std::setw(static_cast<int>(w_ref) + 2) << "reference"
     << std::setw(static_cast<int>(w_source) + 2) << "source"
     << std::setw(8) << "digits" << "tail_bound\n";
  for (const ComparisonRow& r : report.rows) {
    std::string digits = r.agreement.comparable
                             ? std::to_string(r.agreement.matching_decimal_digits)
                             : "n/a";
    os << std::left << std::setw(4) << r.z
       << std::setw(static_cast<int>(w_energy) + 2) << r.energy
       << std::setw(static_cast<int>(w_ref) + 2) << r.reference
       << std::setw(static_cast<int>(w_source) + 2) << r.source
       << std::setw(8) << digits << format_decimal(r.tail_bound, 3);
    if (!r.agreement.note.empty()) os << "  (" << r.agreement.note << ")";
    os << "\n";
  }
  return os.str();
}

// Fixture data: the 11-term coefficient series and the per-Z reference
// energies used throughout the test suite. The same text is shipped under
// data/ for use from the command line.
inline const char* bundled_coefficient_text() {
  return R"(# two-electron ground state perturbation coefficients e_n
# grouping spaces inside values are part of the format and are stripped
0   -1
1   0.625
2   -0.157 666 429 469 15
3   0.008 699 031 527 90
4   -0.000 888 707 284 23
5   -0.001 036 371 848 05
6   -0.000 612 940 520 53
7   -0.000 372 175 576 5
8   -0.000 242 877 973 2
9   -0.000 165 661 054 7
10  -0.000 116 179 202 6
)";
}

inline const char* bundled_reference_text() {
  return R"(# two-electron ground state energies E(Z) in a.u.
1   -0.527751016544377    nakashima2007
2   -2.903724377034119    schwartz2006
3   -7.279913412669305    nakashima2007
4   -13.655566238423586   nakashima2007
5   -22.030971580242781   nakashima2007
6   -32.406246601898530   nakashima2007
7   -44.781445148772704   nakashima2007
8   -59.156595122757925   nakashima2007
9   -75.531712363959491   nakashima2007
10  -93.906806515037549   nakashima2007
11  -114.281879           thakkar1977
12  -136.656944           thakkar1977
)";
}

inline CoefficientSeries bundled_coefficient_series(const PrecisionConfig& cfg) {
  std::istringstream in(bundled_coefficient_text());
  return parse_coefficient_stream(in, "bundled", cfg);
}

inline ReferenceEnergyTable bundled_reference_table() {
  std::istringstream in(bundled_reference_text());
  return parse_reference_stream(in, "bundled");
}

}  // namespace zexp
