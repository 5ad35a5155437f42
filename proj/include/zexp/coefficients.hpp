#pragma once

// Exchange type for perturbation coefficient series e_0..e_N and its text
// file form. Decimal strings are the canonical exchange format: files are
// UTF-8 text, '#' starts a comment, each data line is "n <value>" with the
// value possibly containing digit-grouping spaces, and indices must be
// contiguous from 0.

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "precision.hpp"

namespace zexp {

enum class ProvenanceKind { computed, ingested };

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::ingested;
  std::string source;     // file path or bundle label for ingested data
  int omega = -1;         // basis size parameter when computed
  std::string alpha;      // nonlinear parameter when computed
  int digits = 0;         // working precision that produced the values
};

struct CoefficientEntry {
  int n = 0;
  HPReal value;
  long digits_trusted = 0;
};

// An ordered, gap-free coefficient series. A series carries exactly one
// provenance; mixing computed and ingested entries is impossible by
// construction.
class CoefficientSeries {
 public:
  CoefficientSeries(std::vector<CoefficientEntry> entries, Provenance provenance)
      : entries_(std::move(entries)), provenance_(std::move(provenance)) {
    if (entries_.empty()) {
      throw DomainError("coefficient series must contain at least e_0");
    }
    for (std::size_t t = 0; t < entries_.size(); ++t) {
      if (entries_[t].n != static_cast<int>(t)) {
        throw DomainError("coefficient series indices must be contiguous from 0; "
                          "entry " + std::to_string(t) + " has index " +
                          std::to_string(entries_[t].n));
      }
    }
  }

  const std::vector<CoefficientEntry>& entries() const noexcept { return entries_; }
  int order() const noexcept { return static_cast<int>(entries_.size()) - 1; }
  std::size_t size() const noexcept { return entries_.size(); }

  const HPReal& value(int n) const {
    if (n < 0 || n > order()) {
      throw DomainError("coefficient index " + std::to_string(n) + " out of range");
    }
    return entries_[static_cast<std::size_t>(n)].value;
  }

  long digits_trusted(int n) const {
    if (n < 0 || n > order()) {
      throw DomainError("coefficient index " + std::to_string(n) + " out of range");
    }
    return entries_[static_cast<std::size_t>(n)].digits_trusted;
  }

  const Provenance& provenance() const noexcept { return provenance_; }

 private:
  std::vector<CoefficientEntry> entries_;
  Provenance provenance_;
};

namespace detail {

inline std::string strip_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\r') out += c;
  }
  return out;
}

}  // namespace detail

// Parse a coefficient stream. The first whitespace-separated token of a data
// line is the order index; the remainder, with all whitespace stripped, is
// the decimal value (so grouped digits like "0.157 666 429" are one number).
inline CoefficientSeries parse_coefficient_stream(std::istream& in,
                                                  const std::string& source_label,
                                                  const PrecisionConfig& cfg) {
  std::vector<std::optional<std::pair<HPReal, long>>> slots;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::string index_token;
    if (!(ls >> index_token)) continue;  // blank line

    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(index_token, &used);
      if (used != index_token.size() || n < 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw FileFormatError("expected a non-negative order index, got '" +
                                index_token + "'",
                            line_no);
    }

    std::string rest;
    std::getline(ls, rest);
    std::string value_text = detail::strip_whitespace(rest);
    if (value_text.empty()) {
      throw FileFormatError("missing coefficient value for n=" + std::to_string(n),
                            line_no);
    }
    HPReal value(cfg);
    try {
      value = parse_decimal(value_text, cfg);
    } catch (const ParseError& e) {
      throw FileFormatError("bad coefficient value for n=" + std::to_string(n) +
                                ": " + e.what(),
                            line_no);
    }
    if (static_cast<std::size_t>(n) >= slots.size()) {
      slots.resize(static_cast<std::size_t>(n) + 1);
    }
    if (slots[static_cast<std::size_t>(n)].has_value()) {
      throw FileFormatError("duplicate coefficient index n=" + std::to_string(n),
                            line_no);
    }
    slots[static_cast<std::size_t>(n)] =
        std::make_pair(std::move(value), static_cast<long>(count_significant_digits(value_text)));
  }

  if (slots.empty()) {
    throw FileFormatError("no coefficient entries found in " + source_label, line_no);
  }
  std::vector<CoefficientEntry> entries;
  entries.reserve(slots.size());
  for (std::size_t t = 0; t < slots.size(); ++t) {
    if (!slots[t].has_value()) {
      throw FileFormatError("missing coefficient index n=" + std::to_string(t),
                            line_no);
    }
    entries.push_back(CoefficientEntry{static_cast<int>(t),
                                       std::move(slots[t]->first),
                                       slots[t]->second});
  }
  Provenance prov;
  prov.kind = ProvenanceKind::ingested;
  prov.source = source_label;
  prov.digits = cfg.digits();
  return CoefficientSeries(std::move(entries), std::move(prov));
}

inline CoefficientSeries parse_coefficient_file(const std::string& path,
                                                const PrecisionConfig& cfg) {
  std::ifstream in(path);
  if (!in) {
    throw DomainError("cannot open coefficient file '" + path + "'");
  }
  return parse_coefficient_stream(in, path, cfg);
}

// Emit a series with values at the given significant digits. Re-parsing the
// emitted text reproduces the value strings exactly.
inline void emit_coefficient_series(const CoefficientSeries& series, int digits,
                                    std::ostream& out) {
  const Provenance& p = series.provenance();
  out << "# perturbation coefficient series, orders 0.." << series.order() << "\n";
  if (p.kind == ProvenanceKind::computed) {
    out << "# provenance: computed omega=" << p.omega << " alpha=" << p.alpha
        << " digits=" << p.digits << "\n";
  } else {
    out << "# provenance: ingested from " << p.source << "\n";
  }
  out << "# trusted digits per order:";
  for (const auto& e : series.entries()) {
    out << " " << e.n << ":" << e.digits_trusted;
  }
  out << "\n";
  for (const auto& e : series.entries()) {
    out << e.n << " " << format_decimal(e.value, digits) << "\n";
  }
}

}  // namespace zexp
