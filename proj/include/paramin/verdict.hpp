// Three-valued verdicts and replayable witnesses.
#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paramin/sequence.hpp"

namespace paramin {

enum class Status : std::uint8_t { Holds, Fails, Unknown };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Holds: return "HOLDS";
    case Status::Fails: return "FAILS";
    case Status::Unknown: return "UNKNOWN";
  }
  return "?";
}

inline Status parse_status(const std::string& s) {
  if (s == "HOLDS") return Status::Holds;
  if (s == "FAILS") return Status::Fails;
  if (s == "UNKNOWN") return Status::Unknown;
  throw DomainError("unknown status '" + s + "'");
}

using Args = std::map<std::string, std::string>;

/// Everything needed to recompute a violation from scratch: the measurement
/// family (`check` + `args`) and the sequence prefix that exhibits it.
struct Witness {
  std::string kind;   // violating-sequence | escaping-sequence | stray-accumulation-point | neighborhood-gap
  std::string check;  // measurement family, see make_measurer()
  Args args;
  std::string scheme;
  std::vector<Term> terms;  // full prefix n = 1..N
  int tail_start = 0;       // decisions read terms[tail_start..]
  std::vector<ExtendedReal> y_seq;
  std::string limit_claim;
  double margin = 0.0;
};

struct Verdict {
  std::string id;
  Status status = Status::Unknown;
  std::optional<Witness> witness;
  double margin = 0.0;  // worst violation seen (FAILS: the certified one)
  long budget_used = 0;
  std::string note;

  bool holds() const { return status == Status::Holds; }
  bool fails() const { return status == Status::Fails; }
};

/// Conjunction: first FAILS wins, then any UNKNOWN, else HOLDS.  Margins take
/// the worst case, budgets add up.
inline Verdict conjoin(std::string id, const std::vector<Verdict>& parts, std::string note = "") {
  Verdict out;
  out.id = std::move(id);
  out.status = Status::Holds;
  out.margin = -std::numeric_limits<double>::infinity();
  const Verdict* unknown = nullptr;
  for (const auto& v : parts) {
    out.budget_used += v.budget_used;
    if (v.fails() && out.status != Status::Fails) {
      out.status = Status::Fails;
      out.witness = v.witness;
      out.margin = v.margin;
      out.note = v.note;
    }
    if (v.status == Status::Unknown && !unknown) unknown = &v;
    if (out.status != Status::Fails && v.margin > out.margin) out.margin = v.margin;
  }
  if (out.status != Status::Fails && unknown) {
    out.status = Status::Unknown;
    out.note = unknown->note;
  }
  if (parts.empty()) out.margin = 0.0;
  if (!note.empty()) out.note = note + (out.note.empty() ? "" : "; " + out.note);
  return out;
}

inline Verdict make_verdict(std::string id, Status s, std::string note = "") {
  Verdict v;
  v.id = std::move(id);
  v.status = s;
  v.note = std::move(note);
  return v;
}

/// Margins agree when both are the same infinity or differ by at most tol.
inline bool margins_agree(double a, double b, double tol = 1e-12) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= tol;
}

}  // namespace paramin
