#include "qcc/lp/lp_format.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace qcc::lp {

namespace {

std::string sanitize(const std::string& name, char prefix, int index) {
  if (name.empty()) return prefix + std::to_string(index);
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                    c == '.' || c == '[' || c == ']';
    out.push_back(ok ? c : '_');
  }
  if (std::isdigit(static_cast<unsigned char>(out.front())) ||
      out.front() == '.') {
    out.insert(out.begin(), prefix);
  }
  return out;
}

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_terms(std::ostream& out, const std::vector<Term>& terms,
                 const std::vector<std::string>& names) {
  bool first = true;
  int on_line = 0;
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    if (!first || t.coef < 0) out << (t.coef < 0 ? " - " : " + ");
    out << number(std::abs(t.coef)) << ' ' << names[t.var];
    first = false;
    if (++on_line == 8) {
      out << "\n   ";
      on_line = 0;
    }
  }
  if (first) out << "0 " << (names.empty() ? "x0" : names.front());
}

}  // namespace

void write_lp_format(const LinearProgram& program, std::ostream& out) {
  const int n = program.num_variables();
  std::vector<std::string> names(n);
  for (int j = 0; j < n; ++j) {
    names[j] = sanitize(program.variable(j).name, 'x', j);
  }

  out << "\\ generated by qcc\nMinimize\n obj: ";
  std::vector<Term> objective;
  for (int j = 0; j < n; ++j) {
    if (program.objective()[j] != 0.0) {
      objective.push_back({j, program.objective()[j]});
    }
  }
  write_terms(out, objective, names);
  if (program.objective_constant() != 0.0) {
    out << (program.objective_constant() < 0 ? " - " : " + ")
        << number(std::abs(program.objective_constant()));
  }
  out << "\nSubject To\n";
  for (int i = 0; i < program.num_constraints(); ++i) {
    const auto& row = program.constraint(i);
    out << ' ' << sanitize(row.name, 'c', i) << ": ";
    write_terms(out, row.terms, names);
    switch (row.sense) {
      case Sense::kLessEqual:
        out << " <= ";
        break;
      case Sense::kGreaterEqual:
        out << " >= ";
        break;
      case Sense::kEqual:
        out << " = ";
        break;
    }
    out << number(row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < n; ++j) {
    const auto& v = program.variable(j);
    if (v.kind == VarKind::kBinary) continue;
    const bool lo_inf = !std::isfinite(v.lower);
    const bool hi_inf = !std::isfinite(v.upper);
    if (lo_inf && hi_inf) {
      out << ' ' << names[j] << " free\n";
    } else if (lo_inf) {
      out << " -inf <= " << names[j] << " <= " << number(v.upper) << '\n';
    } else if (hi_inf) {
      if (v.lower != 0.0) out << ' ' << names[j] << " >= " << number(v.lower) << '\n';
    } else {
      out << ' ' << number(v.lower) << " <= " << names[j]
          << " <= " << number(v.upper) << '\n';
    }
  }
  bool header = false;
  for (int j = 0; j < n; ++j) {
    if (program.variable(j).kind != VarKind::kInteger) continue;
    if (!header) out << "General\n";
    header = true;
    out << ' ' << names[j] << '\n';
  }
  header = false;
  for (int j = 0; j < n; ++j) {
    if (program.variable(j).kind != VarKind::kBinary) continue;
    if (!header) out << "Binary\n";
    header = true;
    out << ' ' << names[j] << '\n';
  }
  out << "End\n";
}

}  // namespace qcc::lp
