#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "sl2flow/errors.hpp"
#include "sl2flow/mat2.hpp"
#include "sl2flow/state.hpp"

namespace sl2flow::cli {

struct ParseError : Error {
  using Error::Error;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline double parse_real(const std::string& tok) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + tok + "'");
  }
  while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
  if (used != tok.size()) {
    throw ParseError("trailing characters in number: '" + tok + "'");
  }
  return v;
}

inline std::vector<double> parse_reals(const std::string& s, std::size_t want,
                                       const char* what) {
  const auto toks = split(s, ',');
  if (toks.size() != want) {
    throw ParseError(std::string(what) + ": expected " +
                     std::to_string(want) + " comma-separated values, got " +
                     std::to_string(toks.size()));
  }
  std::vector<double> vals;
  for (const auto& t : toks) vals.push_back(parse_real(t));
  return vals;
}

// Row-major "a11,a12,a21,a22;b11,b12,b21,b22".
inline PhaseState parse_ambient(const std::string& s) {
  const auto halves = split(s, ';');
  if (halves.size() != 2) {
    throw ParseError("ambient state: expected 'A;B' with ';' separator");
  }
  const auto a = parse_reals(halves[0], 4, "matrix A");
  const auto b = parse_reals(halves[1], 4, "matrix B");
  return {{a[0], a[1], a[2], a[3]}, {b[0], b[1], b[2], b[3]}};
}

// "x1,x2,x3;p1,p2,p3"
inline ChartPoint parse_chart(const std::string& s) {
  const auto halves = split(s, ';');
  if (halves.size() != 2) {
    throw ParseError("chart point: expected 'x;p' with ';' separator");
  }
  const auto x = parse_reals(halves[0], 3, "coordinates x");
  const auto p = parse_reals(halves[1], 3, "momenta p");
  return {{x[0], x[1], x[2]}, {p[0], p[1], p[2]}};
}

// "q1,q2,q3;xi1,xi2,xi3;x2nonzero|x2zero"
inline ReducedState parse_reduced(const std::string& s) {
  const auto parts = split(s, ';');
  if (parts.size() != 3) {
    throw ParseError("reduced state: expected 'q;xi;regime'");
  }
  const auto q = parse_reals(parts[0], 3, "coordinates q");
  const auto xi = parse_reals(parts[1], 3, "momenta xi");
  Regime regime;
  if (parts[2] == "x2nonzero") {
    regime = Regime::X2NonZero;
  } else if (parts[2] == "x2zero") {
    regime = Regime::X2Zero;
  } else {
    throw ParseError("reduced state: regime must be x2nonzero or x2zero");
  }
  return {{q[0], q[1], q[2]}, {xi[0], xi[1], xi[2]}, regime};
}

// 17 significant digits, the shortest round-trippable decimal form.
inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace sl2flow::cli
