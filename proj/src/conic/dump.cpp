#include "ltcam/conic/dump.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

namespace ltcam::conic {

namespace {

void write_value(std::ostream& out, double v) {
  if (std::isinf(v)) {
    out << (v > 0 ? "inf" : "-inf");
  } else {
    out << v;
  }
}

void write_vector(std::ostream& out, const char* tag, const std::vector<double>& v) {
  out << tag;
  for (double x : v) {
    out << ' ';
    write_value(out, x);
  }
  out << '\n';
}

void write_rows(std::ostream& out, const char* tag, const std::vector<LinearRow>& rows, int n) {
  out << tag << '\n';
  std::vector<double> dense(n);
  for (const auto& row : rows) {
    std::fill(dense.begin(), dense.end(), 0.0);
    for (std::size_t k = 0; k < row.indices.size(); ++k) dense[row.indices[k]] += row.values[k];
    for (int j = 0; j < n; ++j) out << dense[j] << ' ';
    out << row.rhs << '\n';
  }
}

double read_value(std::istream& in) {
  std::string tok;
  in >> tok;
  if (tok == "inf") return kInf;
  if (tok == "-inf") return -kInf;
  return std::stod(tok);
}

void expect(std::istream& in, const std::string& word) {
  std::string tok;
  in >> tok;
  if (tok != word) throw Error("conic dump: expected '" + word + "', found '" + tok + "'");
}

std::vector<LinearRow> read_rows(std::istream& in, int count, int n) {
  std::vector<LinearRow> rows(count);
  for (auto& row : rows) {
    for (int j = 0; j < n; ++j) {
      const double v = read_value(in);
      if (v != 0.0) {
        row.indices.push_back(j);
        row.values.push_back(v);
      }
    }
    row.rhs = read_value(in);
  }
  return rows;
}

}  // namespace

void dump_problem(const ConicProblem& p, std::ostream& out) {
  const int n = p.num_variables();
  out << std::setprecision(17);
  out << "ltcam-conic 1\n";
  out << "n " << n << " meq " << p.equalities.size() << " min " << p.inequalities.size()
      << " ncones " << p.cones.size() << '\n';
  write_vector(out, "c", p.cost);
  write_vector(out, "lower", p.lower);
  write_vector(out, "upper", p.upper);
  write_rows(out, "Aeq", p.equalities, n);
  write_rows(out, "Ain", p.inequalities, n);
  out << "cones\n";
  for (const auto& cone : p.cones) {
    out << cone.size();
    for (int idx : cone) out << ' ' << idx;
    out << '\n';
  }
}

void dump_problem(const ConicProblem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  dump_problem(p, out);
}

ConicProblem read_problem(std::istream& in) {
  expect(in, "ltcam-conic");
  expect(in, "1");
  int n = 0, meq = 0, min = 0, ncones = 0;
  expect(in, "n");
  in >> n;
  expect(in, "meq");
  in >> meq;
  expect(in, "min");
  in >> min;
  expect(in, "ncones");
  in >> ncones;
  if (!in || n < 0 || meq < 0 || min < 0 || ncones < 0) throw Error("conic dump: bad header");

  ConicProblem p;
  p.add_variables(n);
  expect(in, "c");
  for (int j = 0; j < n; ++j) p.cost[j] = read_value(in);
  expect(in, "lower");
  for (int j = 0; j < n; ++j) p.lower[j] = read_value(in);
  expect(in, "upper");
  for (int j = 0; j < n; ++j) p.upper[j] = read_value(in);
  expect(in, "Aeq");
  p.equalities = read_rows(in, meq, n);
  expect(in, "Ain");
  p.inequalities = read_rows(in, min, n);
  expect(in, "cones");
  for (int c = 0; c < ncones; ++c) {
    int k = 0;
    in >> k;
    std::vector<int> cone(k);
    for (int& idx : cone) in >> idx;
    p.add_cone(std::move(cone));
  }
  if (!in) throw Error("conic dump: truncated input");
  return p;
}

}  // namespace ltcam::conic
