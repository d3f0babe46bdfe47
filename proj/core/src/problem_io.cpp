#include "midco/problem_io.hpp"

#include <Eigen/Eigenvalues>

#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace midco {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& text, int line) {
  std::vector<double> out;
  std::string cur;
  std::stringstream ss(text);
  while (std::getline(ss, cur, ';')) {
    cur = trim(cur);
    if (cur.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cur, &used));
      if (used != cur.size()) throw std::invalid_argument(cur);
    } catch (const std::exception&) {
      throw ParseError(line, "bad number '" + cur + "'");
    }
  }
  return out;
}

double parse_num(const std::string& text, int line) {
  auto v = parse_list(text, line);
  if (v.size() != 1) throw ParseError(line, "expected a single number");
  return v[0];
}

void check_psd(const Matrix& Q, int line) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Q + Q.transpose()));
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw ParseError(line, "quadratic form is not positive semidefinite");
}

struct RawEntry {
  std::string value;
  int line;
};

}  // namespace

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  double back = std::strtod(buf, nullptr);
  if (back == v) {
    // prefer the shortest round-tripping form
    for (int prec = 1; prec <= 16; ++prec) {
      char s[48];
      std::snprintf(s, sizeof s, "%.*g", prec, v);
      if (std::strtod(s, nullptr) == v) return s;
    }
  }
  return buf;
}

ProblemFile parse_problem(const std::string& text) {
  std::map<std::string, RawEntry> entries;
  std::stringstream ss(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(ss, raw)) {
    ++lineno;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ParseError(lineno, "empty key");
    if (entries.count(key)) throw ParseError(lineno, "duplicate key '" + key + "'");
    entries[key] = {value, lineno};
  }
  std::set<std::string> used;
  auto take = [&](const std::string& key) -> const RawEntry* {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    used.insert(key);
    return &it->second;
  };
  auto require = [&](const std::string& key) -> const RawEntry& {
    const RawEntry* e = take(key);
    if (!e) throw ParseError(0, "missing required key '" + key + "'");
    return *e;
  };

  const int n = static_cast<int>(parse_num(require("problem.n").value, 0));
  const int d = static_cast<int>(parse_num(require("problem.d").value, 0));
  const double B = parse_num(require("problem.b").value, 0);
  if (n < 0 || d < 0 || n + d < 1) throw ParseError(0, "problem dimensions must satisfy n+d >= 1");
  if (B < 1 || B != std::floor(B)) throw ParseError(0, "problem.b must be a positive integer");
  const int dim = n + d;

  std::optional<std::pair<Vector, Vector>> ybox;
  if (const RawEntry* e = take("problem.ybox")) {
    auto vals = parse_list(e->value, e->line);
    if (static_cast<int>(vals.size()) != 2 * d)
      throw ParseError(e->line, "problem.ybox needs lo;hi per continuous coordinate");
    Vector lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = vals[2 * i];
      hi[i] = vals[2 * i + 1];
      if (lo[i] > hi[i]) throw ParseError(e->line, "empty ybox interval");
    }
    ybox = std::make_pair(lo, hi);
  }

  const RawEntry& fam = require("objective.family");
  if (fam.value != "quadratic")
    throw ParseError(fam.line, "unknown objective family '" + fam.value + "'");
  const RawEntry& qe = require("objective.q");
  auto qvals = parse_list(qe.value, qe.line);
  if (static_cast<int>(qvals.size()) != dim * dim)
    throw ParseError(qe.line, "objective.q must have (n+d)^2 entries (row-major)");
  QuadraticFn q;
  q.Q = Matrix(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) q.Q(i, j) = qvals[i * dim + j];
  check_psd(q.Q, qe.line);
  const RawEntry& ce = require("objective.c");
  auto cvals = parse_list(ce.value, ce.line);
  if (static_cast<int>(cvals.size()) != dim)
    throw ParseError(ce.line, "objective.c must have n+d entries");
  q.c = Eigen::Map<const Vector>(cvals.data(), dim);
  q.c0 = parse_num(require("objective.c0").value, 0);
  std::optional<double> spread;
  if (const RawEntry* e = take("objective.spread")) spread = parse_num(e->value, e->line);

  std::vector<Constraint> constraints;
  for (int idx = 1;; ++idx) {
    std::string prefix = "constraint." + std::to_string(idx) + ".";
    const RawEntry* f = take(prefix + "family");
    if (!f) break;
    if (f->value == "halfspace") {
      const RawEntry& ae = require(prefix + "a");
      auto avals = parse_list(ae.value, ae.line);
      if (static_cast<int>(avals.size()) != dim)
        throw ParseError(ae.line, "halfspace normal must have n+d entries");
      LinearConstraint lin;
      lin.a = Eigen::Map<const Vector>(avals.data(), dim);
      lin.b = parse_num(require(prefix + "b").value, 0);
      constraints.push_back(lin);
    } else if (f->value == "ball") {
      const RawEntry& ce2 = require(prefix + "center");
      auto cv = parse_list(ce2.value, ce2.line);
      if (static_cast<int>(cv.size()) != dim)
        throw ParseError(ce2.line, "ball center must have n+d entries");
      BallConstraint ball;
      ball.center = Eigen::Map<const Vector>(cv.data(), dim);
      ball.radius = parse_num(require(prefix + "radius").value, 0);
      if (ball.radius <= 0) throw ParseError(ce2.line, "ball radius must be positive");
      constraints.push_back(ball);
    } else if (f->value == "quadratic") {
      const RawEntry& qe2 = require(prefix + "q");
      auto qv = parse_list(qe2.value, qe2.line);
      if (static_cast<int>(qv.size()) != dim * dim)
        throw ParseError(qe2.line, "quadratic constraint needs (n+d)^2 entries");
      QuadraticConstraint qc;
      qc.q.Q = Matrix(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) qc.q.Q(i, j) = qv[i * dim + j];
      check_psd(qc.q.Q, qe2.line);
      const RawEntry& ce3 = require(prefix + "c");
      auto cv = parse_list(ce3.value, ce3.line);
      if (static_cast<int>(cv.size()) != dim)
        throw ParseError(ce3.line, "quadratic constraint c needs n+d entries");
      qc.q.c = Eigen::Map<const Vector>(cv.data(), dim);
      qc.q.c0 = parse_num(require(prefix + "c0").value, 0);
      constraints.push_back(qc);
    } else {
      throw ParseError(f->line, "unknown constraint family '" + f->value + "'");
    }
  }

  ProblemFile out;
  out.problem = make_problem(n, d, B, make_quadratic_objective(q, n, d, B, spread),
                             std::move(constraints), ybox);
  if (const RawEntry* e = take("accuracy.gamma")) out.gamma = parse_num(e->value, e->line);
  if (const RawEntry* e = take("accuracy.eps")) out.eps = parse_num(e->value, e->line);
  if (const RawEntry* e = take("accuracy.eps_sub")) out.eps_sub = parse_num(e->value, e->line);
  if (const RawEntry* e = take("accuracy.theta")) out.theta = parse_num(e->value, e->line);
  if (const RawEntry* e = take("solver.algorithm")) out.algorithm = e->value;
  if (const RawEntry* e = take("solver.budget"))
    out.budget = static_cast<long long>(parse_num(e->value, e->line));
  if (const RawEntry* e = take("solver.seed"))
    out.seed = static_cast<std::uint64_t>(parse_num(e->value, e->line));
  if (out.gamma < 0) throw ParseError(0, "accuracy.gamma must be nonnegative");

  for (const auto& [key, entry] : entries) {
    if (!used.count(key)) throw ParseError(entry.line, "unknown key '" + key + "'");
  }
  return out;
}

namespace {

std::string join(const std::vector<double>& vals) {
  std::string out;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) out += ";";
    out += format_double(vals[i]);
  }
  return out;
}

}  // namespace

std::string serialize_problem(const ProblemFile& f) {
  const Problem& p = f.problem;
  const int dim = static_cast<int>(p.dim());
  std::string out;
  out += "problem.n = " + std::to_string(p.n) + "\n";
  out += "problem.d = " + std::to_string(p.d) + "\n";
  out += "problem.b = " + format_double(p.B) + "\n";
  if (p.d > 0) {
    std::vector<double> yb;
    for (int i = 0; i < p.d; ++i) {
      yb.push_back(p.y_lo[i]);
      yb.push_back(p.y_hi[i]);
    }
    out += "problem.ybox = " + join(yb) + "\n";
  }
  const QuadraticFn& q = *p.objective.quadratic;
  std::vector<double> qv;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) qv.push_back(q.Q(i, j));
  out += "objective.family = quadratic\n";
  out += "objective.q = " + join(qv) + "\n";
  out += "objective.c = " + join(std::vector<double>(q.c.data(), q.c.data() + dim)) + "\n";
  out += "objective.c0 = " + format_double(q.c0) + "\n";
  out += "objective.spread = " + format_double(p.objective.spread) + "\n";
  int idx = 0;
  for (const Constraint& c : p.constraints) {
    ++idx;
    std::string pre = "constraint." + std::to_string(idx) + ".";
    if (const auto* lin = std::get_if<LinearConstraint>(&c)) {
      out += pre + "family = halfspace\n";
      out += pre + "a = " + join(std::vector<double>(lin->a.data(), lin->a.data() + dim)) + "\n";
      out += pre + "b = " + format_double(lin->b) + "\n";
    } else if (const auto* ball = std::get_if<BallConstraint>(&c)) {
      out += pre + "family = ball\n";
      out += pre + "center = " +
             join(std::vector<double>(ball->center.data(), ball->center.data() + dim)) + "\n";
      out += pre + "radius = " + format_double(ball->radius) + "\n";
    } else if (const auto* qc = std::get_if<QuadraticConstraint>(&c)) {
      out += pre + "family = quadratic\n";
      std::vector<double> qq;
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) qq.push_back(qc->q.Q(i, j));
      out += pre + "q = " + join(qq) + "\n";
      out += pre + "c = " + join(std::vector<double>(qc->q.c.data(), qc->q.c.data() + dim)) + "\n";
      out += pre + "c0 = " + format_double(qc->q.c0) + "\n";
    } else {
      throw std::invalid_argument("serialize_problem: generic constraints are library-only");
    }
  }
  out += "accuracy.gamma = " + format_double(f.gamma) + "\n";
  out += "accuracy.eps = " + format_double(f.eps) + "\n";
  out += "accuracy.eps_sub = " + format_double(f.eps_sub) + "\n";
  out += "accuracy.theta = " + format_double(f.theta) + "\n";
  out += "solver.algorithm = " + f.algorithm + "\n";
  out += "solver.budget = " + std::to_string(f.budget) + "\n";
  out += "solver.seed = " + std::to_string(f.seed) + "\n";
  return out;
}

}  // namespace midco
