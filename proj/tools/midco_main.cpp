#include <CLI11.hpp>

#include "midco/drivers.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum class LogLevel { quiet, info, trace };

LogLevel log_level() {
  const char* env = std::getenv("MIDCO_LOG");
  if (!env) return LogLevel::info;
  std::string v(env);
  if (v == "quiet") return LogLevel::quiet;
  if (v == "trace") return LogLevel::trace;
  return LogLevel::info;
}

void log_info(const std::string& msg) {
  if (log_level() != LogLevel::quiet) std::cerr << msg << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

midco::Vector parse_coords(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string cur;
  while (std::getline(ss, cur, ';')) {
    if (cur.empty()) continue;
    vals.push_back(std::stod(cur));
  }
  midco::Vector v(static_cast<Eigen::Index>(vals.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = vals[i];
  return v;
}

std::vector<double> parse_b_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cur;
  while (std::getline(ss, cur, ';')) {
    if (cur.empty()) continue;
    std::size_t caret = cur.find('^');
    if (caret != std::string::npos) {
      double base = std::stod(cur.substr(0, caret));
      double expo = std::stod(cur.substr(caret + 1));
      out.push_back(std::pow(base, expo));
    } else {
      out.push_back(std::stod(cur));
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace midco;
  CLI::App app{"midco: mixed-integer convex minimization toolkit"};
  app.require_subcommand(1);

  std::string file_path, algo, query_text, report_path, out_path, b_list_text = "2^10;2^14;2^20";
  int kbest_k = 2, trials = 5;
  std::uint64_t seed = 0;
  bool seed_set = false;

  CLI::App* solve = app.add_subcommand("solve", "solve a problem file");
  solve->add_option("file", file_path)->required();
  solve->add_option("--algo", algo, "mirror | 2d-exact | kbest | mixed-2d | general");
  solve->add_option("--seed", seed)->each([&](const std::string&) { seed_set = true; });

  CLI::App* improve = app.add_subcommand("improve", "query the improvement oracle");
  improve->add_option("file", file_path)->required();
  improve->add_option("--query", query_text, "semicolon-separated coordinates")->required();

  CLI::App* kbest = app.add_subcommand("kbest", "enumerate the k best points");
  kbest->add_option("file", file_path)->required();
  kbest->add_option("--k", kbest_k)->required();

  CLI::App* verify = app.add_subcommand("verify", "check a report against enumeration");
  verify->add_option("file", file_path)->required();
  verify->add_option("report", report_path)->required();

  CLI::App* bench = app.add_subcommand("bench", "evaluation-count benchmark");
  bench->add_option("file", file_path)->required();
  bench->add_option("--b-list", b_list_text, "box bounds, e.g. 2^10;2^14;2^20");
  bench->add_option("--trials", trials);
  bench->add_option("--out", out_path, "CSV output path (default stdout)");
  bench->add_option("--seed", seed)->each([&](const std::string&) { seed_set = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    ProblemFile file = parse_problem(read_file(file_path));

    if (*solve) {
      RunReport r = run_solve(file, algo, seed_set ? std::optional(seed) : std::nullopt);
      std::cout << serialize_report(r);
      log_info("wall_ms " + format_double(r.wall_ms));
      return r.exit_code();
    }
    if (*improve) {
      Vector q = parse_coords(query_text);
      if (q.size() != file.problem.dim()) {
        std::cerr << "query needs " << file.problem.dim() << " coordinates\n";
        return 64;
      }
      MixedPoint z(q.head(file.problem.n), q.tail(file.problem.d));
      ImprovementOutcome out = run_improve(file, z);
      if (const auto* imp = std::get_if<Improved>(&out)) {
        std::cout << "improved\n";
        std::cout << "point.x = ";
        for (Eigen::Index i = 0; i < imp->point.x.size(); ++i)
          std::cout << (i ? ";" : "") << format_double(imp->point.x[i]);
        std::cout << "\npoint.y = ";
        for (Eigen::Index i = 0; i < imp->point.y.size(); ++i)
          std::cout << (i ? ";" : "") << format_double(imp->point.y[i]);
        std::cout << "\nvalue = " << format_double(imp->value) << "\n";
      } else {
        std::cout << "no-better\n";
      }
      return 0;
    }
    if (*kbest) {
      KBestRun kb = run_kbest(file, kbest_k);
      if (kb.points.empty()) {
        std::cout << "infeasible\n";
        return 2;
      }
      for (std::size_t i = 0; i < kb.points.size(); ++i) {
        std::cout << "k " << (i + 1) << " value " << format_double(kb.values[i]) << " x ";
        for (Eigen::Index j = 0; j < kb.points[i].x.size(); ++j)
          std::cout << (j ? ";" : "") << format_double(kb.points[i].x[j]);
        std::cout << "\n";
      }
      if (kb.exhausted) std::cout << "no-more-points\n";
      return 0;
    }
    if (*verify) {
      RunReport r = parse_report(read_file(report_path));
      VerifyResult v = run_verify(file, r);
      std::cout << (v.pass ? "PASS" : "FAIL") << " " << v.detail << "\n";
      return v.pass ? 0 : 1;
    }
    if (*bench) {
      BenchResult res = run_bench(file, parse_b_list(b_list_text), trials,
                                  seed_set ? seed : file.seed);
      std::string csv = bench_csv(res);
      if (out_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(out_path);
        out << csv;
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 65;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 64;
}
