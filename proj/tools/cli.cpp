// Copyright 2025 The FACPL Workbench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "facpl/constraint.hpp"
#include "facpl/enforcer.hpp"
#include "facpl/evaluator.hpp"
#include "facpl/generator.hpp"
#include "facpl/parser.hpp"
#include "facpl/smt.hpp"
#include "facpl/solver.hpp"
#include "facpl/translator.hpp"
#include "facpl/typing.hpp"

namespace facpl::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Raised for failures that map directly onto an exit code.
struct Failure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitEnvironment, "cannot read " + path};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  fs::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{kExitEnvironment, "cannot write " + path};
}

PolicyDocument load_document(const std::string& path) {
  auto doc = parse_document(read_file(path), path);
  if (!doc.ok()) throw Failure{kExitDomain, doc.error_text()};
  return std::move(*doc.value);
}

Policy load_policy(const std::string& path) {
  PolicyDocument doc = load_document(path);
  if (auto* p = std::get_if<Policy>(&doc)) return std::move(*p);
  return pdp_as_policy(std::get<Pas>(doc).pdp);
}

SyntacticRequest load_request(const std::string& path) {
  auto r = parse_request(read_file(path), path);
  if (!r.ok()) throw Failure{kExitDomain, r.error_text()};
  return std::move(*r.value);
}

std::string stem(const std::string& path) { return fs::path(path).stem(); }

json value_json(const Value& v) {
  switch (v.type()) {
    case ValueType::Bool: return v.as_bool();
    case ValueType::Double: return v.as_double();
    case ValueType::String: return v.as_string();
    case ValueType::Date: return v.as_date().to_string();
  }
  return nullptr;
}

json arg_json(const ArgValue& a) {
  if (const auto* v = std::get_if<Value>(&a)) return value_json(*v);
  json out = json::array();
  for (const auto& e : std::get<ValueSet>(a).elements()) out.push_back(value_json(e));
  return out;
}

// ---------------------------------------------------------------- check

int cmd_check(const std::string& file, std::ostream& out) {
  PolicyDocument doc = load_document(file);
  SolveResult r = welltyped(document_pdp(doc));
  if (auto* u = std::get_if<Unsat>(&r)) throw Failure{kExitDomain, file + ": " + u->message};
  out << file << ": well-typed\n";
  for (const auto& [n, t] : std::get<TypeAssignment>(r))
    out << "  " << n.to_string() << " : " << t.to_string() << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------- eval

struct EvalFlags {
  std::string file, request, log_sink, time;
  std::vector<std::string> failing;
  bool json = false;
};

std::string status_of(const DischargeEntry& e) {
  if (e.skipped_optional) return "SKIPPED-OPT";
  return e.succeeded ? "OK" : "FAIL";
}

int cmd_eval(const EvalFlags& f, std::ostream& out) {
  PolicyDocument doc = load_document(f.file);
  Pas pas;
  if (auto* p = std::get_if<Pas>(&doc)) {
    pas = std::move(*p);
  } else {
    pas.pdp.form = std::get<Policy>(doc);
  }
  const SyntacticRequest sr = load_request(f.request);

  ContextProvider provider = wall_clock_provider();
  if (!f.time.empty()) {
    auto d = Date::parse(f.time);
    if (!d) throw Failure{kExitDomain, "invalid --time '" + f.time + "'"};
    provider = time_provider(*d);
  }

  std::unique_ptr<std::ofstream> sink_file;
  std::shared_ptr<TextSink> sink;
  if (!f.log_sink.empty()) {
    sink_file = std::make_unique<std::ofstream>(f.log_sink, std::ios::app);
    if (!*sink_file) throw Failure{kExitEnvironment, "cannot open " + f.log_sink};
    sink = std::make_shared<TextSink>(sink_file.get());
  }
  DefaultActionOptions opts;
  opts.log_sink = sink;
  opts.mail_sink = sink;
  ActionRegistry reg = default_registry(opts);
  for (const auto& a : f.failing)
    reg.add(a, [](const std::vector<ArgValue>&) { return false; });

  const SemanticRequest r = build_request(sr, provider);
  const PdpResponse res = eval_pdp(pas.pdp, r);
  const EnforcedOutcome o = enforce(pas.enf, res, reg);
  if (sink) write_discharge_log(*sink, iso_timestamp_now(), o);

  if (f.json) {
    json j;
    j["decision"] = decision_name(o.decision);
    j["enforcement"] = enf_alg_name(pas.enf);
    json pdp;
    pdp["decision"] = decision_name(res.decision);
    pdp["obligations"] = json::array();
    for (const auto& io : res.obligations) {
      json jo;
      jo["type"] = io.type == ObType::Mandatory ? "m" : "o";
      jo["action"] = io.action;
      jo["args"] = json::array();
      for (const auto& a : io.args) jo["args"].push_back(arg_json(a));
      pdp["obligations"].push_back(jo);
    }
    j["pdp"] = pdp;
    j["discharge"] = json::array();
    for (const auto& e : o.discharge_log) {
      json je;
      je["action"] = e.action;
      je["args"] = json::array();
      for (const auto& a : e.args) je["args"].push_back(arg_json(a));
      je["status"] = status_of(e);
      j["discharge"].push_back(je);
    }
    out << j.dump() << "\n";
  } else {
    out << "pdp: " << res.to_string() << "\n";
    out << "decision: " << decision_name(o.decision) << "\n";
    for (const auto& e : o.discharge_log) {
      out << "  " << e.action << "(";
      for (std::size_t i = 0; i < e.args.size(); ++i)
        out << (i ? ", " : "") << arg_to_string(e.args[i]);
      out << ") " << status_of(e) << "\n";
    }
  }
  return kExitOk;
}

// ------------------------------------------------------------ translate

struct TranslateFlags {
  std::string file, out_dir;
  bool smt = false, constraints = false, simplified = false;
};

int cmd_translate(const TranslateFlags& f, std::ostream& out) {
  const Policy p = load_policy(f.file);
  const bool want_constraints = f.constraints || !f.smt;
  std::string constraints_text, smt_text;
  try {
    if (want_constraints) {
      ConstraintTuple t = translate_policy(p);
      if (f.simplified) t = simplify(t);
      constraints_text = print_tuple(t) + "\n";
    }
    if (f.smt) smt_text = emit_policy(p).text;
  } catch (const GreedyNotTranslatable& e) {
    throw Failure{kExitDomain, f.file + ": " + e.what()};
  } catch (const SmtError& e) {
    throw Failure{kExitDomain, f.file + ": " + e.what()};
  }
  if (f.out_dir.empty()) {
    out << constraints_text << smt_text;
    return kExitOk;
  }
  const std::string base = f.out_dir + "/" + stem(f.file);
  if (want_constraints) {
    write_file(base + ".constraints", constraints_text);
    out << base << ".constraints\n";
  }
  if (f.smt) {
    write_file(base + ".smt2", smt_text);
    out << base << ".smt2\n";
  }
  return kExitOk;
}

// --------------------------------------------------------------- verify

struct VerifyFlags {
  std::string file, props, out_dir = "smt-out", solver;
  double timeout = 30;
  int jobs = 1;
};

int cmd_verify(const VerifyFlags& f, std::ostream& out, std::ostream& err) {
  const Policy p = load_policy(f.file);
  std::vector<PropertyQuery> queries;
  try {
    queries = parse_properties(read_file(f.props),
                               fs::path(f.props).parent_path().string().empty()
                                   ? "."
                                   : fs::path(f.props).parent_path().string());
  } catch (const PropertyFileError& e) {
    throw Failure{kExitDomain, f.props + ": " + e.what()};
  }

  VerifyOptions base;
  if (!f.solver.empty()) base.solver.executable = f.solver;
  base.solver.timeout_seconds = f.timeout;
  base.out_dir = f.out_dir;
  base.policy_name = stem(f.file);

  struct Slot {
    std::optional<PropertyResult> result;
    std::optional<Failure> failure;
  };
  std::vector<Slot> slots(queries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < queries.size();) {
      VerifyOptions o = base;
      o.index = static_cast<int>(i) + 1;
      try {
        slots[i].result = verify(p, queries[i], o);
      } catch (const SolverUnavailable& e) {
        slots[i].failure = Failure{kExitEnvironment, e.what()};
      } catch (const GreedyNotTranslatable& e) {
        slots[i].failure = Failure{kExitDomain, e.what()};
      } catch (const SmtError& e) {
        slots[i].failure = Failure{kExitDomain, e.what()};
      } catch (const std::filesystem::filesystem_error& e) {
        slots[i].failure = Failure{kExitEnvironment, e.what()};
      }
    }
  };
  const int n = std::clamp(f.jobs, 1, std::max<int>(1, queries.size()));
  std::vector<std::thread> pool;
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  int code = kExitOk;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].failure) {
      err << f.props << ": query " << i + 1 << ": " << slots[i].failure->message << "\n";
      code = std::max(code, slots[i].failure->code);
      continue;
    }
    out << slots[i].result->to_json() << "\n";
    if (!slots[i].result->holds) code = std::max(code, kExitDomain);
  }
  return code;
}

// ------------------------------------------------------------------ gen

int cmd_gen(const GenSpec& spec, const std::string& out_file, std::ostream& out) {
  std::string text;
  try {
    text = print(gen_policy(spec));
  } catch (const GenGuardExceeded& e) {
    throw Failure{kExitDomain, e.what()};
  }
  if (out_file.empty()) {
    out << text;
  } else {
    write_file(out_file, text);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- bench

std::vector<int> parse_range(const std::string& s) {
  std::vector<int> out;
  try {
    if (auto dots = s.find(".."); dots != std::string::npos) {
      const int lo = std::stoi(s.substr(0, dots));
      const int hi = std::stoi(s.substr(dots + 2));
      for (int i = lo; i <= hi; ++i) out.push_back(i);
    } else {
      std::stringstream in(s);
      for (std::string part; std::getline(in, part, ',');)
        out.push_back(std::stoi(part));
    }
  } catch (const std::exception&) {
    throw Failure{kExitDomain, "invalid range '" + s + "'"};
  }
  if (out.empty()) throw Failure{kExitDomain, "empty range '" + s + "'"};
  return out;
}

struct BenchFlags {
  std::string depths = "3", widths = "3", attrs = "100";
  int requests = 1000;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct BenchRow {
  int d, w, a;
  double mean_us, p95_us;
  std::size_t evaluated;
};

BenchRow bench_one(int d, int w, int a, int requests, std::uint64_t seed) {
  const GenSpec spec{d, w, a, seed};
  const Policy p = gen_policy(spec);
  const auto attrs = gen_attributes(spec);
  std::mt19937_64 rng(seed + 17);
  std::vector<SemanticRequest> rs;
  rs.reserve(requests);
  for (int i = 0; i < requests; ++i) rs.push_back(gen_request(attrs, rng));

  // Warmup pass, not measured.
  const std::size_t warm = std::min<std::size_t>(rs.size(), 100);
  std::size_t sink = 0;
  for (std::size_t i = 0; i < warm; ++i)
    sink += static_cast<std::size_t>(eval_policy(p, rs[i]).decision);

  std::vector<double> us;
  us.reserve(rs.size());
  for (const auto& r : rs) {
    const auto t0 = std::chrono::steady_clock::now();
    sink += static_cast<std::size_t>(eval_policy(p, r).decision);
    us.push_back(std::chrono::duration<double, std::micro>(
                     std::chrono::steady_clock::now() - t0)
                     .count());
  }
  (void)sink;
  BenchRow row{d, w, a, 0, 0, us.size()};
  if (!us.empty()) {
    double total = 0;
    for (double x : us) total += x;
    row.mean_us = total / us.size();
    std::sort(us.begin(), us.end());
    row.p95_us = us[std::min(us.size() - 1, (us.size() * 95) / 100)];
  }
  return row;
}

int cmd_bench(const BenchFlags& f, std::ostream& out) {
  struct Cell {
    int d, w, a;
  };
  std::vector<Cell> cells;
  for (int d : parse_range(f.depths))
    for (int w : parse_range(f.widths))
      for (int a : parse_range(f.attrs)) cells.push_back({d, w, a});
  for (const auto& c : cells) {
    if (c.d < 1 || c.d > kMaxGenDepth || c.w < 1 || c.w > kMaxGenWidth || c.a < 1)
      throw Failure{kExitDomain, "generator spec outside d,w in 1..8, a >= 1"};
  }
  std::vector<BenchRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < cells.size();)
      rows[i] = bench_one(cells[i].d, cells[i].w, cells[i].a, f.requests, f.seed);
  };
  const int n = std::clamp<int>(f.jobs, 1, std::max<int>(1, cells.size()));
  std::vector<std::thread> pool;
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  out << "d,w,a,meanEvalMicros,p95EvalMicros,requestsEvaluated\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.3f,%.3f,%zu\n", r.d, r.w, r.a,
                  r.mean_us, r.p95_us, r.evaluated);
    out << buf;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"FACPL workbench: parse, evaluate, translate and verify "
               "access-control policies"};
  app.require_subcommand(1);

  std::string check_file;
  auto* check = app.add_subcommand("check", "parse and type-check a policy");
  check->add_option("file", check_file, "policy or PAS file")->required();

  EvalFlags ef;
  auto* eval = app.add_subcommand("eval", "evaluate a request through the PEP");
  eval->add_option("file", ef.file, "PAS or policy file")->required();
  eval->add_option("request", ef.request, "request file")->required();
  eval->add_flag("--json", ef.json, "print a JSON report");
  eval->add_option("--log-sink", ef.log_sink, "append discharge lines here");
  eval->add_option("--time", ef.time, "value of system/time (ISO date)");
  eval->add_option("--fail-action", ef.failing, "make this action fail");

  TranslateFlags tf;
  auto* translate = app.add_subcommand("translate", "emit constraints or SMT-LIB");
  translate->add_option("file", tf.file, "policy file")->required();
  translate->add_flag("--smt", tf.smt, "emit the SMT-LIB script");
  translate->add_flag("--constraints", tf.constraints, "emit the constraint tuple");
  translate->add_flag("--simplify", tf.simplified, "fold constants in the tuple");
  translate->add_option("-o,--out-dir", tf.out_dir, "write files here");

  VerifyFlags vf;
  auto* verify_cmd = app.add_subcommand("verify", "verify properties with the solver");
  verify_cmd->add_option("file", vf.file, "policy file")->required();
  verify_cmd->add_option("properties", vf.props, "property file")->required();
  verify_cmd->add_option("--out-dir", vf.out_dir, "directory for .smt2 scripts");
  verify_cmd->add_option("--timeout", vf.timeout, "solver timeout in seconds");
  verify_cmd->add_option("--jobs", vf.jobs, "parallel solver processes");
  verify_cmd->add_option("--solver", vf.solver, "solver executable");

  GenSpec gs;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a random policy p(d,w,a)");
  gen->add_option("-d,--depth", gs.depth, "nesting levels")->required();
  gen->add_option("-w,--width", gs.width, "children per policy set")->required();
  gen->add_option("-a,--attributes", gs.attributes, "attribute names")->required();
  gen->add_option("--seed", gs.seed, "random seed");
  gen->add_option("-o,--output", gen_out, "output file");

  BenchFlags bf;
  auto* bench = app.add_subcommand("bench", "time evaluation on generated policies");
  bench->add_option("-d,--depth", bf.depths, "depths, e.g. 3, 1..4 or 1,3");
  bench->add_option("-w,--width", bf.widths, "widths");
  bench->add_option("-a,--attributes", bf.attrs, "attribute counts");
  bench->add_option("--requests", bf.requests, "requests per policy");
  bench->add_option("--seed", bf.seed, "random seed");
  bench->add_option("--jobs", bf.jobs, "parallel policies");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitEnvironment;
  }

  try {
    if (*check) return cmd_check(check_file, out);
    if (*eval) return cmd_eval(ef, out);
    if (*translate) return cmd_translate(tf, out);
    if (*verify_cmd) return cmd_verify(vf, out, err);
    if (*gen) return cmd_gen(gs, gen_out, out);
    if (*bench) return cmd_bench(bf, out);
  } catch (const Failure& f) {
    err << f.message;
    if (f.message.empty() || f.message.back() != '\n') err << "\n";
    return f.code;
  } catch (const SolverUnavailable& e) {
    err << e.what() << "\n";
    return kExitEnvironment;
  }
  return kExitEnvironment;
}

}  // namespace facpl::cli
