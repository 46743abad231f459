#include "tp/cli_app.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <regex>
#include <thread>

#include "tp/errors.hpp"
#include "tp/gamma_asymptotics.hpp"
#include "tp/hodge_curve.hpp"
#include "tp/numeric_verify.hpp"
#include "tp/toric_calculus.hpp"

namespace tp {

namespace {

constexpr const char* kEngine = "tperiods 1.0.0";

[[noreturn]] void parse_error(const std::string& field, const std::string& what) {
  throw Error("ParseError", field + ": " + what);
}

void check_fields(const Json& obj, const std::string& where, const std::set<std::string>& allowed, bool strict,
                  std::vector<std::string>* warnings) {
  if (!obj.is_object()) parse_error(where, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (allowed.count(it.key())) continue;
    std::string msg = where + ": unknown field \"" + it.key() + "\"";
    if (strict) throw Error("ParseError", msg);
    if (warnings) warnings->push_back(msg);
  }
}

std::int64_t parse_int(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) parse_error(field, "expected an integer");
  return j.get<std::int64_t>();
}

IVec parse_point(const Json& j, const std::string& field) {
  if (!j.is_array()) parse_error(field, "expected an integer array");
  IVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(parse_int(j[i], field + "[" + std::to_string(i) + "]"));
  return v;
}

Json point_json(const IVec& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

Json complex_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

Json qmat_json(const QMat& m) {
  Json a = Json::array();
  for (auto& row : m) {
    Json r = Json::array();
    for (auto& x : row) r.push_back(to_string(x));
    a.push_back(r);
  }
  return a;
}

Json cf_json(const CF& c) { return {{"symbolic", c.to_string()}, {"value", complex_json(c.eval())}}; }

Json cfmat_json(const CFMat& m) {
  Json a = Json::array();
  for (auto& row : m) {
    Json r = Json::array();
    for (auto& x : row) r.push_back(cf_json(x));
    a.push_back(r);
  }
  return a;
}

Json expansion_json(const AsymptoticExpansion& e) {
  Json coeffs = Json::array();
  for (int k = 0; k <= e.degree(); ++k) {
    Json c = cf_json(e.coefficient(k));
    c["L_power"] = k;
    coeffs.push_back(c);
  }
  return {{"expansion", e.to_string()}, {"coefficients", coeffs}, {"indices", e.indices},
          {"orientation", e.orientation}};
}

// Everything a request needs, built once per run and shared read-only.
struct Context {
  ProblemInstance inst;
  RegularTriangulation tri;
  TropicalComplex tc;
  BranchAssignment br;
  QuadratureConfig quad;
};

struct Request {
  std::size_t index = 0;
  std::string kind;
  Json raw;
};

int point_index(const Context& c, const Json& j, const std::string& field) {
  IVec p = parse_point(j, field);
  int i = c.inst.index_of(p);
  if (i < 0) throw Error("ValidationError", field + ": " + to_string(p) + " is not a monomial exponent");
  return i;
}

const Json& need(const Json& r, const char* key, const std::string& where) {
  if (!r.contains(key)) parse_error(where, std::string("missing field \"") + key + "\"");
  return r.at(key);
}

int request_l(const Json& r, const std::string& where) {
  if (!r.contains("l")) return 1;
  auto l = parse_int(r.at("l"), where + ".l");
  if (l < 1) parse_error(where + ".l", "must be positive");
  return static_cast<int>(l);
}

std::vector<int> parse_sigma(const Context& c, const Json& r, const std::string& where) {
  const Json& s = need(r, "sigma", where);
  if (!s.is_array()) parse_error(where + ".sigma", "expected an array of points");
  std::vector<int> edge;
  for (std::size_t i = 0; i < s.size(); ++i)
    edge.push_back(point_index(c, s[i], where + ".sigma[" + std::to_string(i) + "]"));
  std::sort(edge.begin(), edge.end());
  return edge;
}

Json run_request(const Context& c, const Request& req, bool& verify_failed) {
  const Json& r = req.raw;
  std::string where = "requests[" + std::to_string(req.index) + "]";
  Json out = {{"index", req.index}, {"kind", req.kind}};
  if (req.kind == "sphere" || req.kind == "leading") {
    int l = request_l(r, where);
    IVec v = parse_point(need(r, "v", where), where + ".v");
    int w = point_index(c, need(r, "w", where), where + ".w");
    out["l"] = l;
    out["v"] = point_json(v);
    out["w"] = point_json(c.inst.point(w));
    if (req.kind == "sphere") {
      auto e = sphere_period_asymptotics(c.inst, c.tri, star_fan(c.tri, w), l, v, c.br);
      out["result"] = expansion_json(e);
    } else {
      auto lt = leading_term(c.inst, c.tri, c.tc, l, v, w);
      out["result"] = {{"degree", lt.degree}, {"coefficient", to_string(lt.coefficient)}};
    }
  } else if (req.kind == "torus") {
    int l = request_l(r, where);
    IVec v = parse_point(need(r, "v", where), where + ".v");
    auto edge = parse_sigma(c, r, where);
    int w = point_index(c, need(r, "w", where), where + ".w");
    out["l"] = l;
    out["v"] = point_json(v);
    out["w"] = point_json(c.inst.point(w));
    out["result"] = expansion_json(torus_period_asymptotics(c.inst, c.tri, l, v, edge, w));
  } else if (req.kind == "hodge") {
    auto h = limit_filtration(c.inst, c.tri, c.br);
    auto chk = check_limit_data(h);
    auto x = monodromy_crosscheck(c.inst, c.tri, c.tc, c.br);
    auto bc = check_branches(c.inst, c.tri, c.br);
    Json w = Json::array();
    for (int i : h.W) w.push_back(point_json(c.inst.point(i)));
    out["result"] = {
        {"W", w},
        {"genus", h.genus},
        {"N", qmat_json(h.N)},
        {"expN", qmat_json(h.expN)},
        {"Q", qmat_json(h.Q)},
        {"P", cfmat_json(h.P)},
        {"F1", cfmat_json(h.F1)},
        {"checks",
         {{"n_squared_zero", chk.n_squared_zero},
          {"exp_n_preserves_q", chk.exp_n_preserves_q},
          {"infinitesimal_isotropy", chk.infinitesimal_isotropy},
          {"length_block_symmetric", chk.length_block_symmetric},
          {"f1_rank", chk.f1_rank},
          {"isotropy_residual", chk.isotropy_residual},
          {"limit_det", chk.limit_det},
          {"hodge_det", chk.hodge_det},
          {"p_symmetric", chk.p_symmetric_numeric},
          {"reversal_failures", bc.reversal_failures},
          {"triangle_failures", bc.triangle_failures},
          {"ok", chk.ok(h.genus) && bc.ok()}}},
        {"monodromy_crosscheck",
         {{"recovered", qmat_json(x.recovered)},
          {"max_discrepancy", to_string(x.max_discrepancy)},
          {"ok", x.ok()}}},
    };
  } else if (req.kind == "verify") {
    int l = request_l(r, where);
    IVec v = parse_point(need(r, "v", where), where + ".v");
    CycleSpec cyc;
    std::string cycle = r.value("cycle", std::string("sphere"));
    if (cycle == "torus") {
      cyc.kind = CycleSpec::Kind::Torus;
      cyc.edge = parse_sigma(c, r, where);
    } else if (cycle != "sphere") {
      parse_error(where + ".cycle", "expected \"sphere\" or \"torus\"");
    }
    cyc.w = point_index(c, need(r, "w", where), where + ".w");
    std::vector<double> ts{1e-1, 1e-2, 1e-3};
    if (r.contains("t_sweep")) {
      ts.clear();
      for (auto& t : r.at("t_sweep")) {
        if (!t.is_number()) parse_error(where + ".t_sweep", "expected numbers");
        ts.push_back(t.get<double>());
      }
    }
    double tol = r.value("tolerance", 0.01);
    auto table = convergence_sweep(c.inst, c.tri, l, v, cyc, ts, c.quad);
    Json rows = Json::array();
    for (auto& row : table.rows)
      rows.push_back({{"t", row.t},
                      {"numeric", complex_json(row.numeric)},
                      {"symbolic", complex_json(row.symbolic)},
                      {"abs_err", row.abs_err},
                      {"est_quad_err", row.est_quad_err}});
    double rel = table.rows.empty() ? 0 : table.rows.back().abs_err / std::abs(table.rows.back().symbolic);
    bool pass = table.decreasing && rel < tol;
    if (!pass) verify_failed = true;
    out["l"] = l;
    out["v"] = point_json(v);
    out["w"] = point_json(c.inst.point(cyc.w));
    out["cycle"] = cycle;
    out["result"] = {{"rows", rows},
                     {"slope", table.slope},
                     {"decreasing", table.decreasing},
                     {"final_relative_error", rel},
                     {"tolerance", tol},
                     {"pass", pass}};
  } else {
    parse_error(where + ".kind", "unknown request kind \"" + req.kind + "\"");
  }
  return out;
}

const std::set<std::string> kRequestKeys{"kind", "l", "v", "w", "sigma", "t_sweep", "cycle", "tolerance"};

Json triangulation_json(const ProblemInstance& inst, const RegularTriangulation& tri) {
  Json top = Json::array();
  for (auto& s : tri.top) {
    Json cell = Json::array();
    for (int i : s) cell.push_back(point_json(inst.point(i)));
    top.push_back(cell);
  }
  Json counts = Json::array();
  for (auto& cells : tri.cells_by_dim) counts.push_back(cells.size());
  Json interior = Json::array();
  for (int i : inst.interior_indices()) interior.push_back(point_json(inst.point(i)));
  return {{"top_cells", top}, {"cells_by_dim", counts}, {"margin", to_string(tri.margin)}, {"interior", interior}};
}

Json dual_json(const TropicalComplex& tc) {
  std::vector<int> by_dim(static_cast<std::size_t>(tc.dim + 1), 0), bounded(by_dim.size(), 0);
  for (auto& c : tc.cells) {
    ++by_dim[static_cast<std::size_t>(c.dim)];
    if (c.bounded) ++bounded[static_cast<std::size_t>(c.dim)];
  }
  return {{"cells_by_dim", by_dim},
          {"bounded_by_dim", bounded},
          {"hypersurface_cells", tc.hypersurface_cells().size()}};
}

}  // namespace

Q parse_rational(const Json& j, const std::string& field) {
  if (!j.is_string()) parse_error(field, "expected a rational string \"p/q\"");
  static const std::regex re(R"(^-?[0-9]+(/[0-9]+)?$)");
  const std::string s = j.get<std::string>();
  if (!std::regex_match(s, re)) parse_error(field, "expected a rational string \"p/q\", got \"" + s + "\"");
  auto slash = s.find('/');
  if (slash != std::string::npos && Z(s.substr(slash + 1)) == 0) parse_error(field, "zero denominator");
  Q q(s);
  q.canonicalize();
  return q;
}

ProblemInstance parse_instance(const Json& doc, bool strict, std::vector<std::string>* warnings) {
  check_fields(doc, "problem", {"dim", "monomials", "overrides", "requests", "options"}, strict, warnings);
  auto dim = parse_int(need(doc, "dim", "problem"), "dim");
  const Json& ms = need(doc, "monomials", "problem");
  if (!ms.is_array()) parse_error("monomials", "expected an array");
  std::vector<CoefficientDatum> cs;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    std::string where = "monomials[" + std::to_string(i) + "]";
    check_fields(ms[i], where, {"m", "lambda", "c"}, strict, warnings);
    CoefficientDatum cd;
    cd.m = parse_point(need(ms[i], "m", where), where + ".m");
    cd.lambda = parse_rational(need(ms[i], "lambda", where), where + ".lambda");
    const Json& c = need(ms[i], "c", where);
    check_fields(c, where + ".c", {"re", "im"}, strict, warnings);
    cd.c.re = parse_rational(need(c, "re", where + ".c"), where + ".c.re");
    cd.c.im = c.contains("im") ? parse_rational(c.at("im"), where + ".c.im") : Q(0);
    cs.push_back(cd);
  }
  std::vector<BranchOverride> ovs;
  if (doc.contains("overrides")) {
    for (std::size_t i = 0; i < doc.at("overrides").size(); ++i) {
      const Json& o = doc.at("overrides")[i];
      std::string where = "overrides[" + std::to_string(i) + "]";
      check_fields(o, where, {"from", "to", "winding"}, strict, warnings);
      ovs.push_back({parse_point(need(o, "from", where), where + ".from"),
                     parse_point(need(o, "to", where), where + ".to"),
                     parse_int(need(o, "winding", where), where + ".winding")});
    }
  }
  return ProblemInstance::make(static_cast<int>(dim), cs, ovs);
}

Json instance_to_json(const ProblemInstance& inst) {
  Json ms = Json::array();
  for (auto& c : inst.coeffs)
    ms.push_back({{"m", point_json(c.m)},
                  {"lambda", to_string(c.lambda)},
                  {"c", {{"re", to_string(c.c.re)}, {"im", to_string(c.c.im)}}}});
  Json doc = {{"dim", inst.d}, {"monomials", ms}};
  if (!inst.overrides.empty()) {
    Json ovs = Json::array();
    for (auto& o : inst.overrides)
      ovs.push_back({{"from", point_json(o.from)}, {"to", point_json(o.to)}, {"winding", o.winding}});
    doc["overrides"] = ovs;
  }
  return doc;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PipelineResult run_pipeline(const std::string& input_text, const PipelineOptions& opts) {
  PipelineResult res;
  Json doc;
  try {
    doc = Json::parse(input_text);
  } catch (const Json::parse_error& e) {
    throw Error("ParseError", std::string("input is not valid JSON: ") + e.what());
  }
  Json& rep = res.report;
  rep["provenance"] = {{"input_hash", fnv1a_hex(input_text)}, {"engine", kEngine}};

  // Options and requests are parsed before any computation so that strict
  // mode rejects a bad file without partial output.
  QuadratureConfig quad;
  std::string branch_mode = "auto";
  if (doc.is_object() && doc.contains("options")) {
    const Json& o = doc.at("options");
    check_fields(o, "options", {"branch_mode", "quadrature"}, opts.strict, &res.warnings);
    branch_mode = o.value("branch_mode", branch_mode);
    if (branch_mode != "auto" && branch_mode != "principal")
      parse_error("options.branch_mode", "expected \"auto\" or \"principal\"");
    if (o.contains("quadrature")) {
      const Json& q = o.at("quadrature");
      check_fields(q, "options.quadrature", {"panels", "gauss_order", "center_shift"}, opts.strict, &res.warnings);
      quad.panels = static_cast<int>(q.contains("panels") ? parse_int(q.at("panels"), "options.quadrature.panels")
                                                          : quad.panels);
      quad.gauss_order = static_cast<int>(
          q.contains("gauss_order") ? parse_int(q.at("gauss_order"), "options.quadrature.gauss_order")
                                    : quad.gauss_order);
      quad.center_shift = q.value("center_shift", quad.center_shift);
      if (quad.panels < 1 || quad.gauss_order < 1) parse_error("options.quadrature", "node counts must be positive");
    }
  }
  std::vector<Request> requests;
  if (doc.is_object() && doc.contains("requests")) {
    const Json& rs = doc.at("requests");
    if (!rs.is_array()) parse_error("requests", "expected an array");
    for (std::size_t i = 0; i < rs.size(); ++i) {
      std::string where = "requests[" + std::to_string(i) + "]";
      check_fields(rs[i], where, kRequestKeys, opts.strict, &res.warnings);
      const Json& k = need(rs[i], "kind", where);
      if (!k.is_string()) parse_error(where + ".kind", "expected a string");
      requests.push_back({i, k.get<std::string>(), rs[i]});
    }
  }

  auto fail = [&](const Error& e) {
    rep["error"] = {{"kind", e.kind()}, {"detail", e.what()}};
    res.exit_code = 2;
  };
  Context ctx;
  try {
    ctx.inst = parse_instance(doc, opts.strict, &res.warnings);
  } catch (const Error& e) {
    if (e.kind() == "ParseError") throw;
    fail(e);
    rep["warnings"] = res.warnings;
    return res;
  }
  rep["instance"] = instance_to_json(ctx.inst);
  try {
    ctx.tri = validate_and_triangulate(ctx.inst);
    ctx.tc = dual_complex(ctx.tri);
  } catch (const Error& e) {
    fail(e);
    rep["warnings"] = res.warnings;
    return res;
  }
  rep["triangulation"] = triangulation_json(ctx.inst, ctx.tri);
  rep["dual_complex"] = dual_json(ctx.tc);
  ctx.quad = quad;
  ctx.br = branch_mode == "auto" && ctx.inst.d == 1 ? choose_arg_branches(ctx.inst, ctx.tri)
                                                    : principal_branches(ctx.inst);
  rep["options"] = {{"branch_mode", branch_mode},
                    {"quadrature",
                     {{"panels", quad.panels}, {"gauss_order", quad.gauss_order}, {"center_shift", quad.center_shift}}}};

  std::vector<Request> todo;
  if (opts.run_requests)
    for (auto& r : requests)
      if (opts.kinds.empty() || opts.kinds.count(r.kind)) todo.push_back(r);
  std::vector<Json> results(todo.size());
  std::vector<char> verify_failed(todo.size(), 0), errored(todo.size(), 0);
  std::atomic<std::size_t> next{0};
  std::mutex parse_mu;
  std::optional<Error> parse_failure;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < todo.size();) {
      bool vf = false;
      try {
        results[i] = run_request(ctx, todo[i], vf);
      } catch (const Error& e) {
        if (e.kind() == "ParseError") {
          std::lock_guard<std::mutex> lock(parse_mu);
          if (!parse_failure) parse_failure = e;
        }
        results[i] = {{"index", todo[i].index},
                      {"kind", todo[i].kind},
                      {"error", {{"kind", e.kind()}, {"detail", e.what()}}}};
        errored[i] = 1;
      }
      verify_failed[i] = vf;
    }
  };
  int n_threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(todo.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (parse_failure) throw *parse_failure;

  rep["results"] = Json::array();
  for (std::size_t i = 0; i < todo.size(); ++i) {
    rep["results"].push_back(results[i]);
    if (errored[i]) res.exit_code = 2;
    if (verify_failed[i] && res.exit_code == 0) res.exit_code = 3;
  }
  rep["warnings"] = res.warnings;
  return res;
}

std::vector<std::string> emit_sweep_csv(const Json& report, const std::string& dir,
                                        std::vector<std::string>* warnings) {
  std::vector<std::string> written;
  if (!report.contains("results")) {
    if (warnings) warnings->push_back("no sweep tables in report; no CSV written");
    return written;
  }
  for (auto& r : report.at("results")) {
    if (r.value("kind", std::string()) != "verify" || !r.contains("result")) continue;
    SweepTable table;
    for (auto& row : r.at("result").at("rows")) {
      SweepRow s;
      s.t = row.at("t").get<double>();
      s.numeric = {row.at("numeric")[0].get<double>(), row.at("numeric")[1].get<double>()};
      s.symbolic = {row.at("symbolic")[0].get<double>(), row.at("symbolic")[1].get<double>()};
      s.abs_err = row.at("abs_err").get<double>();
      s.est_quad_err = row.at("est_quad_err").get<double>();
      table.rows.push_back(s);
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::string path = (std::filesystem::path(dir) / ("sweep_" + std::to_string(r.at("index").get<int>()) + ".csv"))
                           .string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IoError", "cannot write " + path);
    out << table.to_csv();
    if (!out) throw Error("IoError", "write failed for " + path);
    written.push_back(path);
  }
  if (written.empty() && warnings) warnings->push_back("no sweep tables in report; no CSV written");
  return written;
}

}  // namespace tp
