// sievelab.cpp
//
// Command-line front end. Every subcommand reads a sieve description (and
// numeric flags), runs one operation, and prints a TSV report: '#'-prefixed
// metadata lines (spec hash, truncation, window, seed), a header row, then
// data rows. --json switches to a single {"meta":..., "rows":...} object.
//
// Exit codes: 0 success, 1 domain error (printed as a single machine-readable
// reason line), 2 usage or parse error.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sievelab/dynamics.hpp"
#include "sievelab/enumerate.hpp"
#include "sievelab/erdos.hpp"
#include "sievelab/pnt.hpp"
#include "sievelab/polysieve.hpp"
#include "sievelab/structure.hpp"

using json = nlohmann::json;
using namespace sievelab;

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_hex(u64 v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

// Accumulates one report; emitted as TSV or JSON.
struct Report {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_meta(const std::string& k, const std::string& v) {
    meta.emplace_back(k, v);
  }
  void header(std::vector<std::string> cols) { columns = std::move(cols); }
  void row(std::vector<std::string> vals) { rows.push_back(std::move(vals)); }

  void emit(bool as_json) const {
    if (as_json) {
      json out;
      out["meta"] = json::object();
      for (auto& [k, v] : meta) out["meta"][k] = v;
      out["rows"] = json::array();
      for (auto& r : rows) {
        json obj = json::object();
        for (size_t i = 0; i < columns.size() && i < r.size(); ++i)
          obj[columns[i]] = r[i];
        out["rows"].push_back(std::move(obj));
      }
      std::cout << out.dump(2) << "\n";
      return;
    }
    for (auto& [k, v] : meta) std::cout << "# " << k << "\t" << v << "\n";
    for (size_t i = 0; i < columns.size(); ++i)
      std::cout << (i ? "\t" : "") << columns[i];
    std::cout << "\n";
    for (auto& r : rows) {
      for (size_t i = 0; i < r.size(); ++i)
        std::cout << (i ? "\t" : "") << r[i];
      std::cout << "\n";
    }
  }
};

struct DomainFailure {
  std::string reason;  // machine-readable token
  std::string detail;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainFailure{"FileNotFound", path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::shared_ptr<const SieveSpec> load_spec(const std::string& path) {
  return std::make_shared<SieveSpec>(parse_sieve(read_file(path)));
}

u64 default_seed() {
  if (const char* env = std::getenv("SIEVELAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
    }
  }
  return kDefaultSeed;
}

// "1;2;-3" (k=1) or "0,0;1,2" (k=2); empty string = empty set
std::vector<Point> parse_points(const std::string& text, int k) {
  std::vector<Point> pts;
  if (text.empty()) return pts;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ';')) {
    std::vector<i64> coords;
    std::istringstream pin(part);
    std::string c;
    while (std::getline(pin, c, ',')) {
      try {
        coords.push_back(std::stoll(c));
      } catch (...) {
        throw Error(Errc::BadInput, "bad coordinate '" + c + "'");
      }
    }
    if (int(coords.size()) != k)
      throw Error(Errc::ArityMismatch,
                  "point '" + part + "' does not have arity " +
                      std::to_string(k));
    pts.push_back(Point(std::move(coords)));
  }
  return pts;
}

// "A|B" where both halves are point lists
Pattern parse_pattern(const std::string& text, int k) {
  size_t bar = text.find('|');
  Pattern p;
  p.A = parse_points(bar == std::string::npos ? text : text.substr(0, bar), k);
  if (bar != std::string::npos) p.B = parse_points(text.substr(bar + 1), k);
  p.validate(k);
  return p;
}

std::vector<i64> parse_int_list(const std::string& text) {
  std::vector<i64> out;
  std::istringstream in(text);
  std::string c;
  while (std::getline(in, c, ','))
    out.push_back(std::stoll(c));
  return out;
}

IntPolynomial parse_poly(const std::string& text) {
  auto v = parse_int_list(text);
  if (v.empty()) throw Error(Errc::BadInput, "empty polynomial");
  return IntPolynomial(std::move(v));
}

std::string points_str(const std::vector<Point>& pts) {
  std::string s;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ";";
    for (int j = 0; j < pts[i].arity(); ++j)
      s += (j ? "," : "") + std::to_string(pts[i].x[size_t(j)]);
  }
  return s.empty() ? "-" : s;
}

json cert_to_json(const XrCertificate& cert) {
  json j;
  j["A"] = points_str(cert.A);
  j["B"] = points_str(cert.B);
  j["indices"] = cert.index_for;
  j["witnesses"] = json::object();
  for (auto& [i, w] : cert.witness) {
    std::string key = std::to_string(i);
    std::vector<i64> coords(w.x.begin(), w.x.end());
    j["witnesses"][key] = coords;
  }
  return j;
}

XrCertificate cert_from_json(const json& j, int k) {
  XrCertificate cert;
  cert.A = parse_points(j.at("A").get<std::string>() == "-"
                            ? ""
                            : j.at("A").get<std::string>(),
                        k);
  cert.B = parse_points(j.at("B").get<std::string>() == "-"
                            ? ""
                            : j.at("B").get<std::string>(),
                        k);
  for (auto& v : j.at("indices")) cert.index_for.push_back(v.get<i64>());
  for (auto& [key, val] : j.at("witnesses").items()) {
    std::vector<i64> coords;
    for (auto& c : val) coords.push_back(c.get<i64>());
    cert.witness[std::stoll(key)] = Point(std::move(coords));
  }
  return cert;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sievelab: congruence sieves over Z^k, their free sets, "
               "measures and certificates"};
  app.require_subcommand(1);
  app.fallthrough();  // --json may follow the subcommand
  bool as_json = false;
  app.add_flag("--json", as_json, "emit one JSON object instead of TSV");

  // common option holders
  std::string spec_path, spec2_path, window_text, out_path, cert_path;
  std::string a_text, b_text, family_text = "interval1", strategy = "uniform";
  std::string f_text, shift_text;
  std::vector<std::string> pattern_texts, poly_texts;
  i64 L = 0, L2 = -1, Lmax = 0, Linner = 0, N = 0, n_samples = 10000;
  i64 q = 1, x0 = 0, at_l = 2, P_max = 100, index_flag = 0;
  u64 seed = default_seed();
  double threshold = 0.05;
  bool list_points = false;
  std::string levels_text, ns_text, at_text;

  auto add_spec = [&](CLI::App* cmd, bool second = false) {
    cmd->add_option("--spec", spec_path, "sieve description file")->required();
    if (second)
      cmd->add_option("--spec2", spec2_path, "second sieve description file")
          ->required();
  };

  auto* c_enum = app.add_subcommand("enumerate", "free points of a window");
  add_spec(c_enum);
  c_enum->add_option("--L", L, "truncation level")->required();
  c_enum->add_option("--window", window_text)->required();
  c_enum->add_flag("--list", list_points, "list the free points");

  auto* c_dens = app.add_subcommand("density", "certified density bracket");
  add_spec(c_dens);
  c_dens->add_option("--L", L)->required();
  c_dens->add_option("--N", ns_text, "window sizes for empirical ratios");
  c_dens->add_option("--family", family_text,
                     "interval1 | interval0 | box | shifted");
  c_dens->add_option("--shift", shift_text, "box center for family=shifted");

  auto* c_tails = app.add_subcommand("tails", "weak/strong tail profile");
  add_spec(c_tails);
  c_tails->add_option("--Lmax", Lmax)->required();
  c_tails->add_option("--levels", levels_text)->required();
  c_tails->add_option("--window", window_text)->required();

  auto* c_adm = app.add_subcommand("admissible", "admissibility of a set");
  add_spec(c_adm);
  c_adm->add_option("--L", L)->required();
  c_adm->add_option("--A", a_text)->required();

  auto* c_pat = app.add_subcommand("pattern", "pattern occurrences in a window");
  add_spec(c_pat);
  c_pat->add_option("--L", L)->required();
  c_pat->add_option("--A", a_text);
  c_pat->add_option("--B", b_text);
  c_pat->add_option("--window", window_text)->required();

  auto* c_stab = app.add_subcommand("stabilizer", "class stabilizers");
  add_spec(c_stab);
  c_stab->add_option("--L", L)->required();
  c_stab->add_option("--index", index_flag, "single class index");

  auto* c_min = app.add_subcommand("minimal", "minimality verdicts");
  add_spec(c_min);
  c_min->add_option("--L", L)->required();
  c_min->add_option("--index", index_flag);

  auto* c_con = app.add_subcommand("contract", "contract to a minimal prefix");
  add_spec(c_con);
  c_con->add_option("--L", L)->required();
  c_con->add_option("-o,--out", out_path, "write the contracted sieve here");

  auto* c_eq = app.add_subcommand("equiv", "equivalence of two prefixes");
  add_spec(c_eq, true);
  c_eq->add_option("--L", L)->required();
  c_eq->add_option("--L2", L2, "second truncation (defaults to --L)");

  auto* c_un = app.add_subcommand("union", "union sieve via the coprimality graph");
  add_spec(c_un, true);
  c_un->add_option("--L", L)->required();
  c_un->add_option("-o,--out", out_path, "write the union sieve here");

  auto* c_lam = app.add_subcommand("lambda", "minimum-gap profile");
  add_spec(c_lam);
  c_lam->add_option("--L", L)->required();

  auto* c_mir = app.add_subcommand("mirsky", "sampled pattern frequencies");
  add_spec(c_mir);
  c_mir->add_option("--L", L)->required();
  c_mir->add_option("--pattern", pattern_texts, "pattern 'A|B' (repeatable)")
      ->required();
  c_mir->add_option("--n", n_samples);
  c_mir->add_option("--seed", seed);

  auto* c_cyl = app.add_subcommand("cylinder", "cylinder measure bracket");
  add_spec(c_cyl);
  c_cyl->add_option("--L", L)->required();
  c_cyl->add_option("--A", a_text);
  c_cyl->add_option("--B", b_text);

  auto* c_xr = app.add_subcommand("xr-test", "window-pattern certificate search");
  add_spec(c_xr);
  c_xr->add_option("--L", L)->required();
  c_xr->add_option("--A", a_text)->required();
  c_xr->add_option("--B", b_text)->required();
  c_xr->add_option("--cert", cert_path, "write the certificate JSON here");

  auto* c_spec = app.add_subcommand("spectrum", "stabilizer invariant factors");
  add_spec(c_spec);
  c_spec->add_option("--L", L)->required();

  auto* c_sum = app.add_subcommand("sumset", "shifted-sieve experiments");
  add_spec(c_sum);
  c_sum->add_option("--L", L)->required();
  c_sum->add_option("--A", a_text)->required();
  c_sum->add_option("--strategy", strategy, "uniform | greedy");
  c_sum->add_option("--window", window_text)->required();
  c_sum->add_option("--n", n_samples);
  c_sum->add_option("--seed", seed);
  c_sum->add_option("--Linner", Linner);
  c_sum->add_option("--threshold", threshold);

  auto* c_psv = app.add_subcommand("poly-sieve", "sieve of polynomial root classes");
  c_psv->add_option("--poly", poly_texts, "coefficients low to high")->required();
  c_psv->add_option("--l", at_l);
  c_psv->add_option("--Pmax", P_max);
  c_psv->add_option("-o,--out", out_path);

  auto* c_pd = app.add_subcommand("poly-density", "density of joint l-free values");
  c_pd->add_option("--poly", poly_texts, "repeatable")->required();
  c_pd->add_option("--l", at_l);
  c_pd->add_option("--Pmax", P_max);

  auto* c_pc = app.add_subcommand("poly-count", "exact l-free value count");
  c_pc->add_option("--poly", poly_texts)->required();
  c_pc->add_option("--l", at_l);
  c_pc->add_option("--N", N)->required();

  auto* c_res = app.add_subcommand("resultant", "resultant of two polynomials");
  c_res->add_option("--poly", poly_texts, "exactly two")->required();

  auto* c_om = app.add_subcommand("omega", "prime factor counts");
  c_om->add_option("--N", N)->required();
  c_om->add_option("--at", at_text, "values to report (default: summary)");

  auto* c_pnt = app.add_subcommand("pnt-average", "ergodic average over the free set");
  add_spec(c_pnt);
  c_pnt->add_option("--L", L)->required();
  c_pnt->add_option("--N", N)->required();
  c_pnt->add_option("--q", q)->required();
  c_pnt->add_option("--f", f_text, "observable values, e.g. 1,-1 or 2/3,-1/3")
      ->required();
  c_pnt->add_option("--x0", x0);

  auto* c_bes = app.add_subcommand("besicovitch", "periodic approximation error");
  add_spec(c_bes);
  c_bes->add_option("--L", L)->required();
  c_bes->add_option("--Linner", Linner)->required();
  c_bes->add_option("--N", N)->required();

  auto* c_ver = app.add_subcommand("verify-cert", "re-check a certificate");
  add_spec(c_ver);
  c_ver->add_option("--L", L)->required();
  c_ver->add_option("--cert", cert_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Report rep;
  try {
    auto meta_spec = [&](const SieveSpec& s) {
      rep.add_meta("spec-hash", fmt_hex(spec_hash(s)));
      rep.add_meta("L", std::to_string(L));
    };

    if (app.got_subcommand(c_enum)) {
      rep.add_meta("command", "enumerate");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      Window w = Window::parse(window_text);
      rep.add_meta("window", w.to_string());
      Sieve sv = materialize(spec, L);
      FreeSetReport fr = enumerate_free(sv, w);
      if (list_points) {
        rep.header({"point"});
        for (i64 idx = 0; idx < w.size(); ++idx)
          if (fr.is_free(idx)) rep.row({points_str({w.point_at(idx)})});
      } else {
        rep.header({"free_count", "window_size", "ratio"});
        rep.row({std::to_string(fr.free_count), std::to_string(w.size()),
                 fmt_double(double(fr.free_count) / double(w.size()))});
      }
    } else if (app.got_subcommand(c_dens)) {
      rep.add_meta("command", "density");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      Sieve sv = materialize(spec, L);
      BracketedValue b = product_density(sv);
      rep.header({"kind", "N", "lower", "upper", "value", "exact"});
      rep.row({"bracket", "-", fmt_double(b.lower), fmt_double(b.upper),
               fmt_double(b.midpoint()), b.exact ? "1" : "0"});
      if (!ns_text.empty()) {
        WindowFamily fam = WindowFamily::Interval1;
        if (family_text == "interval0") fam = WindowFamily::Interval0;
        else if (family_text == "box") fam = WindowFamily::SymmetricBox;
        else if (family_text == "shifted") fam = WindowFamily::ShiftedBox;
        else if (family_text != "interval1")
          throw Error(Errc::BadInput, "unknown family " + family_text);
        Point shift;
        if (!shift_text.empty()) {
          auto pts = parse_points(shift_text, sv.k);
          if (!pts.empty()) shift = pts[0];
        } else if (fam == WindowFamily::ShiftedBox) {
          shift = Point(std::vector<i64>(size_t(sv.k), 0));
        }
        for (const auto& d :
             empirical_density(sv, fam, parse_int_list(ns_text), shift))
          rep.row({"empirical", std::to_string(d.N), "-", "-",
                   fmt_double(d.ratio), "-"});
      }
    } else if (app.got_subcommand(c_tails)) {
      rep.add_meta("command", "tails");
      auto spec = load_spec(spec_path);
      L = Lmax;
      meta_spec(*spec);
      Window w = Window::parse(window_text);
      rep.add_meta("window", w.to_string());
      rep.add_meta("note", "counts are lower bounds for the untruncated tails");
      Sieve sv = materialize(spec, Lmax);
      rep.header({"level", "weak_count", "strong_count", "weak_ratio",
                  "strong_ratio"});
      for (const auto& t : tails_profile(sv, w, parse_int_list(levels_text)))
        rep.row({std::to_string(t.L), std::to_string(t.weak_count),
                 std::to_string(t.strong_count), fmt_double(t.weak_ratio),
                 fmt_double(t.strong_ratio)});
    } else if (app.got_subcommand(c_adm)) {
      rep.add_meta("command", "admissible");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      Sieve sv = materialize(spec, L);
      auto v = is_admissible(parse_points(a_text, sv.k), sv);
      rep.header({"verdict", "witness_index", "verified_up_to"});
      switch (v.kind) {
        case AdmissibleVerdict::Kind::Admissible:
          rep.row({"Admissible", "-", "-"});
          break;
        case AdmissibleVerdict::Kind::NotAdmissible:
          rep.row({"NotAdmissible", std::to_string(v.witness_index), "-"});
          break;
        case AdmissibleVerdict::Kind::AdmissibleUpTo:
          rep.row({"AdmissibleUpTo", "-", std::to_string(v.upto)});
          break;
      }
    } else if (app.got_subcommand(c_pat)) {
      rep.add_meta("command", "pattern");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      Window w = Window::parse(window_text);
      rep.add_meta("window", w.to_string());
      Sieve sv = materialize(spec, L);
      auto pc = pattern_count(parse_points(a_text, sv.k),
                              parse_points(b_text, sv.k), sv, w);
      rep.header({"count", "window_size", "ratio"});
      rep.row({std::to_string(pc.count), std::to_string(pc.window_size),
               fmt_double(pc.ratio)});
    } else if (app.got_subcommand(c_stab)) {
      rep.add_meta("command", "stabilizer");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      Sieve sv = materialize(spec, L);
      rep.header({"index", "modulus", "order", "stab_index", "elements"});
      for (i64 i = 1; i <= sv.L(); ++i) {
        if (index_flag && i != index_flag) continue;
        Stabilizer st = stabilizer(sv.at(i).set);
        std::string elems = st.elements.size() <= 16 ? points_str(st.elements)
                                                     : "(large)";
        std::string mod;
        for (int j = 0; j < sv.k; ++j)
          mod += (j ? "," : "") + std::to_string(sv.at(i).modulus.c[size_t(j)]);
        rep.row({std::to_string(i), mod, std::to_string(st.elements.size()),
                 std::to_string(st.index), elems});
      }
    } else if (app.got_subcommand(c_min)) {
      rep.add_meta("command", "minimal");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      Sieve sv = materialize(spec, L);
      rep.header({"index", "verdict", "parts"});
      for (i64 i = 1; i <= sv.L(); ++i) {
        if (index_flag && i != index_flag) continue;
        auto v = minimal_class(sv.at(i).set);
        if (std::holds_alternative<Minimal>(v)) {
          rep.row({std::to_string(i), "Minimal", "-"});
        } else {
          std::string parts;
          for (const auto& p : std::get<Decomposition>(v).parts) {
            if (!parts.empty()) parts += " ";
            std::string mod;
            for (int j = 0; j < sv.k; ++j)
              mod += (j ? "," : "") + std::to_string(p.div.c[size_t(j)]);
            parts += "mod(" + mod + "):{" + points_str(p.residues) + "}";
          }
          rep.row({std::to_string(i), "Decomposable", parts});
        }
      }
    } else if (app.got_subcommand(c_con)) {
      rep.add_meta("command", "contract");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      Sieve sv = contract_sieve(materialize(spec, L));
      std::string text = print_sieve(*sv.spec);
      if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << text;
        rep.header({"classes", "written_to"});
        rep.row({std::to_string(sv.L()), out_path});
      } else {
        std::cout << text;
        return 0;
      }
    } else if (app.got_subcommand(c_eq)) {
      rep.add_meta("command", "equiv");
      auto spec = load_spec(spec_path);
      auto spec2 = load_spec(spec2_path);
      meta_spec(*spec);
      rep.add_meta("spec2-hash", fmt_hex(spec_hash(*spec2)));
      Sieve a = materialize(spec, L);
      Sieve b = materialize(spec2, L2 < 0 ? L : L2);
      auto v = check_equivalent(a, b);
      rep.header({"verdict", "side", "class_index", "witness"});
      if (v.equivalent)
        rep.row({"EquivalentUpTo(" + std::to_string(L) + ")", "-", "-", "-"});
      else
        rep.row({"NotEquivalent", v.side == 0 ? "first" : "second",
                 std::to_string(v.class_index), points_str({v.witness})});
    } else if (app.got_subcommand(c_un)) {
      rep.add_meta("command", "union");
      auto spec = load_spec(spec_path);
      auto spec2 = load_spec(spec2_path);
      meta_spec(*spec);
      rep.add_meta("spec2-hash", fmt_hex(spec_hash(*spec2)));
      auto res = union_sieves(spec, spec2, L);
      if (!res.ok) {
        std::string reason = res.failure == Errc::NoCommonBasis
                                 ? "NoCommonBasisUpTo(" + std::to_string(res.upto) + ")"
                                 : "NotWellDefined";
        throw DomainFailure{reason, "union of sieves failed"};
      }
      rep.header({"component", "lcm", "class_size", "members"});
      for (size_t c = 0; c < res.components.size(); ++c) {
        const auto& uc = res.components[c];
        std::string mod, mem;
        for (int j = 0; j < int(uc.lcm.c.size()); ++j)
          mod += (j ? "," : "") + std::to_string(uc.lcm.c[size_t(j)]);
        for (auto [side, idx] : uc.members)
          mem += (mem.empty() ? "" : " ") + std::string(side == 0 ? "a" : "b") +
                 std::to_string(idx);
        rep.row({std::to_string(c + 1), mod, std::to_string(uc.cls.count()),
                 mem});
      }
      if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << print_sieve(*res.combined.spec);
      }
    } else if (app.got_subcommand(c_lam)) {
      rep.add_meta("command", "lambda");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      Sieve sv = materialize(spec, L);
      rep.header({"index", "lambda", "running_max", "new_record"});
      for (const auto& p : lambda_profile(sv))
        rep.row({std::to_string(p.index), std::to_string(p.lambda),
                 std::to_string(p.running_max), p.record ? "1" : "0"});
    } else if (app.got_subcommand(c_mir)) {
      rep.add_meta("command", "mirsky");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      rep.add_meta("seed", std::to_string(seed));
      rep.add_meta("samples", std::to_string(n_samples));
      Sieve sv = materialize(spec, L);
      std::vector<Pattern> pats;
      for (const auto& t : pattern_texts) pats.push_back(parse_pattern(t, sv.k));
      rep.header({"A", "B", "hits", "frequency", "stderr", "cylinder"});
      for (const auto& r : mirsky_sample(sv, pats, n_samples, seed))
        rep.row({points_str(r.pattern.A), points_str(r.pattern.B),
                 std::to_string(r.hits), fmt_double(r.frequency),
                 fmt_double(r.stderr_), fmt_double(r.cylinder)});
    } else if (app.got_subcommand(c_cyl)) {
      rep.add_meta("command", "cylinder");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      Sieve sv = materialize(spec, L);
      Pattern pat{parse_points(a_text, sv.k), parse_points(b_text, sv.k)};
      auto cv = cylinder_measure(pat, sv);
      rep.header({"truncated", "lower", "upper", "exact_zero"});
      rep.row({fmt_double(cv.truncated), fmt_double(cv.bracket.lower),
               fmt_double(cv.bracket.upper), cv.exact_zero ? "1" : "0"});
    } else if (app.got_subcommand(c_xr)) {
      rep.add_meta("command", "xr-test");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      Sieve sv = materialize(spec, L);
      auto out = xr_window_test(parse_points(a_text, sv.k),
                                parse_points(b_text, sv.k), sv);
      rep.header({"outcome", "indices", "witnesses"});
      if (!out.found) {
        rep.row({"NoCertificateUpTo(" + std::to_string(out.upto) + ")", "-", "-"});
      } else {
        std::string idx, wit;
        for (i64 i : out.cert.index_for)
          idx += (idx.empty() ? "" : ",") + std::to_string(i);
        for (auto& [i, w] : out.cert.witness)
          wit += (wit.empty() ? "" : " ") + std::to_string(i) + ":" +
                 points_str({w});
        rep.row({"Certificate", idx.empty() ? "-" : idx,
                 wit.empty() ? "-" : wit});
        if (!cert_path.empty()) {
          std::ofstream co(cert_path);
          co << cert_to_json(out.cert).dump(2) << "\n";
        }
      }
    } else if (app.got_subcommand(c_spec)) {
      rep.add_meta("command", "spectrum");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      rep.add_meta("note",
                   "eigenvalue characters are exactly those trivial on a "
                   "finite intersection of the listed stabilizers");
      Sieve sv = materialize(spec, L);
      rep.header({"index", "stab_order", "stab_index", "invariant_factors"});
      for (const auto& r : spectrum(sv)) {
        std::string inv;
        for (i64 v : r.invariant_factors)
          inv += (inv.empty() ? "" : ",") + std::to_string(v);
        rep.row({std::to_string(r.index), std::to_string(r.stabilizer_order),
                 std::to_string(r.stabilizer_index), inv.empty() ? "1" : inv});
      }
    } else if (app.got_subcommand(c_sum)) {
      rep.add_meta("command", "sumset");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      Window w = Window::parse(window_text);
      rep.add_meta("window", w.to_string());
      Sieve sv = materialize(spec, L);
      auto A = parse_points(a_text, sv.k);
      if (strategy == "uniform") {
        rep.add_meta("seed", std::to_string(seed));
        auto st = sample_shifted_uniform(sv, A, w, n_samples, seed, Linner,
                                         threshold);
        rep.header({"samples", "mean_weak_ratio", "frac_below", "threshold",
                    "frac_stderr"});
        rep.row({std::to_string(st.samples), fmt_double(st.mean),
                 fmt_double(st.frac_below), fmt_double(st.threshold),
                 fmt_double(st.frac_stderr)});
      } else if (strategy == "greedy") {
        auto res = sample_shifted_greedy(sv, A, w);
        rep.header({"b_count", "b_density", "sumset_verified"});
        rep.row({std::to_string(res.b_count), fmt_double(res.b_density),
                 res.sumset_verified ? "1" : "0"});
      } else {
        throw Error(Errc::BadInput, "unknown strategy " + strategy);
      }
    } else if (app.got_subcommand(c_psv)) {
      rep.add_meta("command", "poly-sieve");
      PolySieveParams params{parse_poly(poly_texts.at(0)), int(at_l), P_max};
      SieveSpec spec = build_poly_sieve(params);
      std::string text = print_sieve(spec);
      if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << text;
        rep.add_meta("spec-hash", fmt_hex(spec_hash(spec)));
        rep.header({"classes", "written_to"});
        rep.row({std::to_string(spec.entries.size()), out_path});
      } else {
        std::cout << text;
        return 0;
      }
    } else if (app.got_subcommand(c_pd)) {
      rep.add_meta("command", "poly-density");
      std::vector<IntPolynomial> fs;
      for (const auto& t : poly_texts) fs.push_back(parse_poly(t));
      auto b = multi_poly_density(fs, int(at_l), P_max);
      rep.add_meta("Pmax", std::to_string(P_max));
      rep.header({"lower", "upper", "midpoint"});
      rep.row({fmt_double(b.lower), fmt_double(b.upper),
               fmt_double(b.midpoint())});
    } else if (app.got_subcommand(c_pc)) {
      rep.add_meta("command", "poly-count");
      i64 c = count_lfree_values(parse_poly(poly_texts.at(0)), int(at_l), N);
      rep.header({"count", "N", "ratio"});
      rep.row({std::to_string(c), std::to_string(N),
               fmt_double(double(c) / double(N))});
    } else if (app.got_subcommand(c_res)) {
      rep.add_meta("command", "resultant");
      if (poly_texts.size() != 2)
        throw Error(Errc::BadInput, "resultant needs exactly two --poly");
      i64 r = resultant(parse_poly(poly_texts[0]), parse_poly(poly_texts[1]));
      rep.header({"resultant"});
      rep.row({std::to_string(r)});
    } else if (app.got_subcommand(c_om)) {
      rep.add_meta("command", "omega");
      OmegaTable t = omega_table(N);
      if (!at_text.empty()) {
        rep.header({"m", "omega"});
        for (i64 m : parse_int_list(at_text))
          rep.row({std::to_string(m), std::to_string(t.at(m))});
      } else {
        i64 mx = 0, sum = 0;
        for (i64 m = 1; m <= N; ++m) {
          mx = std::max<i64>(mx, t.at(m));
          sum += t.at(m);
        }
        rep.header({"N", "max_omega", "mean_omega"});
        rep.row({std::to_string(N), std::to_string(mx),
                 fmt_double(double(sum) / double(N))});
      }
    } else if (app.got_subcommand(c_pnt)) {
      rep.add_meta("command", "pnt-average");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      Sieve sv = materialize(spec, L);
      FiniteRotation rot;
      rot.q = q;
      rot.x0 = x0;
      std::istringstream fin(f_text);
      std::string part;
      while (std::getline(fin, part, ',')) rot.f.push_back(Rat::parse(part));
      auto ea = ergodic_average(sv, N, rot);
      rep.header({"lhs", "rhs", "diff", "free_count"});
      rep.row({fmt_double(ea.lhs), fmt_double(ea.rhs), fmt_double(ea.diff),
               std::to_string(ea.free_count)});
    } else if (app.got_subcommand(c_bes)) {
      rep.add_meta("command", "besicovitch");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      Sieve sv = materialize(spec, L);
      auto be = besicovitch_error(sv, Linner, N);
      rep.header({"mismatch_count", "N", "ratio"});
      rep.row({std::to_string(be.mismatch_count), std::to_string(be.N),
               fmt_double(be.ratio)});
    } else if (app.got_subcommand(c_ver)) {
      rep.add_meta("command", "verify-cert");
      auto spec = load_spec(spec_path);
      meta_spec(*spec);
      Sieve sv = materialize(spec, L);
      json j = json::parse(read_file(cert_path));
      XrCertificate cert = cert_from_json(j, sv.k);
      std::string why;
      bool ok = verify_certificate(cert, sv, &why);
      rep.header({"verdict", "detail"});
      rep.row({ok ? "PASS" : "FAIL", ok ? "-" : why});
      rep.emit(as_json);
      return ok ? 0 : 1;
    }
  } catch (const DomainFailure& f) {
    if (as_json) {
      json out;
      out["error"] = f.reason;
      out["detail"] = f.detail;
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "error\t" << f.reason << "\t" << f.detail << "\n";
    }
    return 1;
  } catch (const Error& e) {
    if (as_json) {
      json out;
      out["error"] = e.token();
      out["detail"] = e.what();
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "error\t" << e.token() << "\t" << e.what() << "\n";
    }
    return 1;
  }

  rep.emit(as_json);
  return 0;
}
