#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "q4/config.hpp"
#include "q4/curves.hpp"
#include "q4/moduli.hpp"
#include "q4/nucleus.hpp"
#include "q4/portraits.hpp"
#include "q4/tables.hpp"
#include "q4/twist.hpp"

using namespace q4;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

struct Session {
  std::string data_dir;
  std::string config_path;
  bool as_json = false;

  Config config;
  std::optional<Fixtures> fixtures;

  bool init(std::string* error) {
    if (!config_path.empty()) {
      std::string err;
      auto loaded = Config::load(config_path, &err);
      if (!loaded) {
        *error = err;
        return false;
      }
      config = *loaded;
    }
    try {
      fixtures = load_fixtures(data_dir.empty() ? default_data_dir() : data_dir);
    } catch (const std::runtime_error& e) {
      *error = e.what();
      return false;
    }
    return true;
  }

  const TableRow* row(const std::string& id, int* exit_code) {
    const TableRow* r = fixtures->find(id);
    if (!r) {
      std::cerr << "unknown row: " << id << "\n";
      std::cerr << "known rows:";
      for (const auto& known : fixtures->row_ids()) std::cerr << " " << known;
      std::cerr << "\n";
      *exit_code = kExitUsage;
    }
    return r;
  }
};

std::optional<NucleusResult> run_nucleus(const Session& s, const TableRow& row,
                                         std::string* error) {
  return compute_nucleus(row.recursion, NucleusOptions::from(s.config), error,
                         row.seed);
}

int cmd_nucleus(Session& s, const std::string& row_id, bool verify) {
  int code = kExitOk;
  const TableRow* row = s.row(row_id, &code);
  if (!row) return code;
  std::string err;
  auto res = run_nucleus(s, *row, &err);
  if (!res) {
    std::cerr << "nucleus computation failed: " << err << "\n";
    return kExitMismatch;
  }
  bool match = res->nucleus.same_set(row->nucleus);
  if (s.as_json) {
    json j{{"row", row->id},
           {"recursion", row->recursion.str()},
           {"nucleus", res->nucleus.str()},
           {"contraction_k", res->report.k},
           {"contracts", res->report.contracts},
           {"seed", row->seed}};
    if (verify) j["matches_fixture"] = match;
    if (!row->nucleus_note.empty()) j["fixture_note"] = row->nucleus_note;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "row " << row->id << " (" << row->gmap << " at "
              << row->fixed_label << ")\n";
    std::cout << "recursion: " << row->recursion.str() << "\n";
    std::cout << "nucleus: " << res->nucleus.str() << "\n";
    std::cout << "contraction: " << res->report.str();
    for (const std::string& note : res->notes)
      std::cout << "note: " << note << "\n";
    if (verify) {
      std::cout << "fixture match: " << (match ? "yes" : "NO") << "\n";
      if (!row->nucleus_note.empty())
        std::cout << "fixture note: " << row->nucleus_note << "\n";
    }
  }
  return verify && !match ? kExitMismatch : kExitOk;
}

int cmd_twist(Session& s, const std::string& row_id, const std::string& word_text,
              const std::string& prefix_text, int coordinate,
              bool verify_attractors) {
  int code = kExitOk;
  const TableRow* row = s.row(row_id, &code);
  if (!row) return code;

  VirtualEndomorphism ve{row->recursion, coordinate};
  std::string err;
  auto nres = run_nucleus(s, *row, &err);
  if (!nres) {
    std::cerr << "nucleus computation failed: " << err << "\n";
    return kExitMismatch;
  }
  AttractorOptions aopts{s.config.family_window, s.config.verify_exponent,
                         s.config.orbit_cap_scale, s.config.orbit_cap_base};
  auto att = compute_attractor(ve, nres->nucleus, aopts, &err);
  if (!att) {
    std::cerr << "attractor computation failed: " << err << "\n";
    return kExitMismatch;
  }

  if (verify_attractors) {
    if (!row->attractor) {
      std::cout << "row " << row->id << ": no attractor fixture\n";
      return kExitOk;
    }
    bool match = att->matches(*row->attractor);
    std::cout << "attractor: " << att->str() << "\n";
    std::cout << "fixture match: " << (match ? "yes" : "NO") << "\n";
    if (!row->attractor_note.empty())
      std::cout << "fixture note: " << row->attractor_note << "\n";
    return match ? kExitOk : kExitMismatch;
  }

  auto w = Word::parse(word_text);
  if (!w) {
    std::cerr << "malformed word: " << word_text << "\n";
    return kExitUsage;
  }
  Word prefix;
  if (!prefix_text.empty()) {
    auto p = Word::parse(prefix_text);
    if (!p) {
      std::cerr << "malformed prefix word: " << prefix_text << "\n";
      return kExitUsage;
    }
    prefix = *p;
  }
  auto label = twist_solve(ve, *att, *w, prefix, aopts);
  if (!label) {
    std::cerr << "twist orbit exceeded the iteration cap\n";
    return kExitMismatch;
  }
  if (s.as_json) {
    json trace = json::array();
    for (const Word& t : label->trace) trace.push_back(t.str());
    json j{{"row", row->id}, {"word", w->str()}, {"label", label->str()},
           {"trace", trace}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "row " << row->id << ", twist " << w->str() << "\n";
    std::cout << "label: " << label->str() << "\n";
    std::cout << "orbit:";
    for (const Word& t : label->trace) std::cout << " " << t.str();
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_fga(Session& s, const std::string& row_id, int coordinate, bool verify) {
  int code = kExitOk;
  const TableRow* row = s.row(row_id, &code);
  if (!row) return code;
  VirtualEndomorphism ve{row->recursion, coordinate};
  std::string err;
  auto nres = run_nucleus(s, *row, &err);
  if (!nres) {
    std::cerr << "nucleus computation failed: " << err << "\n";
    return kExitMismatch;
  }
  FgaOptions fopts{s.config.fga_curve_bound, s.config.fga_iter_bound,
                   s.config.family_window, 256};
  auto fga = compute_fga(ve, nres->nucleus, fopts, &err);
  if (!fga) {
    std::cerr << "pullback computation failed: " << err << "\n";
    return kExitMismatch;
  }
  std::cout << "row " << row->id << " (coordinate " << coordinate << ")\n";
  std::cout << "fga: " << fga->str() << "\n";
  if (!verify || coordinate != 1) return kExitOk;

  bool match;
  if (row->fga_finite) {
    match = fga->matches_cycles(row->fga_cycles);
  } else {
    match = !fga->finite;
    if (match) {
      // every sampled curve fits one of the fixture patterns
      for (const std::string& sample : fga->sampled_patterns) {
        bool ok = false;
        for (const std::string& pat : row->fga_patterns) {
          if (pat == sample) ok = true;
          auto at = pat.find('@');
          if (!ok && at != std::string::npos &&
              pat.find('^') != std::string::npos) {
            auto pfam = Family::parse(pat.substr(at + 1));
            if (pfam && sample.rfind(pat.substr(0, at + 1), 0) == 0) {
              auto w = Word::parse(sample.substr(at + 1));
              if (w && pfam->family.match(*w)) ok = true;
            }
          }
        }
        if (!ok) match = false;
      }
    }
  }
  std::cout << "fixture match: " << (match ? "yes" : "NO") << "\n";
  if (!row->fga_note.empty())
    std::cout << "fixture note: " << row->fga_note << "\n";
  return match ? kExitOk : kExitMismatch;
}

int cmd_obstruction(Session& s, const std::string& row_id) {
  int code = kExitOk;
  const TableRow* row = s.row(row_id, &code);
  if (!row) return code;
  VirtualEndomorphism ve{row->recursion, 1};
  std::string err;
  auto nres = run_nucleus(s, *row, &err);
  if (!nres) {
    std::cerr << "nucleus computation failed: " << err << "\n";
    return kExitMismatch;
  }
  FgaOptions fopts{s.config.fga_curve_bound, s.config.fga_iter_bound,
                   s.config.family_window, 256};
  auto seeds = fga_seed_curves(ve, nres->nucleus, fopts);
  auto cert = check_obstruction(ve, seeds);
  std::cout << "row " << row->id << "\n";
  if (cert) {
    std::cout << "obstructing curve: " << cert->curve.str() << " (multiplier "
              << cert->multiplier_num << "/" << cert->multiplier_den << ")\n";
  } else {
    std::cout << "obstructing curve: none found\n";
  }
  return kExitOk;
}

int cmd_portraits(Session& s, bool list, bool verify_actions) {
  (void)s;
  EnumerationResult rows = enumerate_q4();
  if (list || !verify_actions) {
    std::cout << "one critical postcritical point (" << rows.one_critical.size()
              << " classes):\n";
    for (std::size_t i = 0; i < rows.one_critical.size(); ++i)
      std::cout << "  " << i + 1 << ": " << rows.one_critical[i].str() << "\n";
    std::cout << "two critical postcritical points (" << rows.two_critical.size()
              << " classes):\n";
    for (std::size_t i = 0; i < rows.two_critical.size(); ++i)
      std::cout << "  " << i + 1 << ": " << rows.two_critical[i].str() << "\n";
    std::cout << "total: " << rows.total() << "\n";
  }
  if (verify_actions) {
    std::string detail;
    bool ok = postcompose_action_check(&detail);
    std::cout << "postcomposition actions: " << (ok ? "verified" : detail) << "\n";
    return ok ? kExitOk : kExitMismatch;
  }
  return rows.total() == 13 ? kExitOk : kExitMismatch;
}

int cmd_derive(Session& s, const std::string& gmap, const std::string& fp_text,
               bool verify) {
  std::optional<Cplx> fp;
  if (!fp_text.empty() && fp_text != "formal") {
    auto comma = fp_text.find(',');
    if (comma == std::string::npos) {
      std::cerr << "fixed point must be re,im\n";
      return kExitUsage;
    }
    fp = Cplx(std::strtod(fp_text.substr(0, comma).c_str(), nullptr),
              std::strtod(fp_text.substr(comma + 1).c_str(), nullptr));
  }
  std::string err;
  auto res = derive_recursion(gmap, fp, DeriveOptions::from(s.config), &err);
  if (!res) {
    std::cerr << "derivation failed: " << err << "\n";
    return kExitMismatch;
  }
  std::cout << "gmap " << gmap << " at " << res->basepoint << "\n";
  std::cout << "recursion: " << res->recursion.str() << "\n";
  std::cout << "max lift residual: " << res->max_residual << "\n";
  std::cout << "calibration: " << res->calibration << "\n";
  if (!verify) return kExitOk;
  // match against the fixture row with the same map and basepoint
  for (const TableRow& row : s.fixtures->rows) {
    if (row.gmap != gmap) continue;
    bool here = (!row.fixed_point && !fp) ||
                (row.fixed_point && fp &&
                 std::abs(*row.fixed_point - res->basepoint) < 1e-6);
    if (!here) continue;
    bool match = row.recursion == res->recursion;
    std::cout << "fixture match (" << row.id << "): " << (match ? "yes" : "NO")
              << "\n";
    return match ? kExitOk : kExitMismatch;
  }
  std::cerr << "no fixture row for this map and fixed point\n";
  return kExitMismatch;
}

int cmd_verify_tables(Session& s) {
  int failures = 0;
  std::string err;

  std::cout << "== recursions (numerical derivation) ==\n";
  for (const TableRow& row : s.fixtures->rows) {
    auto res = derive_recursion(row.gmap, row.fixed_point,
                                DeriveOptions::from(s.config), &err);
    bool ok = res && res->recursion == row.recursion &&
              res->max_residual < s.config.residual_tol;
    std::cout << "  " << row.id << ": " << (ok ? "ok" : "MISMATCH") << "\n";
    if (!ok) ++failures;
  }

  std::cout << "== nuclei ==\n";
  for (const TableRow& row : s.fixtures->rows) {
    auto res = run_nucleus(s, row, &err);
    bool ok = res && res->nucleus.same_set(row.nucleus) && res->report.contracts;
    std::cout << "  " << row.id << ": " << (ok ? "ok" : "MISMATCH");
    if (!row.nucleus_note.empty()) std::cout << " [" << row.nucleus_note << "]";
    std::cout << "\n";
    if (!ok) ++failures;
  }

  std::cout << "== twist attractors ==\n";
  for (const TableRow& row : s.fixtures->rows) {
    if (!row.attractor) continue;
    auto nres = run_nucleus(s, row, &err);
    AttractorOptions aopts{s.config.family_window, s.config.verify_exponent,
                           s.config.orbit_cap_scale, s.config.orbit_cap_base};
    auto att = nres ? compute_attractor(VirtualEndomorphism{row.recursion, 1},
                                        nres->nucleus, aopts, &err)
                    : std::nullopt;
    bool ok = att && att->matches(*row.attractor);
    std::cout << "  " << row.id << ": " << (ok ? "ok" : "MISMATCH");
    if (!row.attractor_note.empty())
      std::cout << " [" << row.attractor_note << "]";
    std::cout << "\n";
    if (!ok) ++failures;
  }

  std::cout << "== pullback attractors ==\n";
  for (const TableRow& row : s.fixtures->rows) {
    int rc = cmd_fga(s, row.id, 1, true);
    if (rc != kExitOk) ++failures;
  }

  std::cout << "== fixed points ==\n";
  for (const GMapFixedPoints& rec : s.fixtures->fixed_points) {
    FixedPoints fps = fixed_points(find_gmap(rec.gmap)->map);
    bool ok = fps.at_infinity == rec.at_infinity;
    for (Cplx want : rec.finite) {
      bool hit = false;
      for (Cplx got : fps.finite) {
        if (std::abs(got - want) < s.config.fixed_point_tol) hit = true;
      }
      ok = ok && hit;
    }
    for (Cplx got : fps.finite) {
      ok = ok && std::abs(find_gmap(rec.gmap)->map.eval(got) - got) < 1e-9;
    }
    std::cout << "  " << rec.gmap << ": " << (ok ? "ok" : "MISMATCH") << "\n";
    if (!ok) ++failures;
  }

  std::cout << "== portraits ==\n";
  {
    EnumerationResult rows = enumerate_q4();
    std::string detail;
    bool ok = rows.one_critical.size() == 9 && rows.two_critical.size() == 4 &&
              postcompose_action_check(&detail);
    std::cout << "  13 classes and both actions: " << (ok ? "ok" : "MISMATCH")
              << "\n";
    if (!ok) ++failures;
  }

  std::cout << "== obstructed twist families ==\n";
  for (const ObstructedRecord& rec : s.fixtures->obstructed) {
    const TableRow* row = s.fixtures->find(rec.attractor_row);
    bool ok = row && row->attractor.has_value();
    if (ok) {
      bool found = false;
      for (const Family& f : row->attractor->fixed_families) {
        if (f.same_set(rec.twists)) found = true;
      }
      ok = found;
    }
    std::cout << "  " << rec.gmap << " slot " << rec.slot << ": "
              << (ok ? "ok" : "MISMATCH") << "\n";
    if (!ok) ++failures;
  }

  std::cout << (failures == 0 ? "all tables verified\n"
                              : std::to_string(failures) + " mismatches\n");
  return failures == 0 ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toolkit for quadratic twisting, nuclei and curve pullback"};
  app.require_subcommand(1);

  Session session;
  app.add_option("--data-dir", session.data_dir, "fixture directory");
  app.add_option("--config", session.config_path, "key = value config file");
  app.add_flag("--json", session.as_json, "machine-readable output");

  std::string row_id, word_text, prefix_text, gmap, fp_text;
  int coordinate = 1;
  bool verify = false, list = false, verify_actions = false, all = false;

  auto* nucleus = app.add_subcommand("nucleus", "compute a nucleus");
  nucleus->add_option("--row", row_id, "table row id")->required();
  nucleus->add_flag("--verify", verify, "diff against the fixture");

  auto* twist = app.add_subcommand("twist", "solve a twisting problem");
  twist->add_option("--row", row_id, "table row id")->required();
  twist->add_option("--word", word_text, "twist word");
  twist->add_option("--prefix", prefix_text, "pre-twist for other maps in the class");
  twist->add_option("--coordinate", coordinate, "virtual endomorphism coordinate")
      ->check(CLI::IsMember({1, 2}));
  twist->add_flag("--verify-attractors", verify_actions, "diff the attractor");

  auto* fga = app.add_subcommand("fga", "pullback attractor on curves");
  fga->add_option("--row", row_id, "table row id")->required();
  fga->add_option("--coordinate", coordinate, "virtual endomorphism coordinate")
      ->check(CLI::IsMember({1, 2}));
  fga->add_flag("--verify", verify, "diff against the fixture");

  auto* obstruction = app.add_subcommand("obstruction", "obstructing-curve search");
  obstruction->add_option("--row", row_id, "table row id")->required();

  auto* portraits = app.add_subcommand("portraits", "ramification portraits");
  portraits->add_flag("--list", list, "list the thirteen classes");
  portraits->add_flag("--verify-actions", verify_actions,
                      "check both postcomposition actions");

  auto* derive = app.add_subcommand("derive", "derive a recursion numerically");
  derive->add_option("--gmap", gmap, "map label, e.g. (1-2z)^2")->required();
  derive->add_option("--fixed-point", fp_text, "re,im or 'formal'");
  derive->add_flag("--verify", verify, "diff against the fixture");

  auto* verify_tables = app.add_subcommand("verify-tables", "verify everything");
  verify_tables->add_flag("--all", all, "run every table check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  std::string err;
  if (!session.init(&err)) {
    std::cerr << err << "\n";
    return kExitUsage;
  }

  if (nucleus->parsed()) return cmd_nucleus(session, row_id, verify);
  if (twist->parsed()) {
    if (verify_actions)
      return cmd_twist(session, row_id, "", "", coordinate, true);
    if (word_text.empty()) {
      std::cerr << "twist needs --word or --verify-attractors\n";
      return kExitUsage;
    }
    return cmd_twist(session, row_id, word_text, prefix_text, coordinate, false);
  }
  if (fga->parsed()) return cmd_fga(session, row_id, coordinate, verify);
  if (obstruction->parsed()) return cmd_obstruction(session, row_id);
  if (portraits->parsed()) return cmd_portraits(session, list, verify_actions);
  if (derive->parsed()) return cmd_derive(session, gmap, fp_text, verify);
  if (verify_tables->parsed()) return cmd_verify_tables(session);
  return kExitUsage;
}
