#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "kht/les.hpp"
#include "kht/survey.hpp"

using namespace kht;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

constexpr int exit_usage = 2;
constexpr int exit_skipped = 3;
constexpr int exit_violation = 4;

struct WordArgs {
  std::string text;
  std::vector<int> torus;  // m n k
  std::vector<int> cable;  // s
};

SmoothedBraidWord build_word(const WordArgs& wa) {
  const int chosen = (!wa.text.empty() ? 1 : 0) + (!wa.torus.empty() ? 1 : 0) +
                     (!wa.cable.empty() ? 1 : 0);
  if (chosen != 1)
    throw std::invalid_argument("give exactly one of --word, --torus, --cabling");
  if (!wa.text.empty()) return parse_word(wa.text);
  if (!wa.torus.empty()) return torus_word(wa.torus[0], wa.torus[1], wa.torus[2]);
  return flat_two_cabling_word(wa.cable[0]);
}

void add_word_options(CLI::App* cmd, WordArgs& wa) {
  cmd->add_option("--word", wa.text, "braid word, e.g. \"2: 1 1 1\"");
  cmd->add_option("--torus", wa.torus, "torus family m n k")->expected(3);
  cmd->add_option("--cabling", wa.cable, "flat 2-cable of T(2,2s+1), give s")->expected(1);
}

bool parse_k_range(const std::string& s, int& lo, int& hi) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoi(s);
    } else {
      lo = std::stoi(s.substr(0, dots));
      hi = std::stoi(s.substr(dots + 2));
    }
  } catch (const std::exception&) {
    return false;
  }
  return lo <= hi;
}

// linear form in k: "9", "25+k", "4-k", "20+2k"
bool parse_linear(const std::string& s, int& base, int& per_k) {
  try {
    const auto kpos = s.find('k');
    if (kpos == std::string::npos) {
      base = std::stoi(s);
      per_k = 0;
      return true;
    }
    if (kpos != s.size() - 1) return false;
    std::string rest = s.substr(0, kpos);
    base = 0;
    per_k = 1;
    if (rest.empty()) return true;
    const auto op = rest.find_last_of("+-");
    std::string coef;
    if (op == std::string::npos || op == 0) {
      coef = rest;
    } else {
      base = std::stoi(rest.substr(0, op));
      coef = rest.substr(op);
    }
    if (coef == "+" || coef.empty())
      per_k = 1;
    else if (coef == "-")
      per_k = -1;
    else
      per_k = std::stoi(coef);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

// "9,25+k:Z4" -> bidegree formula plus expected prime power
bool parse_torsion_spec(const std::string& s, FamilyTorsionSpec& fs) {
  const auto colon = s.find(':');
  const auto comma = s.find(',');
  if (colon == std::string::npos || comma == std::string::npos || comma > colon) return false;
  if (!parse_linear(s.substr(0, comma), fs.i_base, fs.i_per_k)) return false;
  if (!parse_linear(s.substr(comma + 1, colon - comma - 1), fs.j_base, fs.j_per_k)) return false;
  std::string q = s.substr(colon + 1);
  if (!q.empty() && (q[0] == 'Z' || q[0] == 'z')) q = q.substr(1);
  if (!q.empty() && q[0] == '_') q = q.substr(1);
  if (q.empty() || q.find_first_not_of("0123456789") != std::string::npos) return false;
  fs.prime_power = Int(q);
  return fs.prime_power >= 2;
}

void print_report(const LesReport& r, const std::string& title, bool verbose) {
  std::cout << title << ": " << r.summary() << "\n";
  for (const LesCheck& c : r.checks) {
    if (!verbose && c.verdict != Verdict::violation) continue;
    std::cout << "  " << verdict_name(c.verdict) << " at (" << c.g1 << "," << c.g2 << ") "
              << c.what;
    if (!c.detail.empty()) std::cout << " [" << c.detail << "]";
    std::cout << "\n";
  }
}

nlohmann::json report_json(const LesReport& r) {
  nlohmann::json j;
  j["precondition_ok"] = r.precondition_ok;
  if (!r.note.empty()) j["note"] = r.note;
  nlohmann::json checks = nlohmann::json::array();
  for (const LesCheck& c : r.checks) {
    nlohmann::json jc;
    jc["what"] = c.what;
    jc["g1"] = c.g1;
    jc["g2"] = c.g2;
    jc["framed"] = c.framed;
    jc["verdict"] = verdict_name(c.verdict);
    if (!c.detail.empty()) jc["detail"] = c.detail;
    checks.push_back(jc);
  }
  j["checks"] = checks;
  j["ok"] = r.ok();
  return j;
}

int run_compute(const WordArgs& wa, bool want_framed, bool want_classical, bool want_reduced,
                int basepoint, const HomologyOptions& opt, const std::string& store_flag) {
  SmoothedBraidWord word;
  try {
    word = build_word(wa);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  if (!want_framed && !want_classical && !want_reduced) want_classical = true;
  Store store(Store::resolve_path(store_flag));
  std::vector<ResultRecord> recs;
  try {
    if (want_framed || want_classical) {
      Timer t;
      const FramedHomologyTable framed = full_homology(word, opt);
      const long long ms = t.ms();
      if (want_framed) recs.push_back(make_record(word, framed, ms));
      if (want_classical) recs.push_back(make_record(word, to_classical(framed), ms));
    }
    if (want_reduced) {
      Timer t;
      const ClassicalHomologyTable red = reduced_homology(word, basepoint, opt);
      recs.push_back(make_record(word, red, t.ms(), basepoint));
    }
  } catch (const ResourceLimitError& e) {
    std::cerr << "skipped: " << e.what() << "\n";
    return exit_skipped;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  for (const ResultRecord& r : recs) {
    std::cout << render_markdown(r);
    if (store.upsert(r))
      std::cout << "stored " << r.id << " -> " << store.path() << "\n\n";
    else
      std::cout << "already stored (id " << r.id << ")\n\n";
  }
  return 0;
}

int run_family(const std::vector<int>& torus, const std::vector<int>& cable,
               const std::string& krange, bool do_les, const std::string& torsion_spec,
               bool do_conjecture, const HomologyOptions& opt, const std::string& store_flag,
               bool verbose) {
  FamilySpec fam;
  if (!torus.empty() == !cable.empty()) {
    std::cerr << "error: give exactly one of --torus, --cabling\n";
    return exit_usage;
  }
  if (!torus.empty()) {
    fam.m = torus[0];
    fam.n = torus[1];
  } else {
    fam.cabling = true;
    fam.s = cable[0];
  }
  int klo = 0, khi = 0;
  if (!parse_k_range(krange, klo, khi)) {
    std::cerr << "error: bad --k range, expected lo..hi\n";
    return exit_usage;
  }
  if (do_conjecture && (fam.cabling || fam.n != fam.m + 2)) {
    std::cerr << "error: --check-conjecture needs --torus m m+2\n";
    return exit_usage;
  }
  FamilyTorsionSpec fs;
  if (!torsion_spec.empty() && !parse_torsion_spec(torsion_spec, fs)) {
    std::cerr << "error: bad --check-torsion, expected like \"9,25+k:Z4\"\n";
    return exit_usage;
  }

  Store store(Store::resolve_path(store_flag));
  int violations = 0, skips = 0;
  for (int k = klo; k <= khi; ++k) {
    const SmoothedBraidWord word = fam.word_at(k);
    std::cout << "k=" << k << " " << fam.name_at(k) << " = " << render_word(word) << " ("
              << word.crossing_count() << " crossings)\n";
    try {
      Timer t;
      const FramedHomologyTable framed = full_homology(word, opt);
      const long long ms = t.ms();
      const ResultRecord rf = make_record(word, framed, ms);
      const ResultRecord rc = make_record(word, to_classical(framed), ms);
      store.upsert(rf);
      store.upsert(rc);
      std::cout << "  computed in " << ms << " ms, records " << rf.id << " " << rc.id << "\n";
    } catch (const ResourceLimitError& e) {
      std::cout << "  skipped: " << e.what() << "\n";
      ++skips;
      continue;
    }
    if (do_les) {
      const int pos = last_positive_position(word);
      if (pos < 0) {
        std::cout << "  les: no positive crossing, skipped\n";
        ++skips;
      } else {
        try {
          const LesInstanceResult res = verify_les_instance(word, pos, opt);
          print_report(res.framed, "  les framed", verbose);
          if (res.unknot_case) {
            std::cout << "  D_B is a framed unknot, w_B=" << *res.wB << ", u="
                      << res.criticals->u << "\n";
            print_report(*res.unknot_case, "  les unknot-case", verbose);
            violations += res.unknot_case->count(Verdict::violation);
          }
          violations += res.framed.count(Verdict::violation);
        } catch (const ResourceLimitError& e) {
          std::cout << "  les skipped: " << e.what() << "\n";
          ++skips;
        }
      }
    }
  }
  if (!torsion_spec.empty()) {
    fs.family = fam;
    fs.k_lo = klo;
    fs.k_hi = khi;
    std::cout << "torsion check Z_" << fs.prime_power.str() << ":\n";
    for (const TorsionCheckOutcome& oc : check_family_torsion(fs, opt)) {
      std::cout << "  k=" << oc.k << " at (" << oc.i << "," << oc.j << "): ";
      switch (oc.status) {
        case TorsionCheckOutcome::Status::found:
          std::cout << "pass (" << oc.group << ")\n";
          break;
        case TorsionCheckOutcome::Status::absent:
          std::cout << "VIOLATION (" << oc.group << ")\n";
          ++violations;
          break;
        default:
          std::cout << "skipped (" << oc.note << ")\n";
          ++skips;
      }
    }
  }
  if (do_conjecture) {
    for (int k = klo; k <= khi; ++k) {
      const ConjectureReport rep = check_conjecture_vanishing(fam.m, k, opt);
      std::cout << "conjecture m=" << rep.m << " k=" << rep.k << " u=" << rep.u << ": ";
      if (rep.skipped) {
        std::cout << "skipped (" << rep.note << ")\n";
        ++skips;
        continue;
      }
      std::cout << (rep.vanishing_ok ? "vanishing ok" : "vanishing FAILS") << ", top "
                << rep.top_observed;
      if (rep.top_expected)
        std::cout << " (expected " << *rep.top_expected << (rep.top_ok ? ", ok" : ", MISMATCH")
                  << ")";
      if (rep.pattern_checked) {
        std::cout << ", step pattern " << (rep.pattern_ok ? "ok" : "off")
                  << ", observed s-cell " << (rep.observed_s.empty() ? "0" : rep.observed_s);
        for (const std::string& m : rep.pattern_mismatches) std::cout << "\n    " << m;
      }
      std::cout << "\n";
    }
  }
  if (violations > 0) return exit_violation;
  if (skips > 0 && (do_les || !torsion_spec.empty() || do_conjecture)) return exit_skipped;
  return 0;
}

int run_table(const std::string& id, const std::string& format, const std::string& store_flag) {
  Store store(Store::resolve_path(store_flag));
  const ResultRecord* rec = store.find(id);
  if (!rec) {
    std::cerr << "error: unknown or ambiguous id " << id << " in " << store.path() << "\n";
    return exit_usage;
  }
  if (format == "csv")
    std::cout << render_csv(*rec);
  else
    std::cout << render_markdown(*rec);
  return 0;
}

std::optional<ResultRecord> load_side(const std::string& ref, Store& store) {
  if (std::filesystem::exists(ref)) {
    std::ifstream in(ref);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
  }
  const ResultRecord* rec = store.find(ref);
  if (!rec) return std::nullopt;
  return *rec;
}

int run_diff(const std::string& a_ref, const std::string& b_ref, int di, int dj,
             bool expect_equal, const std::string& store_flag) {
  Store store(Store::resolve_path(store_flag));
  const auto a = load_side(a_ref, store);
  const auto b = load_side(b_ref, store);
  if (!a || !b) {
    std::cerr << "error: cannot load " << (!a ? a_ref : b_ref) << " (id or csv path)\n";
    return exit_usage;
  }
  if (a->kind != b->kind) {
    std::cerr << "error: kind mismatch (" << kind_name(a->kind) << " vs " << kind_name(b->kind)
              << ")\n";
    return exit_usage;
  }
  const DiffResult d = diff_records(*a, *b, di, dj);
  if (d.equal()) {
    std::cout << "identical under shift (" << di << "," << dj << ")\n";
    return 0;
  }
  std::cout << d.diffs.size() << " differing bidegrees under shift (" << di << "," << dj
            << "):\n";
  for (const DiffCell& c : d.diffs)
    std::cout << "  at (" << c.g1 << "," << c.g2 << "): " << (c.lhs.empty() ? "0" : c.lhs)
              << " vs " << (c.rhs.empty() ? "0" : c.rhs) << "\n";
  return expect_equal ? exit_violation : 0;
}

int run_verify_les(const WordArgs& wa, int pos1, bool last, const HomologyOptions& opt,
                   bool as_json, bool verbose) {
  SmoothedBraidWord word;
  try {
    word = build_word(wa);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  int pos = pos1 - 1;
  if (last || pos1 == 0) pos = last_positive_position(word);
  if (pos < 0 || pos >= (int)word.letters.size() || word.letters[pos].sign != 1) {
    std::cerr << "error: need a positive crossing position (--pos, 1-based, or --last)\n";
    return exit_usage;
  }
  try {
    const LesInstanceResult res = verify_les_instance(word, pos, opt);
    if (as_json) {
      nlohmann::json j;
      j["word"] = render_word(word);
      j["position"] = pos + 1;
      j["writhe"] = res.w;
      j["framed"] = report_json(res.framed);
      if (res.unknot_case) {
        j["w_B"] = *res.wB;
        j["u"] = res.criticals->u;
        j["unknot_case"] = report_json(*res.unknot_case);
      }
      j["ok"] = res.ok();
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "word " << render_word(word) << ", smoothing letter " << pos + 1
                << ", w=" << res.w << "\n";
      print_report(res.framed, "framed sequence", verbose);
      if (res.unknot_case) {
        std::cout << "D_B is a framed unknot, w_B=" << *res.wB << ", u=" << res.criticals->u
                  << ", critical pairs";
        for (const auto& [i, j] : res.criticals->pairs) std::cout << " (" << i << "," << j << ")";
        std::cout << "\n";
        print_report(*res.unknot_case, "unknot case", verbose);
      } else {
        std::cout << "D_B is not a framed unknot, classical checks not applicable\n";
      }
    }
    return res.ok() ? 0 : exit_violation;
  } catch (const ResourceLimitError& e) {
    std::cerr << "skipped: " << e.what() << "\n";
    return exit_skipped;
  }
}

int run_selftest() {
  int failures = 0;
  const auto check = [&](bool ok, const std::string& name) {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
    if (!ok) ++failures;
  };

  const SmoothedBraidWord trefoil = parse_word("2: 1 1 1");
  const ClassicalHomologyTable t = to_classical(full_homology(trefoil));
  ClassicalHomologyTable expect;
  expect.groups[{0, 1}] = parse_group("Z");
  expect.groups[{0, 3}] = parse_group("Z");
  expect.groups[{2, 5}] = parse_group("Z");
  expect.groups[{3, 9}] = parse_group("Z");
  expect.groups[{3, 7}] = parse_group("Z_2");
  check(t == expect, "trefoil classical table");

  const ClassicalHomologyTable red = reduced_homology(parse_word("1:"), 1);
  check(red.groups.size() == 1 && red.at(0, 0) == parse_group("Z"), "unknot reduced table");

  const SmoothedBraidWord w5 = parse_word("3: 1 -2 1 2 2");
  check(euler_polynomial(full_homology(w5)) == kauffman_bracket(w5),
        "euler polynomial equals bracket");

  SparseIntMatrix m(2, 2);
  m.add(0, 0, 2);
  m.add(0, 1, 4);
  m.add(1, 0, 6);
  m.add(1, 1, 8);
  const SNFResult snf = smith_normal_form(m);
  check(snf.factors == std::vector<Int>{2, 4}, "smith normal form 2x2");

  const LesInstanceResult les = verify_les_instance(trefoil, 2);
  check(les.ok() && les.unknot_case.has_value(), "trefoil smoothing sequence");

  return failures == 0 ? 0 : exit_violation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Khovanov homology of braid closures"};
  app.require_subcommand(1);

  std::string store_flag;
  app.add_option("--store", store_flag, "JSONL result store (default KHT_STORE or ./kht_store.jsonl)");

  HomologyOptions opt;
  bool no_reduce = false;
  app.add_option("--max-generators", opt.max_generators, "resource guard on enhanced states");
  app.add_flag("--no-reduce", no_reduce, "skip unit-pivot reduction (slow, for cross-checks)");
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "print every check, not only violations");

  CLI::App* c_compute = app.add_subcommand("compute", "compute one homology table");
  WordArgs wa_compute;
  add_word_options(c_compute, wa_compute);
  bool f_framed = false, f_classical = false, f_reduced = false;
  int basepoint = 1;
  c_compute->add_flag("--framed", f_framed, "framed (a,b) table");
  c_compute->add_flag("--classical", f_classical, "classical (i,j) table (default)");
  c_compute->add_flag("--reduced", f_reduced, "reduced table, see --basepoint");
  c_compute->add_option("--basepoint", basepoint, "strand carrying the basepoint (1-based)");

  CLI::App* c_family = app.add_subcommand("family", "run a twist family with checks");
  std::vector<int> fam_torus, fam_cable;
  c_family->add_option("--torus", fam_torus, "torus family m n")->expected(2);
  c_family->add_option("--cabling", fam_cable, "2-cable family of T(2,2s+1), give s")->expected(1);
  std::string krange = "0..0", torsion_spec;
  c_family->add_option("--k", krange, "twist range lo..hi");
  bool fam_les = false, fam_conj = false;
  c_family->add_flag("--verify-les", fam_les, "verify the smoothing sequence per k");
  c_family->add_option("--check-torsion", torsion_spec, "expected torsion, e.g. \"9,25+k:Z4\"");
  c_family->add_flag("--check-conjecture", fam_conj, "vanishing and step-pattern observations");

  CLI::App* c_table = app.add_subcommand("table", "render one stored record");
  std::string table_id, table_format = "md";
  c_table->add_option("--id", table_id, "record id or unique prefix")->required();
  c_table->add_option("--format", table_format, "md or csv")
      ->check(CLI::IsMember({"md", "csv"}));

  CLI::App* c_diff = app.add_subcommand("diff", "compare two records under a grading shift");
  std::string diff_a, diff_b;
  int di = 0, dj = 0;
  bool expect_equal = false;
  c_diff->add_option("--a", diff_a, "left record: id prefix or csv path")->required();
  c_diff->add_option("--b", diff_b, "right record: id prefix or csv path")->required();
  c_diff->add_option("--di", di, "compare left (i,j) against right (i+di, j+dj)");
  c_diff->add_option("--dj", dj, "see --di");
  c_diff->add_flag("--expect-equal", expect_equal, "exit 4 when differences remain");

  CLI::App* c_les = app.add_subcommand("verify-les", "verify one smoothing sequence instance");
  WordArgs wa_les;
  add_word_options(c_les, wa_les);
  int pos1 = 0;
  bool use_last = false, les_json = false;
  c_les->add_option("--pos", pos1, "1-based letter position of a positive crossing");
  c_les->add_flag("--last", use_last, "use the last positive crossing (default)");
  c_les->add_flag("--json", les_json, "machine-readable report");

  CLI::App* c_selftest = app.add_subcommand("selftest", "quick built-in sanity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }
  opt.unit_reduce = !no_reduce;

  try {
    if (app.got_subcommand(c_compute))
      return run_compute(wa_compute, f_framed, f_classical, f_reduced, basepoint, opt,
                         store_flag);
    if (app.got_subcommand(c_family))
      return run_family(fam_torus, fam_cable, krange, fam_les, torsion_spec, fam_conj, opt,
                        store_flag, verbose);
    if (app.got_subcommand(c_table)) return run_table(table_id, table_format, store_flag);
    if (app.got_subcommand(c_diff))
      return run_diff(diff_a, diff_b, di, dj, expect_equal, store_flag);
    if (app.got_subcommand(c_les))
      return run_verify_les(wa_les, pos1, use_last, opt, les_json, verbose);
    if (app.got_subcommand(c_selftest)) return run_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
