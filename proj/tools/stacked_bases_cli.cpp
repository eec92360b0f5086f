// Command-line surface for the stacked-bases engine: decompose finitely
// presented modules, diagonalize matrices over elementary divisor rings,
// compute with ideals, verify decompositions against the oracles, and run
// the acceptance selftest.
//
// Exit codes: 0 success, 1 domain error (unsupported ring/operation, failed
// verification), 2 parse/usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "stacked/decompose.hpp"
#include "stacked/io.hpp"
#include "stacked/selftest.hpp"
#include "stacked/verify.hpp"

namespace {

using namespace stacked;

struct CommonArgs {
  std::string ring_text;
  std::string matrix_text;
  std::string input_path;
  std::string out_path;
  std::string format = "text";
  std::uint64_t seed = 1;
};

std::uint64_t env_seed() {
  const char* s = std::getenv("STACKED_BASES_SEED");
  if (!s) return 1;
  return std::strtoull(s, nullptr, 10);
}

void add_common(CLI::App* cmd, CommonArgs& a, bool needs_matrix) {
  cmd->add_option("--ring", a.ring_text, "ring descriptor (Z, Z/12, Q[-5], prod(...))")
      ->required();
  if (needs_matrix) {
    cmd->add_option("--matrix", a.matrix_text,
                    "matrix literal, rows ';'-separated, entries ','-separated");
    cmd->add_option("--input", a.input_path, "file containing the matrix literal");
  }
  cmd->add_option("--seed", a.seed, "seed for randomized verification");
  cmd->add_option("--format", a.format, "output format: text | machine")
      ->check(CLI::IsMember({"text", "machine"}));
  cmd->add_option("--out", a.out_path, "also write the report to this file");
}

std::string load_matrix_text(const CommonArgs& a) {
  if (!a.matrix_text.empty()) return a.matrix_text;
  if (a.input_path.empty())
    throw ParseError("either --matrix or --input is required");
  std::ifstream in(a.input_path);
  if (!in) throw ParseError("cannot read input file " + a.input_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Report& rep, const CommonArgs& a) {
  std::string body = a.format == "machine" ? rep.machine() : rep.text();
  std::cout << body;
  if (!a.out_path.empty()) {
    std::ofstream out(a.out_path);
    out << body;
  }
}

void stacked_report(Report& rep, const RingPtr& ring, const StackedBases& sb) {
  rep.kv("stage-count", std::to_string(sb.stages.size()));
  for (std::size_t k = 0; k < sb.stages.size(); ++k) {
    const StackedStage& st = sb.stages[k];
    std::string p = "stage[" + std::to_string(k) + "].";
    rep.kv(p + "ideal", st.ideal.to_string());
    rep.kv(p + "epsilon", ring->element_to_string(st.epsilon));
    for (std::size_t u = 0; u < st.unit_gens.size(); ++u)
      rep.kv(p + "unit[" + std::to_string(u) + "]",
             print_vector(ring, st.unit_gens[u]));
  }
  rep.kv("complement-count", std::to_string(sb.complement.size()));
  for (std::size_t c = 0; c < sb.complement.size(); ++c)
    rep.kv("complement[" + std::to_string(c) + "]",
           print_vector(ring, sb.complement[c]));
}

void decomposition_report(Report& rep, const RingPtr& ring,
                          const Decomposition& d) {
  rep.kv("torsion-chain-length", std::to_string(d.torsion_chain.size()));
  for (std::size_t i = 0; i < d.torsion_chain.size(); ++i)
    rep.kv("torsion-chain[" + std::to_string(i) + "]",
           d.torsion_chain[i].to_string());
  rep.kv("rank-block-count", std::to_string(d.ranks.size()));
  for (std::size_t i = 0; i < d.ranks.size(); ++i) {
    rep.kv("rank-idempotent[" + std::to_string(i) + "]",
           ring->element_to_string(d.rank_idempotents[i]));
    rep.kv("rank[" + std::to_string(i) + "]", std::to_string(d.ranks[i]));
  }
  rep.kv("steinitz", d.steinitz.to_string());
}

int run_decompose(const CommonArgs& a, bool verify_mode) {
  RingPtr ring = Ring::parse(a.ring_text);
  RingMatrix h = parse_matrix(ring, load_matrix_text(a));
  PresentedModule mod(ring, h.rows(), h);
  DecomposeResult r = decompose(mod);
  Report rep(verify_mode ? "verify" : "decompose");
  rep.kv("ring", ring->to_string());
  rep.kv("n", std::to_string(mod.n));
  rep.kv("matrix", print_matrix(h));
  rep.kv("seed", std::to_string(a.seed));
  decomposition_report(rep, ring, r.invariants);
  stacked_report(rep, ring, r.stacked);
  bool ok = true;
  if (verify_mode) {
    VerificationReport vs = verify_stacked(mod.n, h, r.stacked);
    rep.kv("check-stacked", vs.pass ? "pass" : "FAIL " + vs.witness);
    VerificationReport vd = verify_decomposition(mod, r.invariants, a.seed);
    rep.kv("check-decomposition", vd.pass ? "pass" : "FAIL " + vd.witness);
    ok = vs.pass && vd.pass;
    rep.kv("verdict", ok ? "pass" : "fail");
  }
  emit(rep, a);
  return ok ? 0 : 1;
}

int run_stacked(const CommonArgs& a) {
  RingPtr ring = Ring::parse(a.ring_text);
  RingMatrix h = parse_matrix(ring, load_matrix_text(a));
  StackedBases sb = stacked_bases(h.rows(), h);
  Report rep("stacked");
  rep.kv("ring", ring->to_string());
  rep.kv("n", std::to_string(h.rows()));
  rep.kv("matrix", print_matrix(h));
  stacked_report(rep, ring, sb);
  emit(rep, a);
  return 0;
}

int run_diagonalize(const CommonArgs& a) {
  RingPtr ring = Ring::parse(a.ring_text);
  RingMatrix m = parse_matrix(ring, load_matrix_text(a));
  DiagonalForm d = diagonalize(m);
  Report rep("diagonalize");
  rep.kv("ring", ring->to_string());
  rep.kv("matrix", print_matrix(m));
  rep.kv("P", print_matrix(d.p));
  rep.kv("D", print_matrix(d.d));
  rep.kv("Q", print_matrix(d.q));
  emit(rep, a);
  return 0;
}

int run_ideal(const CommonArgs& a, const std::string& op,
              const std::vector<std::string>& args) {
  RingPtr ring = Ring::parse(a.ring_text);
  Report rep("ideal");
  rep.kv("ring", ring->to_string());
  rep.kv("op", op);
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw ParseError("ideal " + op + " expects " + std::to_string(n) +
                       " ideal literal(s)");
  };
  auto arg = [&](std::size_t i) { return parse_ideal(ring, args[i]); };
  if (op == "add" || op == "mul" || op == "intersect") {
    need(2);
    FinGenIdeal i = arg(0), j = arg(1);
    FinGenIdeal r = op == "add"   ? ideal_sum(i, j)
                    : op == "mul" ? ideal_product(i, j)
                                  : ideal_intersect(i, j);
    rep.kv("result", r.to_string());
  } else if (op == "inverse") {
    need(1);
    FractionalIdeal r = ideal_inverse(arg(0));
    rep.kv("result", r.to_string());
  } else if (op == "principal") {
    need(1);
    auto g = is_principal(arg(0));
    rep.kv("result", g ? ring->element_to_string(*g) : "none");
  } else if (op == "faithful") {
    need(1);
    auto w = is_faithful(arg(0));
    rep.kv("result", w ? "true witness=" + ring->element_to_string(*w) : "false");
  } else if (op == "complete") {
    need(1);
    rep.kv("result", faithful_completion(arg(0)).to_string());
  } else if (op == "isomorphic") {
    need(2);
    auto w = is_isomorphic(arg(0), arg(1));
    if (w)
      rep.kv("result", "true witness=" + ring->element_to_string(w->num) + "/" +
                           ring->element_to_string(w->den));
    else
      rep.kv("result", "false");
  } else if (op == "content") {
    need(1);
    rep.kv("result", arg(0).to_string());
  } else {
    throw ParseError("unknown ideal operation '" + op + "'");
  }
  emit(rep, a);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stacked-bases: constructive stacked bases and invariant "
               "factor decompositions over semihereditary rings"};
  app.require_subcommand(1);

  CommonArgs dec_args, diag_args, stk_args, ver_args, idl_args;
  dec_args.seed = diag_args.seed = stk_args.seed = ver_args.seed =
      idl_args.seed = env_seed();

  CLI::App* dec = app.add_subcommand(
      "decompose", "decompose R^n/H into torsion chain and projective part");
  add_common(dec, dec_args, true);

  CLI::App* diag = app.add_subcommand(
      "diagonalize", "P*A*Q = D with a divisibility chain (Bezout instances)");
  add_common(diag, diag_args, true);

  CLI::App* stk = app.add_subcommand(
      "stacked", "stacked bases of the column span of H inside R^n");
  add_common(stk, stk_args, true);

  CLI::App* ver = app.add_subcommand(
      "verify", "decompose and verify against the independent oracles");
  add_common(ver, ver_args, true);

  std::string ideal_op;
  std::vector<std::string> ideal_args;
  CLI::App* idl = app.add_subcommand("ideal", "ideal arithmetic");
  add_common(idl, idl_args, false);
  idl->add_option("op", ideal_op,
                  "add | mul | intersect | inverse | principal | faithful | "
                  "complete | isomorphic | content")
      ->required();
  idl->add_option("ideals", ideal_args, "ideal literals ideal(g1, g2, ...)");

  std::string scope = "fast";
  std::uint64_t st_seed = env_seed();
  CLI::App* st = app.add_subcommand("selftest", "run the acceptance suite");
  st->add_option("--scope", scope, "fast | full")
      ->check(CLI::IsMember({"fast", "full"}));
  st->add_option("--seed", st_seed, "seed for the randomized criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems exit 2, --help exits 0
  }

  try {
    if (dec->parsed()) return run_decompose(dec_args, false);
    if (ver->parsed()) return run_decompose(ver_args, true);
    if (stk->parsed()) return run_stacked(stk_args);
    if (diag->parsed()) return run_diagonalize(diag_args);
    if (idl->parsed()) return run_ideal(idl_args, ideal_op, ideal_args);
    if (st->parsed()) {
      SelftestOptions opts{scope == "full", st_seed};
      bool ok = run_acceptance(opts, std::cout);
      return ok ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
