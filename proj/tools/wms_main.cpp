#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wms/families.hpp"
#include "wms/json_io.hpp"
#include "wms/kernels.hpp"

namespace {

using namespace wms;
using json_io::ordered_json;

constexpr u64 kListCap = u64{1} << 20;  // tuple listing cap for eval output

// Split on top-level commas only; formula arguments contain nested ones.
std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  for (auto& a : out) {
    while (!a.empty() && a.front() == ' ') a.erase(a.begin());
    while (!a.empty() && a.back() == ' ') a.pop_back();
  }
  return out;
}

std::vector<u32> parse_vertices(const std::string& s) {
  std::vector<u32> out;
  if (s.empty()) return out;
  for (const auto& part : split_args(s)) {
    try {
      size_t pos = 0;
      unsigned long v = std::stoul(part, &pos);
      if (pos != part.size()) throw std::invalid_argument(part);
      out.push_back(static_cast<u32>(v));
    } catch (const std::exception&) {
      fail(errc::invalid_argument, "bad vertex number \"" + part + "\"");
    }
  }
  return out;
}

std::pair<u32, u32> parse_range(const std::string& s) {
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      u32 v = static_cast<u32>(std::stoul(s));
      return {v, v};
    }
    return {static_cast<u32>(std::stoul(s.substr(0, dots))),
            static_cast<u32>(std::stoul(s.substr(dots + 2)))};
  } catch (const std::exception&) {
    fail(errc::invalid_argument, "bad range \"" + s + "\" (expected A..B)");
  }
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

struct common_inputs {
  std::string structure_path, ideal_path, obj = "x";
  logic::finite_structure s;
  ideals::ideal_ptr ideal;

  void load(bool need_ideal) {
    s = json_io::load_structure(structure_path);
    if (need_ideal) ideal = json_io::load_ideal(ideal_path, s);
  }
  logic::partitioned_formula make(const std::string& text) const {
    return logic::partition(logic::parse_formula(text, s.sig), split_args(obj), text);
  }
};

int run(int argc, char** argv) {
  CLI::App app{"wide-modulo-structure toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --threads appear after the subcommand too
  int threads = 0;
  app.add_option("--threads", threads, "worker threads for bit-kernels (0 = library default)");

  common_inputs in;
  auto add_common = [&](CLI::App* cmd, bool need_ideal) {
    cmd->add_option("--structure", in.structure_path, "structure JSON file")->required();
    auto* opt = cmd->add_option("--ideal", in.ideal_path, "ideal config JSON file");
    if (need_ideal) opt->required();
    cmd->add_option("--obj", in.obj, "object variables (default: x)");
  };

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a formula to its extension");
  std::string formula_text, context_text, out_mode = "json";
  add_common(eval, false);
  eval->add_option("--formula", formula_text, "formula text")->required();
  eval->add_option("--context", context_text, "evaluation variables, comma separated")->required();
  eval->add_option("--out", out_mode, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  // rank
  auto* rank = app.add_subcommand("rank", "local wide rank of psi with phi-splits");
  std::string phi_text, psi_text;
  u32 max_n = 0;
  add_common(rank, true);
  rank->add_option("--phi", phi_text, "splitting formula")->required();
  rank->add_option("--psi", psi_text, "ranked set, a formula over the object variables")
      ->required();
  rank->add_option("--max", max_n, "rank cap")->required();

  // order / wip / wsop
  u32 len = 0;
  bool distinct = false;
  auto add_search = [&](const char* name, const char* desc) {
    auto* c = app.add_subcommand(name, desc);
    add_common(c, true);
    c->add_option("--phi", phi_text, "partitioned formula phi(x;y)")->required();
    c->add_option("--len", len, "pattern length")->required();
    c->add_flag("--distinct", distinct, "forbid repeated parameter tuples");
    return c;
  };
  auto* order = add_search("order", "wide order property witness");
  auto* wip = add_search("wip", "wide independence property witness");
  auto* wsop = add_search("wsop", "wide strict order property witness");

  // types
  auto* types = app.add_subcommand("types", "count wide Delta-types over a parameter set");
  std::string delta_text, params_text;
  add_common(types, true);
  types->add_option("--delta", delta_text, "formula list, comma separated")->required();
  types->add_option("--params", params_text, "all | vertex list")->required();

  // divide
  auto* divide = app.add_subcommand("divide", "search a k-dividing witness for psi(x,c)");
  std::string c_text, base_text;
  u32 k = 0;
  add_common(divide, true);
  divide->add_option("--psi", psi_text, "dividing formula psi(x;y)")->required();
  divide->add_option("--c", c_text, "parameter tuple, comma separated")->required();
  divide->add_option("--base", base_text, "base vertices, comma separated");
  divide->add_option("--k", k, "thin-intersection width")->required();
  divide->add_option("--len", len, "witness length")->required();
  divide->add_flag("--distinct", distinct, "forbid repeated sequence entries");

  // family
  auto* family = app.add_subcommand("family", "finite family generators and experiments");
  family->require_subcommand(1);
  auto* ladder = family->add_subcommand("ladder", "clique-plus-ladder ratio experiment");
  std::string n_range = "4..24", mode_text = "implicit", report_path;
  u32 big_n = 4;
  ladder->add_option("--n", n_range, "size range A..B");
  ladder->add_option("--N", big_n, "pattern length N (>= 4)");
  ladder->add_option("--mode", mode_text, "implicit|explicit|cross_check")
      ->check(CLI::IsMember({"implicit", "explicit", "cross_check"}));
  ladder->add_option("--report", report_path, "write the CSV report to this file");

  auto* gen = family->add_subcommand("gen", "emit a generated structure as JSON");
  std::string id_text, p_text = "1/2", out_path;
  u32 gen_n = 0;
  u64 seed = 1;
  gen->add_option("--id", id_text, "ladder_clique|half_graph|matching|random_graph|chain_union")
      ->required()
      ->check(CLI::IsMember(
          {"ladder_clique", "half_graph", "matching", "random_graph", "chain_union"}));
  gen->add_option("--n", gen_n, "size parameter")->required();
  gen->add_option("--p", p_text, "edge probability p/q (random_graph)");
  gen->add_option("--seed", seed, "generator seed (random_graph)");
  gen->add_option("--out", out_path, "write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }
  if (threads > 0) kernels::set_thread_count(threads);

  if (eval->parsed()) {
    in.load(false);
    auto f = logic::parse_formula(formula_text, in.s.sig);
    auto ctx = split_args(context_text);
    auto d = logic::evaluate(in.s, *f, ctx);
    const u64 count = d.bits.count();
    std::vector<std::vector<u32>> tuples;
    u64 listed = 0;
    for (u64 idx = d.bits.find_first(); idx != bitvec::npos && listed < kListCap;
         idx = d.bits.find_next(idx), ++listed)
      tuples.push_back(d.tuple_at(idx));
    if (out_mode == "csv") {
      for (const auto& t : tuples) {
        for (size_t i = 0; i < t.size(); ++i) std::cout << (i ? "," : "") << t[i];
        std::cout << "\n";
      }
    } else {
      ordered_json j;
      j["formula"] = formula_text;
      j["context"] = ctx;
      j["count"] = count;
      j["tuples"] = json_io::tuples_to_json(tuples);
      if (count > kListCap) j["truncated"] = true;
      emit(j);
    }
    return 0;
  }

  if (rank->parsed()) {
    in.load(true);
    auto phi = in.make(phi_text);
    auto psi_f = logic::parse_formula(psi_text, in.s.sig);
    auto psi = logic::evaluate(in.s, *psi_f, split_args(in.obj));
    auto r = stability::rank(in.s, *in.ideal, psi, phi, max_n);
    emit(json_io::rank_to_json(r, psi_text, phi_text));
    return 0;
  }

  if (order->parsed() || wip->parsed() || wsop->parsed()) {
    in.load(true);
    auto phi = in.make(phi_text);
    if (order->parsed()) {
      auto w = stability::wide_order_witness(in.s, *in.ideal, phi, len,
                                             stability::row_mode::listed, distinct);
      if (!w.has_value()) return 2;
      emit(json_io::order_to_json(*w, phi_text));
      return 0;
    }
    auto w = wip->parsed()
                 ? stability::wide_independence_witness(in.s, *in.ideal, phi, len, distinct)
                 : stability::wide_strict_order_witness(in.s, *in.ideal, phi, len, distinct);
    if (!w.has_value()) return 2;
    ordered_json j;
    j["b"] = json_io::tuples_to_json(*w);
    j["phi"] = phi_text;
    emit(j);
    return 0;
  }

  if (types->parsed()) {
    in.load(true);
    std::vector<logic::partitioned_formula> delta;
    for (const auto& t : split_args(delta_text)) delta.push_back(in.make(t));
    std::vector<u32> base;
    if (params_text == "all") {
      for (u32 v = 0; v < in.s.m; ++v) base.push_back(v);
    } else {
      base = parse_vertices(params_text);
    }
    auto tc = stability::count_wide_types(in.s, *in.ideal, delta, base);
    ordered_json j;
    j["delta"] = split_args(delta_text);
    j["params"] = base;
    auto counts = json_io::types_to_json(tc);
    j.update(counts);
    emit(j);
    return 0;
  }

  if (divide->parsed()) {
    in.load(true);
    auto psi = in.make(psi_text);
    auto c = parse_vertices(c_text);
    auto base = parse_vertices(base_text);
    auto w = dividing::search_k_dividing(in.s, *in.ideal, psi, c, base, k, len, distinct);
    if (!w.has_value()) return 2;
    emit(json_io::dividing_to_json(*w));
    return 0;
  }

  if (ladder->parsed()) {
    auto [lo, hi] = parse_range(n_range);
    auto mode = mode_text == "implicit"   ? families::ladder_mode::implicit_counts
                : mode_text == "explicit" ? families::ladder_mode::explicit_enum
                                          : families::ladder_mode::cross_check;
    auto rep = families::ladder_experiment(lo, hi, big_n, mode);
    auto csv = families::report_csv(rep);
    if (report_path.empty()) {
      std::cout << csv;
    } else {
      std::ofstream out(report_path);
      if (!out) fail(errc::invalid_argument, "cannot write " + report_path);
      out << csv;
    }
    return 0;
  }

  if (gen->parsed()) {
    families::family_spec spec;
    spec.n = gen_n;
    spec.m = gen_n;  // random_graph sizes by universe, the others by index
    spec.p = parse_rat(p_text);
    spec.seed = seed;
    if (id_text == "ladder_clique") spec.id = families::family_id::ladder_clique;
    if (id_text == "half_graph") spec.id = families::family_id::half_graph;
    if (id_text == "matching") spec.id = families::family_id::matching;
    if (id_text == "random_graph") spec.id = families::family_id::random_graph;
    if (id_text == "chain_union") spec.id = families::family_id::chain_union;
    auto inst = families::generate(spec);
    auto j = json_io::structure_to_json(inst.s);
    if (out_path.empty()) {
      emit(j);
    } else {
      std::ofstream out(out_path);
      if (!out) fail(errc::invalid_argument, "cannot write " + out_path);
      out << j.dump(2) << "\n";
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_budget() ? 4 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
