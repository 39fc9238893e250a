#include "wms/json_io.hpp"

#include <fstream>

namespace wms::json_io {

namespace {

ordered_json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::invalid_argument, "cannot open " + path);
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::syntax_error, path + ": " + e.what());
  }
}

u64 get_u64(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_unsigned())
    fail(errc::invalid_argument, std::string("expected unsigned field \"") + key + "\"");
  return j.at(key).get<u64>();
}

rat get_rat(const ordered_json& j, const char* key) {
  if (!j.contains(key))
    fail(errc::invalid_argument, std::string("missing rational field \"") + key + "\"");
  const auto& v = j.at(key);
  if (v.is_string()) return parse_rat(v.get<std::string>());
  if (v.is_number_integer()) return rat(v.get<i64>());
  fail(errc::invalid_argument, std::string("field \"") + key + "\" must be \"p/q\" or an integer");
}

u32 opt_arity(const ordered_json& j) {
  if (!j.contains("arity")) return 1;
  u64 a = get_u64(j, "arity");
  if (a == 0 || a > 8) fail(errc::invalid_argument, "ideal arity out of range");
  return static_cast<u32>(a);
}

definable_set family_member(const std::string& text, const logic::finite_structure& s) {
  auto f = logic::parse_formula(text, s.sig);
  auto fv = logic::free_vars(*f);
  if (fv.size() != 1)
    fail(errc::invalid_argument, "cover member must have one free variable: " + text);
  return logic::evaluate(s, *f, {fv.front()});
}

}  // namespace

logic::finite_structure structure_from_json(const ordered_json& j) {
  if (!j.is_object()) fail(errc::invalid_argument, "structure file must be a JSON object");
  if (!j.contains("name") || !j.at("name").is_string())
    fail(errc::invalid_argument, "structure needs a string \"name\"");
  const u64 m = get_u64(j, "universe");
  if (m == 0 || m > (u64{1} << 20)) fail(errc::degenerate_universe, "universe size out of range");

  logic::signature sig;
  std::vector<std::vector<std::vector<u32>>> tuples;
  if (j.contains("relations")) {
    if (!j.at("relations").is_object())
      fail(errc::invalid_argument, "\"relations\" must be an object");
    for (const auto& [name, rel] : j.at("relations").items()) {
      u64 arity = get_u64(rel, "arity");
      if (arity == 0 || arity > 8) fail(errc::invalid_argument, name + ": arity out of range");
      bool symmetric = rel.contains("symmetric") && rel.at("symmetric").get<bool>();
      sig.rels.push_back({name, static_cast<u32>(arity), symmetric});
      std::vector<std::vector<u32>> ts;
      if (rel.contains("tuples")) {
        for (const auto& t : rel.at("tuples")) {
          std::vector<u32> tup;
          for (const auto& v : t) {
            if (!v.is_number_unsigned() || v.get<u64>() >= m)
              fail(errc::literal_out_of_range, name + ": tuple entry out of universe");
            tup.push_back(v.get<u32>());
          }
          if (tup.size() != arity) fail(errc::arity_mismatch, name + ": tuple arity mismatch");
          ts.push_back(std::move(tup));
        }
      }
      tuples.push_back(std::move(ts));
    }
  }
  return logic::make_structure(j.at("name").get<std::string>(), static_cast<u32>(m), sig, tuples);
}

logic::finite_structure load_structure(const std::string& path) {
  return structure_from_json(load_file(path));
}

ordered_json structure_to_json(const logic::finite_structure& s) {
  ordered_json j;
  j["name"] = s.name;
  j["universe"] = s.m;
  ordered_json rels = ordered_json::object();
  for (u32 r = 0; r < s.sig.rels.size(); ++r) {
    const auto& decl = s.sig.rels[r];
    ordered_json rj;
    rj["arity"] = decl.arity;
    rj["symmetric"] = decl.symmetric;
    ordered_json ts = ordered_json::array();
    const auto& tab = s.tables[r];
    for (u64 idx = tab.bits.find_first(); idx != bitvec::npos; idx = tab.bits.find_next(idx)) {
      auto t = tab.tuple_at(idx);
      if (decl.symmetric && decl.arity == 2 && t[0] > t[1]) continue;  // closure re-adds it
      ts.push_back(t);
    }
    rj["tuples"] = std::move(ts);
    rels[decl.name] = std::move(rj);
  }
  j["relations"] = std::move(rels);
  return j;
}

ideals::ideal_ptr ideal_from_json(const ordered_json& j, const logic::finite_structure& s) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    fail(errc::invalid_argument, "ideal config needs a string \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "trivial") return ideals::trivial_ideal(opt_arity(j));
  if (kind == "threshold") return ideals::threshold_ideal(get_u64(j, "t"), opt_arity(j));
  if (kind == "fraction") return ideals::fraction_ideal(get_rat(j, "epsilon"), opt_arity(j));
  if (kind == "coarse") return ideals::coarse_ideal(get_rat(j, "alpha"), opt_arity(j));
  if (kind == "cover" || kind == "explicit") {
    if (!j.contains("family") || !j.at("family").is_array() || j.at("family").empty())
      fail(errc::invalid_argument, kind + " ideal needs a nonempty \"family\" array");
    std::vector<definable_set> fam;
    for (const auto& t : j.at("family")) fam.push_back(family_member(t.get<std::string>(), s));
    return kind == "cover" ? ideals::cover_ideal(std::move(fam))
                           : ideals::explicit_ideal(std::move(fam));
  }
  if (kind == "product") {
    if (!j.contains("left") || !j.contains("right"))
      fail(errc::invalid_argument, "product ideal needs \"left\" and \"right\"");
    return ideals::product_ideal(ideal_from_json(j.at("left"), s),
                                 ideal_from_json(j.at("right"), s));
  }
  if (kind == "power") {
    if (!j.contains("base")) fail(errc::invalid_argument, "power ideal needs \"base\"");
    u64 n = get_u64(j, "n");
    if (n == 0 || n > 8) fail(errc::invalid_argument, "power exponent out of range");
    return ideals::power_ideal(ideal_from_json(j.at("base"), s), static_cast<u32>(n));
  }
  fail(errc::invalid_argument, "unknown ideal kind \"" + kind + "\"");
}

ideals::ideal_ptr load_ideal(const std::string& path, const logic::finite_structure& s) {
  return ideal_from_json(load_file(path), s);
}

ordered_json tuples_to_json(const std::vector<std::vector<u32>>& ts) {
  ordered_json a = ordered_json::array();
  for (const auto& t : ts) a.push_back(t);
  return a;
}

ordered_json rank_to_json(const stability::rank_result& r, const std::string& psi,
                          const std::string& phi) {
  ordered_json j;
  switch (r.k) {
    case stability::rank_result::kind::neg_infinity: j["value"] = "-inf"; break;
    case stability::rank_result::kind::finite: j["value"] = r.value; break;
    case stability::rank_result::kind::exceeds_cap:
      j["value"] = ">" + std::to_string(r.cap);
      break;
  }
  j["tree"] = tuples_to_json(r.tree);
  j["psi"] = psi;
  j["phi"] = phi;
  return j;
}

ordered_json order_to_json(const stability::order_witness& w, const std::string& phi) {
  ordered_json j;
  j["a"] = tuples_to_json(w.a);
  j["b"] = tuples_to_json(w.b);
  j["phi"] = phi;
  return j;
}

ordered_json types_to_json(const stability::type_count& tc) {
  ordered_json j;
  j["total"] = tc.total;
  j["wide"] = tc.wide;
  ordered_json ts = ordered_json::array();
  for (const auto& t : tc.types) {
    ordered_json tj;
    tj["pattern"] = t.pattern;
    tj["rep"] = t.rep;
    tj["size"] = t.size;
    tj["wide"] = t.wide;
    ts.push_back(std::move(tj));
  }
  j["types"] = std::move(ts);
  return j;
}

ordered_json dividing_to_json(const dividing::dividing_witness& w) {
  ordered_json j;
  j["k"] = w.k;
  j["sequence"] = tuples_to_json(w.sequence);
  j["base"] = w.base;
  j["psi"] = w.psi;
  return j;
}

ordered_json uniform_to_json(const dividing::uniform_sequence& u,
                             const std::vector<logic::partitioned_formula>& delta) {
  ordered_json j;
  j["k"] = u.k;
  ordered_json es = ordered_json::array();
  for (const auto& e : u.entries) {
    ordered_json ej;
    ej["formula"] = delta[e.formula].text;
    ej["tuple"] = e.tuple;
    es.push_back(std::move(ej));
  }
  j["entries"] = std::move(es);
  j["base"] = u.base;
  return j;
}

}  // namespace wms::json_io
