#include "bupp/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bupp/error.hpp"

namespace bupp {

using nlohmann::json;

namespace {

json integer(const mpz_class& z) {
  if (z.fits_slong_p()) return json(static_cast<std::int64_t>(z.get_si()));
  return json(z.get_str());
}

mpz_class read_integer(const json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<std::uint64_t>()));
  if (j.is_string()) {
    try {
      return mpz_class(j.get<std::string>(), 10);
    } catch (const std::invalid_argument&) {
    }
  }
  throw InvalidInput("expected an integer, got " + j.dump());
}

json dist_json(const ProductDist& d) {
  json items = json::array();
  for (const auto& item : d.items()) {
    json support = json::array(), masses = json::array();
    for (auto v : item.support()) support.push_back(v);
    for (const auto& m : item.masses())
      masses.push_back(json::array({integer(m.get_num()), integer(m.get_den())}));
    items.push_back({{"support", support}, {"masses", masses}});
  }
  return {{"format", 1}, {"lattice", d.lattice()}, {"items", items}};
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

ProductDist dist_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("instance must be a JSON object");
  if (!j.contains("format") || j["format"] != 1) throw InvalidInput("unsupported instance format");
  if (!j.contains("lattice") || !j["lattice"].is_number_integer())
    throw InvalidInput("instance needs an integer lattice");
  if (!j.contains("items") || !j["items"].is_array()) throw InvalidInput("instance needs items");
  const auto lattice = j["lattice"].get<std::int64_t>();
  std::vector<DiscreteDist> items;
  for (const auto& item : j["items"]) {
    if (!item.contains("support") || !item.contains("masses"))
      throw InvalidInput("item needs support and masses");
    std::vector<std::int64_t> support;
    for (const auto& v : item["support"]) {
      if (!v.is_number_integer()) throw InvalidInput("support values must be integers");
      support.push_back(v.get<std::int64_t>());
    }
    std::vector<Rational> masses;
    for (const auto& m : item["masses"]) {
      if (!m.is_array() || m.size() != 2) throw InvalidInput("masses must be [num, den] pairs");
      mpz_class den = read_integer(m[1]);
      if (den <= 0) throw InvalidInput("mass denominator must be positive");
      Rational r(read_integer(m[0]), den);
      r.canonicalize();
      masses.push_back(r);
    }
    items.emplace_back(lattice, std::move(support), std::move(masses));
  }
  return ProductDist(std::move(items));
}

Rational rational_field(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string("hidden block lacks ") + key);
  const auto& v = j[key];
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw InvalidInput(std::string("bad rational field ") + key);
}

}  // namespace

std::string to_json(const ProductDist& d) { return dist_json(d).dump(); }

std::string to_json(const SampleHardInstance& inst) {
  json j = dist_json(inst.dist);
  json pairs = json::array();
  for (const auto& p : inst.pairs) pairs.push_back({p.first, p.second, p.low});
  j["hidden"] = {{"kind", "sample-hard"},
                 {"n", inst.n},
                 {"eps", to_string(inst.eps)},
                 {"q_star_n", to_string(inst.q_star_n)},
                 {"pairs", pairs}};
  return j.dump();
}

std::string to_json(const QueryHardInstance& inst) {
  json j = dist_json(inst.dist);
  j["hidden"] = {{"kind", "query-hard"},
                 {"n", inst.n},
                 {"eps", to_string(inst.eps)},
                 {"k", inst.hidden_k}};
  return j.dump();
}

ProductDist parse_instance(std::string_view text) { return dist_from_json(parse_document(text)); }

LoadedInstance parse_instance_with_hidden(std::string_view text) {
  json j = parse_document(text);
  LoadedInstance out{dist_from_json(j), std::nullopt, std::nullopt};
  if (!j.contains("hidden")) return out;
  const auto& h = j["hidden"];
  const std::string kind = h.value("kind", "");
  if (kind == "sample-hard") {
    std::vector<ItemPair> pairs;
    for (const auto& p : h.at("pairs")) {
      auto a = p.at(0).get<std::size_t>(), b = p.at(1).get<std::size_t>(),
           low = p.at(2).get<std::size_t>();
      if (a >= out.dist.size() || b >= out.dist.size() || (low != a && low != b))
        throw InvalidInput("bad pair in hidden block");
      pairs.push_back({a, b, low});
    }
    out.sample_hard = SampleHardInstance{out.dist, std::move(pairs), h.at("n").get<std::int64_t>(),
                                         rational_field(h, "eps"), rational_field(h, "q_star_n")};
  } else if (kind == "query-hard") {
    out.query_hard = QueryHardInstance{out.dist, h.at("k").get<std::vector<std::int64_t>>(),
                                       h.at("n").get<std::int64_t>(), rational_field(h, "eps")};
  } else {
    throw InvalidInput("unknown hidden block kind '" + kind + "'");
  }
  return out;
}

std::string to_json(const QueryLearnTrace& trace) {
  json j = {{"k", trace.k},
            {"lambda", trace.lambda},
            {"queries_per_threshold", trace.queries_per_threshold},
            {"R", trace.R}};
  return j.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace bupp
