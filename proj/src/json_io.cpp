#include "layoutgen/json_io.hpp"

#include <fstream>
#include <sstream>

#include "layoutgen/error.hpp"

namespace layoutgen {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::DataError, what); }

template <typename Fn>
auto guarded(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    bad(std::string(what) + ": " + e.what());
  }
}

Json elements_to_json(const std::vector<Element>& elements) {
  Json arr = Json::array();
  for (const auto& e : elements) {
    arr.push_back({{"type", e.type_label}, {"box", box_to_json(e.box)}});
  }
  return arr;
}

std::vector<Element> elements_from_json(const Json& j) {
  std::vector<Element> out;
  for (const auto& e : j) {
    out.push_back({e.at("type").get<std::string>(), box_from_json(e.at("box"))});
  }
  return out;
}

Json ref_to_json(const ElementRef& r) { return {{"type", r.type_label}, {"index", r.index}}; }

ElementRef ref_from_json(const Json& j) {
  return {j.at("type").get<std::string>(), j.at("index").get<int>()};
}

std::vector<Relation> relations_from_json(const Json& j, const char* key) {
  std::vector<Relation> out;
  if (j.contains(key)) {
    for (const auto& r : j.at(key)) out.push_back(relation_from_json(r));
  }
  return out;
}

Json relations_to_json(const std::vector<Relation>& relations) {
  Json arr = Json::array();
  for (const auto& r : relations) arr.push_back(relation_to_json(r));
  return arr;
}

}  // namespace

Json box_to_json(const BoundingBox& b) { return Json::array({b.left, b.top, b.width, b.height}); }

BoundingBox box_from_json(const Json& j) {
  return guarded("box", [&] {
    if (!j.is_array() || j.size() != 4) bad("box must be [left, top, width, height]");
    return BoundingBox{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
  });
}

Json layout_to_json(const Layout& y) {
  return {{"canvas", {{"width", y.canvas.width}, {"height", y.canvas.height}}},
          {"elements", elements_to_json(y.elements)}};
}

Layout layout_from_json(const Json& j) {
  return guarded("layout", [&] {
    Layout y;
    y.canvas = {j.at("canvas").at("width").get<int>(), j.at("canvas").at("height").get<int>()};
    y.elements = elements_from_json(j.at("elements"));
    return y;
  });
}

Json domain_to_json(const DomainConfig& d) {
  return {{"key", d.key},
          {"name", d.name},
          {"canvas", {{"width", d.canvas.width}, {"height", d.canvas.height}}},
          {"type_vocabulary", d.type_vocabulary}};
}

DomainConfig domain_from_json(const Json& j) {
  return guarded("domain", [&] {
    DomainConfig d;
    d.key = j.value("key", std::string());
    d.name = j.at("name").get<std::string>();
    d.canvas = {j.at("canvas").at("width").get<int>(), j.at("canvas").at("height").get<int>()};
    d.type_vocabulary = j.at("type_vocabulary").get<std::vector<std::string>>();
    if (d.canvas.width <= 0 || d.canvas.height <= 0) bad("domain canvas must be positive");
    return d;
  });
}

Json relation_to_json(const Relation& r) {
  Json j = {{"subject", ref_to_json(r.subject)},
            {"predicate", std::string(predicate_name(r.predicate))}};
  j["object"] = r.object ? ref_to_json(*r.object) : Json("canvas");
  return j;
}

Relation relation_from_json(const Json& j) {
  return guarded("relation", [&] {
    Relation r;
    r.subject = ref_from_json(j.at("subject"));
    try {
      r.predicate = parse_predicate(j.at("predicate").get<std::string>());
    } catch (const Error& e) {
      bad(e.what());
    }
    const Json& obj = j.at("object");
    if (obj.is_string()) {
      if (obj.get<std::string>() != "canvas") bad("relation object must be 'canvas' or a ref");
    } else {
      r.object = ref_from_json(obj);
    }
    return r;
  });
}

Json constraint_to_json(const ConstraintSpec& c) {
  struct Visitor {
    Json operator()(const TypeConstraint& x) const {
      return {{"kind", "types"}, {"types", x.types}};
    }
    Json operator()(const TypeSizeConstraint& x) const {
      Json items = Json::array();
      for (const auto& i : x.items) {
        items.push_back({{"type", i.type_label}, {"width", i.width}, {"height", i.height}});
      }
      return {{"kind", "types_sizes"}, {"items", items}};
    }
    Json operator()(const RelationConstraint& x) const {
      return {{"kind", "relations"},
              {"types", x.types},
              {"relations", relations_to_json(x.relations)}};
    }
    Json operator()(const PartialLayout& x) const {
      return {{"kind", "partial"}, {"elements", elements_to_json(x.elements)}};
    }
    Json operator()(const NoisyLayout& x) const {
      return {{"kind", "noisy"}, {"elements", elements_to_json(x.elements)}};
    }
    Json operator()(const ContentConstraint& x) const {
      return {{"kind", "content"}, {"box", box_to_json(x.box)}, {"types", x.types}};
    }
    Json operator()(const TextConstraint& x) const {
      Json j = {{"kind", "text"}, {"text", x.text}};
      if (!x.types.empty()) j["types"] = x.types;
      if (!x.relations.empty()) j["relations"] = relations_to_json(x.relations);
      return j;
    }
  };
  return std::visit(Visitor{}, c);
}

ConstraintSpec constraint_from_json(const Json& j) {
  return guarded("constraint", [&]() -> ConstraintSpec {
    const std::string kind = j.at("kind").get<std::string>();
    auto types = [&] {
      return j.contains("types") ? j.at("types").get<std::vector<std::string>>()
                                 : std::vector<std::string>{};
    };
    if (kind == "types") return TypeConstraint{types()};
    if (kind == "types_sizes") {
      TypeSizeConstraint c;
      for (const auto& i : j.at("items")) {
        c.items.push_back({i.at("type").get<std::string>(), i.at("width").get<int>(),
                           i.at("height").get<int>()});
      }
      return c;
    }
    if (kind == "relations") {
      RelationConstraint c{types(), relations_from_json(j, "relations")};
      try {
        validate_relations(c.types, c.relations);
      } catch (const Error& e) {
        bad(e.what());
      }
      return c;
    }
    if (kind == "partial") return PartialLayout{elements_from_json(j.at("elements"))};
    if (kind == "noisy") return NoisyLayout{elements_from_json(j.at("elements"))};
    if (kind == "content") return ContentConstraint{box_from_json(j.at("box")), types()};
    if (kind == "text") {
      return TextConstraint{j.at("text").get<std::string>(), types(),
                            relations_from_json(j, "relations")};
    }
    bad("unknown constraint kind: " + kind);
  });
}

Json exemplar_to_json(const Exemplar& e) {
  Json j = {{"id", e.id},
            {"constraint", constraint_to_json(e.constraint)},
            {"layout", layout_to_json(e.layout)}};
  if (e.embedding) {
    j["embedding"] = std::vector<double>(e.embedding->data(),
                                         e.embedding->data() + e.embedding->size());
  }
  if (e.saliency_box) j["saliency_box"] = box_to_json(*e.saliency_box);
  return j;
}

Exemplar exemplar_from_json(const Json& j, const CanvasSpec& canvas) {
  return guarded("exemplar", [&] {
    Exemplar e{j.at("id").get<std::string>(), constraint_from_json(j.at("constraint")),
               layout_from_json(j.at("layout")), std::nullopt, std::nullopt};
    if (!(e.layout.canvas == canvas)) bad("exemplar " + e.id + " is not on the index canvas");
    if (j.contains("embedding")) {
      const auto v = j.at("embedding").get<std::vector<double>>();
      e.embedding = Eigen::Map<const Embedding>(v.data(), static_cast<Eigen::Index>(v.size()));
    }
    if (j.contains("saliency_box")) e.saliency_box = box_from_json(j.at("saliency_box"));
    return e;
  });
}

Json index_to_json(const ExemplarIndex& index) {
  Json exemplars = Json::array();
  for (const auto& e : index.exemplars()) exemplars.push_back(exemplar_to_json(e));
  return {{"format", "layoutgen-index"},
          {"version", 1},
          {"task", std::string(task_key(index.task()))},
          {"domain", domain_to_json(index.domain())},
          {"exemplars", exemplars}};
}

ExemplarIndex index_from_json(const Json& j) {
  return guarded("index", [&] {
    if (j.value("format", std::string()) != "layoutgen-index") bad("not an exemplar index file");
    TaskKind task;
    try {
      task = parse_task(j.at("task").get<std::string>());
    } catch (const Error& e) {
      bad(e.what());
    }
    DomainConfig domain = domain_from_json(j.at("domain"));
    std::vector<Exemplar> exemplars;
    for (const auto& e : j.at("exemplars")) exemplars.push_back(exemplar_from_json(e, domain.canvas));
    try {
      return ExemplarIndex(std::move(domain), task, std::move(exemplars));
    } catch (const Error& e) {
      bad(e.what());
    }
  });
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_index(const ExemplarIndex& index, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) bad("cannot write " + path.string());
  out << index_to_json(index).dump() << '\n';
}

ExemplarIndex load_index(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  return guarded("index file", [&] { return index_from_json(Json::parse(text)); });
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  std::vector<Json> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(Json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      bad(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) bad("cannot write " + path.string());
  for (const auto& r : rows) out << r.dump() << '\n';
}

}  // namespace layoutgen
