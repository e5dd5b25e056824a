#include "dawnet/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dawnet {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DawError(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DawError(ErrorCode::IoError, "cannot write " + path);
  out << content;
}

namespace {

[[noreturn]] void schema_error(const std::string& origin, const std::string& what) {
  throw DawError(ErrorCode::SchemaError, origin + ": " + what);
}

Value domain_value(const json& j, const DomainId& dom_id, const std::string& origin) {
  if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
  if (j.is_string()) return Value::atom(dom_id, j.get<std::string>());
  schema_error(origin, "domain value must be an integer or a string");
}

// Value for variable v resolved against its domain: integers stay integers,
// strings become atoms tagged with the variable's domain.
Value variable_value(const json& j, const DataModel& dm, const VarId& v,
                     const std::string& origin) {
  if (!dm.has_var(v)) throw DawError(ErrorCode::UnknownVariable, origin + ": " + v);
  const DomainId& dom = dm.dm.at(v);
  Value val = domain_value(j, dom, origin);
  if (!dm.domains.at(dom).contains(val))
    throw DawError(ErrorCode::ValidationFailed,
                   origin + ": value " + to_string(val) + " outside the domain of " + v);
  return val;
}

WriteSet parse_write_set(const json& j, const DataModel& dm, const VarId& v,
                         const std::string& origin) {
  if (j.is_array()) {
    if (j.empty()) return WriteSet::deletion();
    std::vector<Value> vals;
    for (const auto& e : j) vals.push_back(variable_value(e, dm, v, origin));
    return WriteSet::explicit_set(std::move(vals));
  }
  if (j.is_object() && j.contains("lo") && j.contains("hi")) {
    std::int64_t lo = j.at("lo").get<std::int64_t>();
    std::int64_t hi = j.at("hi").get<std::int64_t>();
    const Domain& dom = dm.domain_of(v);
    if (!dom.contains(Value::integer(lo)) || !dom.contains(Value::integer(hi)))
      throw DawError(ErrorCode::ValidationFailed,
                     origin + ": interval write outside the domain of " + v);
    return WriteSet::interval(lo, hi);
  }
  schema_error(origin, "write set must be an array or {\"lo\":..,\"hi\":..}");
}

json write_set_json(const WriteSet& set) {
  if (set.is_delete()) return json::array();
  if (set.is_interval()) return json{{"lo", set.as_interval().lo}, {"hi", set.as_interval().hi}};
  json arr = json::array();
  for (const auto& v : set.as_explicit())
    arr.push_back(v.is_int() ? json(v.as_int()) : json(v.as_atom().name));
  return arr;
}

Observability parse_obs(const std::string& s, const std::string& origin) {
  if (s == "always") return Observability::Always;
  if (s == "sometimes") return Observability::Sometimes;
  if (s == "never") return Observability::Never;
  schema_error(origin, "observability must be always|sometimes|never");
}

}  // namespace

DawNet parse_model_text(const std::string& text, const std::string& origin, bool validate) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DawError(ErrorCode::SchemaError, origin + ": " + e.what());
  }
  if (!j.is_object()) schema_error(origin, "top level must be an object");
  if (j.value("schema", 0) != 1) schema_error(origin, "unsupported or missing schema version");

  DawNet w;
  if (!j.contains("domains") || !j["domains"].is_object())
    schema_error(origin, "missing domains object");
  for (const auto& [id, spec] : j["domains"].items()) {
    Domain d;
    d.id = id;
    if (spec.contains("int")) {
      const auto& iv = spec["int"];
      d.universe = IntInterval{iv.at("lo").get<std::int64_t>(), iv.at("hi").get<std::int64_t>()};
      d.ordered = spec.value("ordered", true);
    } else if (spec.contains("values")) {
      std::vector<Value> vals;
      for (const auto& e : spec["values"]) vals.push_back(domain_value(e, id, origin));
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      d.universe = std::move(vals);
      if (spec.contains("order")) {
        // Explicit related pairs; reflexive-transitive closure is taken and
        // checked by DataModel::validate.
        std::set<std::pair<Value, Value>> pairs;
        for (const auto& vv : d.values()) pairs.insert({vv, vv});
        for (const auto& pr : spec["order"]) {
          if (!pr.is_array() || pr.size() != 2) schema_error(origin, "order pairs must be 2-arrays");
          pairs.insert({domain_value(pr[0], id, origin), domain_value(pr[1], id, origin)});
        }
        bool grew = true;  // transitive closure
        while (grew) {
          grew = false;
          for (const auto& [a, b] : std::set<std::pair<Value, Value>>(pairs))
            for (const auto& [c, e] : std::set<std::pair<Value, Value>>(pairs))
              if (b == c && pairs.insert({a, e}).second) grew = true;
        }
        d.order_pairs = std::move(pairs);
      } else if (spec.value("ordered", false)) {
        d.ordered = true;
      }
    } else {
      schema_error(origin, "domain " + id + " needs \"values\" or \"int\"");
    }
    w.dm.domains.emplace(id, std::move(d));
  }

  if (!j.contains("variables") || !j["variables"].is_object())
    schema_error(origin, "missing variables object");
  for (const auto& [v, dom] : j["variables"].items()) {
    if (!dom.is_string()) schema_error(origin, "variable domain must be a string");
    w.dm.dm.emplace(v, dom.get<std::string>());
  }

  if (!j.contains("places") || !j["places"].is_array()) schema_error(origin, "missing places");
  for (const auto& p : j["places"]) {
    if (!w.net.places.insert(p.get<std::string>()).second)
      schema_error(origin, "duplicate place " + p.get<std::string>());
  }
  if (!j.contains("transitions") || !j["transitions"].is_array())
    schema_error(origin, "missing transitions");
  for (const auto& t : j["transitions"]) {
    std::string id = t.at("id").get<std::string>();
    if (w.net.places.count(id) || !w.net.transitions.insert(id).second)
      schema_error(origin, "duplicate node " + id);
    if (t.contains("observability"))
      w.meta.observability[id] = parse_obs(t["observability"].get<std::string>(), origin);
    if (t.contains("writes")) {
      std::map<VarId, WriteSet> ws;
      for (const auto& [v, spec] : t["writes"].items())
        ws.emplace(v, parse_write_set(spec, w.dm, v, origin + " transition " + id));
      if (!ws.empty()) w.wr.emplace(id, std::move(ws));
    }
  }
  if (!j.contains("arcs") || !j["arcs"].is_array()) schema_error(origin, "missing arcs");
  for (const auto& a : j["arcs"]) {
    if (!a.is_array() || a.size() != 2) schema_error(origin, "arcs must be 2-arrays");
    w.net.arcs.insert({a[0].get<std::string>(), a[1].get<std::string>()});
  }
  if (!j.contains("start") || !j.contains("end")) schema_error(origin, "missing start/end");
  w.meta.start = j["start"].get<std::string>();
  w.meta.end = j["end"].get<std::string>();
  if (j.contains("start_t") && !j["start_t"].is_null())
    w.meta.start_t = j["start_t"].get<std::string>();
  if (j.contains("end_t") && !j["end_t"].is_null()) w.meta.end_t = j["end_t"].get<std::string>();

  // Guards need the finished data model.
  for (const auto& t : j["transitions"]) {
    std::string id = t.at("id").get<std::string>();
    if (t.contains("guard")) {
      try {
        w.gd[id] = parse_guard(t["guard"].get<std::string>(), w.dm);
      } catch (const DawError& e) {
        throw DawError(e.code(), origin + " transition " + id + ": " + e.what());
      }
    } else {
      w.gd[id] = GuardExpr::mk_true();
    }
  }

  if (validate) {
    try {
      w.validate();
    } catch (const DawError& e) {
      throw DawError(ErrorCode::ValidationFailed, origin + ": " + e.what());
    }
  }
  return w;
}

DawNet parse_model(const std::string& path, bool validate) {
  return parse_model_text(read_file(path), path, validate);
}

std::string serialize_model(const DawNet& w, const std::string& name) {
  json j;
  j["schema"] = 1;
  if (!name.empty()) j["name"] = name;
  json domains = json::object();
  for (const auto& [id, d] : w.dm.domains) {
    json spec = json::object();
    if (d.is_interval()) {
      spec["int"] = {{"lo", d.interval().lo}, {"hi", d.interval().hi}};
      if (!d.ordered) spec["ordered"] = false;
    } else {
      json vals = json::array();
      for (const auto& v : d.values())
        vals.push_back(v.is_int() ? json(v.as_int()) : json(v.as_atom().name));
      spec["values"] = std::move(vals);
      if (d.ordered) spec["ordered"] = true;
      if (!d.order_pairs.empty()) {
        json pairs = json::array();
        for (const auto& [a, b] : d.order_pairs) {
          if (a == b) continue;  // reflexive pairs are implied
          pairs.push_back(json::array(
              {a.is_int() ? json(a.as_int()) : json(a.as_atom().name),
               b.is_int() ? json(b.as_int()) : json(b.as_atom().name)}));
        }
        spec["order"] = std::move(pairs);
      }
    }
    domains[id] = std::move(spec);
  }
  j["domains"] = std::move(domains);
  json vars = json::object();
  for (const auto& [v, d] : w.dm.dm) vars[v] = d;
  j["variables"] = std::move(vars);
  j["places"] = json(w.net.places);
  json transitions = json::array();
  for (const auto& t : w.net.transitions) {
    json tj;
    tj["id"] = t;
    GuardPtr g = w.guard(t);
    if (g->kind != GuardExpr::Kind::True) tj["guard"] = pretty_print(g);
    auto oit = w.meta.observability.find(t);
    if (oit != w.meta.observability.end() && oit->second != Observability::Sometimes)
      tj["observability"] = observability_name(oit->second);
    if (const auto* ws = w.writes(t)) {
      json writes = json::object();
      for (const auto& [v, set] : *ws) writes[v] = write_set_json(set);
      tj["writes"] = std::move(writes);
    }
    transitions.push_back(std::move(tj));
  }
  j["transitions"] = std::move(transitions);
  json arcs = json::array();
  for (const auto& [a, b] : w.net.arcs) arcs.push_back(json::array({a, b}));
  j["arcs"] = std::move(arcs);
  j["start"] = w.meta.start;
  j["end"] = w.meta.end;
  if (w.meta.start_t) j["start_t"] = *w.meta.start_t;
  if (w.meta.end_t) j["end_t"] = *w.meta.end_t;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Traces.

namespace {

Trace parse_trace_json(const std::string& text, const DawNet& w, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DawError(ErrorCode::FormatError, origin + ": " + e.what());
  }
  if (!j.is_array()) throw DawError(ErrorCode::FormatError, origin + ": trace must be an array");
  Trace tau;
  for (const auto& ej : j) {
    if (!ej.is_object() || !ej.contains("t"))
      throw DawError(ErrorCode::FormatError, origin + ": event needs a \"t\" field");
    Event e;
    e.transition = ej["t"].get<std::string>();
    if (ej.contains("w"))
      for (const auto& [v, val] : ej["w"].items())
        e.writes.emplace(v, variable_value(val, w.dm, v, origin));
    if (ej.contains("d"))
      for (const auto& v : ej["d"]) e.deletes.insert(v.get<std::string>());
    tau.events.push_back(std::move(e));
  }
  return tau;
}

// Minimal XES subset: the first <trace> element; <event> children with
// <string|int key=".." value=".."/> attributes. concept:name is the
// transition; attributes naming declared variables become writes; everything
// else (lifecycle, timestamps, ...) is ignored.
struct XmlTag {
  std::string name;
  std::map<std::string, std::string> attrs;
  bool closing = false;
  bool self_closing = false;
};

class XmlScanner {
public:
  explicit XmlScanner(const std::string& s) : s_(s) {}

  std::optional<XmlTag> next() {
    std::size_t lt = s_.find('<', pos_);
    while (lt != std::string::npos &&
           (s_.compare(lt, 4, "<!--") == 0 || s_.compare(lt, 2, "<?") == 0)) {
      std::size_t end = s_.compare(lt, 4, "<!--") == 0 ? s_.find("-->", lt) : s_.find("?>", lt);
      if (end == std::string::npos) return std::nullopt;
      lt = s_.find('<', end);
    }
    if (lt == std::string::npos) return std::nullopt;
    std::size_t gt = s_.find('>', lt);
    if (gt == std::string::npos)
      throw DawError(ErrorCode::FormatError, "unterminated XML tag");
    std::string body = s_.substr(lt + 1, gt - lt - 1);
    pos_ = gt + 1;
    XmlTag tag;
    if (!body.empty() && body.front() == '/') {
      tag.closing = true;
      body.erase(0, 1);
    }
    if (!body.empty() && body.back() == '/') {
      tag.self_closing = true;
      body.pop_back();
    }
    std::size_t i = 0;
    while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    tag.name = body.substr(0, i);
    while (i < body.size()) {
      while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
      std::size_t eq = body.find('=', i);
      if (eq == std::string::npos) break;
      std::string key = body.substr(i, eq - i);
      while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
      std::size_t q1 = body.find('"', eq);
      if (q1 == std::string::npos) break;
      std::size_t q2 = body.find('"', q1 + 1);
      if (q2 == std::string::npos)
        throw DawError(ErrorCode::FormatError, "unterminated XML attribute");
      tag.attrs[key] = body.substr(q1 + 1, q2 - q1 - 1);
      i = q2 + 1;
    }
    return tag;
  }

private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

Trace parse_trace_xes(const std::string& text, const DawNet& w, const std::string& origin) {
  XmlScanner scan(text);
  Trace tau;
  bool in_trace = false, done = false, in_event = false;
  Event current;
  while (auto tag = scan.next()) {
    if (done) break;
    if (tag->name == "trace") {
      if (tag->closing) {
        if (in_trace) done = true;  // only the first trace is read
        in_trace = false;
      } else {
        in_trace = true;
      }
      continue;
    }
    if (!in_trace) continue;
    if (tag->name == "event") {
      if (tag->closing || tag->self_closing) {
        if (current.transition.empty())
          throw DawError(ErrorCode::FormatError, origin + ": event without concept:name");
        tau.events.push_back(std::move(current));
        current = Event{};
        in_event = false;
      } else {
        in_event = true;
      }
      continue;
    }
    if (!in_event) continue;
    if (tag->name != "string" && tag->name != "int") continue;  // dates etc. ignored
    auto kit = tag->attrs.find("key");
    auto vit = tag->attrs.find("value");
    if (kit == tag->attrs.end() || vit == tag->attrs.end()) continue;
    if (kit->second == "concept:name") {
      current.transition = vit->second;
    } else if (w.dm.has_var(kit->second)) {
      json val = tag->name == "int" ? json(std::stoll(vit->second)) : json(vit->second);
      current.writes.emplace(kit->second, variable_value(val, w.dm, kit->second, origin));
    }
  }
  return tau;
}

}  // namespace

Trace parse_trace_text(const std::string& text, TraceFormat format, const DawNet& w) {
  return format == TraceFormat::Json ? parse_trace_json(text, w, "<string>")
                                     : parse_trace_xes(text, w, "<string>");
}

Trace parse_trace(const std::string& path, TraceFormat format, const DawNet& w) {
  std::string text = read_file(path);
  return format == TraceFormat::Json ? parse_trace_json(text, w, path)
                                     : parse_trace_xes(text, w, path);
}

std::string serialize_trace(const Trace& tau) {
  json arr = json::array();
  for (const Event& e : tau.events) {
    json ej;
    ej["t"] = e.transition;
    if (!e.writes.empty()) {
      json wj = json::object();
      for (const auto& [v, val] : e.writes)
        wj[v] = val.is_int() ? json(val.as_int()) : json(val.as_atom().name);
      ej["w"] = std::move(wj);
    }
    if (!e.deletes.empty()) ej["d"] = json(e.deletes);
    arr.push_back(std::move(ej));
  }
  return arr.dump(2) + "\n";
}

}  // namespace dawnet
