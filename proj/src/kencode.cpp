#include "dawnet/kencode.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dawnet {

namespace {

// Lowercase [a-z][a-z0-9_]* symbol from an arbitrary identifier; uniqueness
// against `used` via numeric suffixes.
std::string mangle(const std::string& id, std::set<std::string>& used) {
  std::string s;
  for (char c : id) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else
      s += '_';
  }
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) s = "n" + s;
  std::string candidate = s;
  int suffix = 2;
  while (!used.insert(candidate).second) candidate = s + "_" + std::to_string(suffix++);
  return candidate;
}

KLit pos(std::string pred, std::vector<KTerm> args = {}) {
  return KLit{KAtom{std::move(pred), std::move(args)}, false};
}
KLit neg(std::string pred, std::vector<KTerm> args = {}) {
  return KLit{KAtom{std::move(pred), std::move(args)}, true};
}

class Encoder {
public:
  explicit Encoder(const DawNet& w) : w_(w) {}

  PlanningDomain run() {
    for (const auto& [t, ws] : w_.wr)
      for (const auto& [v, set] : ws)
        if (set.is_interval())
          throw DawError(ErrorCode::IntervalNotExpanded,
                         "wr(" + t + ")(" + v + ") is an interval; expand or regionize first");
    assign_symbols();
    emit_background();
    emit_declarations();
    emit_behaviour();
    emit_data();
    emit_guards();
    emit_problem();
    return std::move(pd_);
  }

private:
  void assign_symbols() {
    SymbolTable& sy = pd_.symbols;
    std::set<std::string> preds;  // predicate namespace
    preds.insert("ord");
    preds.insert("true");
    preds.insert("false");
    preds.insert("not");
    for (const auto& p : w_.net.places) {
      std::string f = mangle(p, preds);
      sy.place_fluent[p] = f;
      sy.fluent_place[f] = p;
    }
    for (const auto& t : w_.net.transitions) {
      std::string a = mangle(t, preds);
      sy.action_name[t] = a;
      sy.action_transition[a] = t;
    }
    std::set<std::string> var_bases;
    for (const auto& [v, d] : w_.dm.dm) {
      std::string base = mangle(v, var_bases);
      sy.var_base[v] = base;
      for (const std::string& f : {"var_" + base, "var_def_" + base, "var_change_" + base})
        if (!preds.insert(f).second)
          throw DawError(ErrorCode::InvalidArgument, "symbol clash on " + f);
      sy.varfluent_var["var_" + base] = v;
    }
    for (const auto& [t, ws] : w_.wr)
      for (const auto& [v, set] : ws)
        if (!preds.insert(sy.vardom_pred(v, t)).second)
          throw DawError(ErrorCode::InvalidArgument, "symbol clash on vardom for " + v);

    // Value constants: integers print literally; atoms by sanitized name,
    // domain-qualified when the bare name is claimed twice.
    std::set<std::string> consts;
    std::set<Value> values = collect_values();
    for (const Value& val : values) {
      if (val.is_int()) {
        sy.value_const[val] = std::to_string(val.as_int());
      } else {
        std::string n;
        for (char c : val.as_atom().name)
          n += std::isalnum(static_cast<unsigned char>(c))
                   ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                   : '_';
        if (n.empty() || !std::islower(static_cast<unsigned char>(n[0]))) n = "a" + n;
        bool taken = consts.count(n) != 0;
        if (taken) n = mangle(val.as_atom().domain + "_" + val.as_atom().name, consts);
        else consts.insert(n);
        sy.value_const[val] = n;
      }
      sy.const_value[sy.value_const[val]] = val;
    }

    // Guard fluents: canonical pre-order numbering over sorted transitions,
    // deduplicated by structural equality.
    for (const auto& t : w_.net.transitions) number_subformulas(w_.guard(t));
    for (const auto& [name, g] : pd_.symbols.guard_fluents)
      if (!preds.insert(name).second)
        throw DawError(ErrorCode::InvalidArgument, "symbol clash on " + name);
  }

  std::set<Value> collect_values() const {
    std::set<Value> out;
    for (const auto& [t, ws] : w_.wr)
      for (const auto& [v, set] : ws)
        if (set.is_explicit())
          for (const auto& val : set.as_explicit()) out.insert(val);
    for (const auto& t : w_.net.transitions) collect_guard_consts(w_.guard(t), out);
    return out;
  }

  static void collect_guard_consts(const GuardPtr& g, std::set<Value>& out) {
    switch (g->kind) {
      case GuardExpr::Kind::True:
      case GuardExpr::Kind::Def:
        break;
      case GuardExpr::Kind::Eq:
      case GuardExpr::Kind::Leq:
        if (!g->lhs.is_var()) out.insert(g->lhs.val);
        if (!g->rhs.is_var()) out.insert(g->rhs.val);
        break;
      case GuardExpr::Kind::Not:
        collect_guard_consts(g->a, out);
        break;
      case GuardExpr::Kind::And:
        collect_guard_consts(g->a, out);
        collect_guard_consts(g->b, out);
        break;
    }
  }

  std::string guard_fluent_of(const GuardPtr& g) const {
    for (const auto& [name, h] : pd_.symbols.guard_fluents)
      if (guard_equal(g, h)) return name;
    throw DawError(ErrorCode::NotFound, "guard subformula not numbered");
  }

  void number_subformulas(const GuardPtr& g) {
    for (const auto& [name, h] : pd_.symbols.guard_fluents)
      if (guard_equal(g, h)) return;
    pd_.symbols.guard_fluents.emplace_back(
        "guard_" + std::to_string(pd_.symbols.guard_fluents.size()), g);
    if (g->kind == GuardExpr::Kind::Not) number_subformulas(g->a);
    if (g->kind == GuardExpr::Kind::And) {
      // n-ary conjunction is flattened; number the atomic conjuncts.
      for (const GuardPtr& c : flatten_and(g)) number_subformulas(c);
    }
  }

  static std::vector<GuardPtr> flatten_and(const GuardPtr& g) {
    if (g->kind != GuardExpr::Kind::And) return {g};
    std::vector<GuardPtr> out = flatten_and(g->a);
    std::vector<GuardPtr> right = flatten_and(g->b);
    out.insert(out.end(), right.begin(), right.end());
    return out;
  }

  void emit_background() {
    SymbolTable& sy = pd_.symbols;
    // vardom facts, per (variable, transition) sorted.
    std::map<std::pair<VarId, TransitionId>, std::vector<Value>> doms;
    for (const auto& [t, ws] : w_.wr)
      for (const auto& [v, set] : ws)
        if (set.is_explicit()) doms[{v, t}] = set.as_explicit();
    for (const auto& [key, vals] : doms)
      for (const auto& val : vals)
        pd_.background.push_back(
            KAtom{sy.vardom_pred(key.first, key.second), {KTerm::constant(sy.value_const.at(val))}});

    // ord facts: for every ordered domain, the related pairs among values
    // that occur in the model (write sets and guard constants).
    std::set<Value> all = collect_values();
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& [id, dom] : w_.dm.domains) {
      if (!dom.has_order()) continue;
      for (const Value& a : all) {
        if (!dom.contains(a)) continue;
        for (const Value& b : all)
          if (dom.contains(b) && dom.leq(a, b))
            pairs.insert({sy.value_const.at(a), sy.value_const.at(b)});
      }
    }
    for (const auto& [a, b] : pairs)
      pd_.background.push_back(KAtom{"ord", {KTerm::constant(a), KTerm::constant(b)}});
  }

  void emit_declarations() {
    const SymbolTable& sy = pd_.symbols;
    for (const auto& [p, f] : sy.place_fluent) pd_.fluent_decls.emplace_back(f, 0);
    for (const auto& [v, base] : sy.var_base) {
      pd_.fluent_decls.emplace_back("var_" + base, 1);
      pd_.fluent_decls.emplace_back("var_def_" + base, 0);
      pd_.fluent_decls.emplace_back("var_change_" + base, 0);
    }
    for (const auto& [name, g] : sy.guard_fluents) pd_.fluent_decls.emplace_back(name, 0);
    std::sort(pd_.fluent_decls.begin(), pd_.fluent_decls.end());
    for (const auto& [t, a] : sy.action_name) pd_.action_decls.emplace_back(a, 0);
    std::sort(pd_.action_decls.begin(), pd_.action_decls.end());
  }

  void emit_behaviour() {
    const SymbolTable& sy = pd_.symbols;
    // Executability: one per transition over its preset.
    for (const auto& [t, a] : sy.action_name) {
      KRule r;
      r.kind = KRule::Kind::Executability;
      r.head = pos(a);
      for (const auto& p : preset(w_.net, t)) r.post_pos.push_back(pos(sy.place_fluent.at(p)));
      pd_.rules.push_back(std::move(r));
    }
    // Concurrency disabling for every ordered pair of distinct transitions.
    for (const auto& [t1, a1] : sy.action_name)
      for (const auto& [t2, a2] : sy.action_name) {
        if (t1 == t2) continue;
        KRule r;
        r.head = std::nullopt;
        r.pre_pos = {pos(a1), pos(a2)};
        pd_.rules.push_back(std::move(r));
      }
    // Token transfer: clear pre \ post, set the full postset.
    for (const auto& [t, a] : sy.action_name) {
      std::set<NodeId> pre = preset(w_.net, t);
      std::set<NodeId> post = postset(w_.net, t);
      for (const auto& p : pre)
        if (!post.count(p)) {
          KRule r;
          r.head = neg(sy.place_fluent.at(p));
          r.pre_pos = {pos(a)};
          pd_.rules.push_back(std::move(r));
        }
      for (const auto& p : post) {
        KRule r;
        r.head = pos(sy.place_fluent.at(p));
        r.pre_pos = {pos(a)};
        pd_.rules.push_back(std::move(r));
      }
    }
    // Place inertia.
    for (const auto& [p, f] : sy.place_fluent) {
      KRule r;
      r.head = pos(f);
      r.post_neg = {neg(f)};
      r.pre_pos = {pos(f)};
      pd_.rules.push_back(std::move(r));
    }
  }

  void emit_data() {
    const SymbolTable& sy = pd_.symbols;
    for (const auto& [v, base] : sy.var_base) {
      const std::string vf = "var_" + base;
      {  // functionality
        KRule r;
        r.head = std::nullopt;
        r.post_pos = {pos(vf, {KTerm::variable("X")}), pos(vf, {KTerm::variable("Y")})};
        r.builtins = {KBuiltin{KTerm::variable("X"), false, KTerm::variable("Y")}};
        pd_.rules.push_back(std::move(r));
      }
      {  // inertia, inhibited by var_change
        KRule r;
        r.head = pos(vf, {KTerm::variable("X")});
        r.post_neg = {neg(vf, {KTerm::variable("X")}), pos("var_change_" + base)};
        r.pre_pos = {pos(vf, {KTerm::variable("X")})};
        pd_.rules.push_back(std::move(r));
      }
      {  // defined-ness projection
        KRule r;
        r.head = pos("var_def_" + base);
        r.post_pos = {pos(vf, {KTerm::variable("X")})};
        pd_.rules.push_back(std::move(r));
      }
    }
    // Updates per (transition, variable).
    for (const auto& [t, ws] : w_.wr) {
      const std::string a = sy.action_name.at(t);
      for (const auto& [v, set] : ws) {
        const std::string base = sy.var_base.at(v);
        const std::string vf = "var_" + base;
        if (set.is_delete()) {
          KRule r1;
          r1.head = std::nullopt;
          r1.post_pos = {pos("var_def_" + base)};
          r1.pre_pos = {pos(a)};
          pd_.rules.push_back(std::move(r1));
          KRule r2;
          r2.head = pos("var_change_" + base);
          r2.pre_pos = {pos(a)};
          pd_.rules.push_back(std::move(r2));
          continue;
        }
        const auto& vals = set.as_explicit();
        if (vals.size() == 1) {
          // Deterministic shortcut.
          KRule r1;
          r1.head = pos(vf, {KTerm::constant(sy.value_const.at(vals.front()))});
          r1.pre_pos = {pos(a)};
          pd_.rules.push_back(std::move(r1));
        } else {
          const std::string dom = sy.vardom_pred(v, t);
          KRule r1;  // positive choice
          r1.head = pos(vf, {KTerm::variable("V")});
          r1.post_pos = {pos(dom, {KTerm::variable("V")})};
          r1.post_neg = {neg(vf, {KTerm::variable("V")})};
          r1.pre_pos = {pos(a)};
          pd_.rules.push_back(std::move(r1));
          KRule r2;  // negative choice
          r2.head = neg(vf, {KTerm::variable("V")});
          r2.post_pos = {pos(dom, {KTerm::variable("V")})};
          r2.post_neg = {pos(vf, {KTerm::variable("V")})};
          r2.pre_pos = {pos(a)};
          pd_.rules.push_back(std::move(r2));
          KRule r3;  // some value must be taken
          r3.head = std::nullopt;
          r3.post_neg = {pos("var_def_" + base)};
          r3.pre_pos = {pos(a)};
          pd_.rules.push_back(std::move(r3));
        }
        KRule rc;
        rc.head = pos("var_change_" + base);
        rc.pre_pos = {pos(a)};
        pd_.rules.push_back(std::move(rc));
      }
    }
  }

  // xi translation of a term: a fluent literal for variables, a binding
  // builtin for constants.
  void xi(const Term& term, const std::string& tvar, std::vector<KLit>& body,
          std::vector<KBuiltin>& builtins) {
    const SymbolTable& sy = pd_.symbols;
    if (term.is_var()) {
      body.push_back(pos(sy.var_fluent(term.var), {KTerm::variable(tvar)}));
    } else {
      builtins.push_back(
          KBuiltin{KTerm::variable(tvar), true, KTerm::constant(sy.value_const.at(term.val))});
    }
  }

  void emit_guards() {
    const SymbolTable& sy = pd_.symbols;
    // Constraint per transition: caused false after t, not guard_gd(t).
    for (const auto& [t, a] : sy.action_name) {
      KRule r;
      r.head = std::nullopt;
      r.pre_pos = {pos(a)};
      r.pre_neg = {pos(guard_fluent_of(w_.guard(t)))};
      pd_.rules.push_back(std::move(r));
    }
    // One defining rule per numbered subformula.
    for (const auto& [name, g] : sy.guard_fluents) {
      KRule r;
      r.head = pos(name);
      switch (g->kind) {
        case GuardExpr::Kind::True:
          r.post_pos = {pos("true")};
          break;
        case GuardExpr::Kind::Def:
          r.post_pos = {pos(sy.var_def_fluent(g->var))};
          break;
        case GuardExpr::Kind::Eq:
          xi(g->lhs, "T1", r.post_pos, r.builtins);
          xi(g->rhs, "T2", r.post_pos, r.builtins);
          r.builtins.push_back(KBuiltin{KTerm::variable("T1"), true, KTerm::variable("T2")});
          break;
        case GuardExpr::Kind::Leq:
          xi(g->lhs, "T1", r.post_pos, r.builtins);
          xi(g->rhs, "T2", r.post_pos, r.builtins);
          r.post_pos.push_back(pos("ord", {KTerm::variable("T1"), KTerm::variable("T2")}));
          break;
        case GuardExpr::Kind::Not:
          r.post_neg = {pos(guard_fluent_of(g->a))};
          break;
        case GuardExpr::Kind::And:
          for (const GuardPtr& c : flatten_and(g)) r.post_pos.push_back(pos(guard_fluent_of(c)));
          break;
      }
      pd_.rules.push_back(std::move(r));
    }
  }

  void emit_problem() {
    const SymbolTable& sy = pd_.symbols;
    pd_.initially = {pos(sy.place_fluent.at(w_.meta.start))};
    pd_.goal.emplace_back(KAtom{sy.place_fluent.at(w_.meta.end), {}}, false);
    for (const auto& [p, f] : sy.place_fluent)
      if (p != w_.meta.end) pd_.goal.emplace_back(KAtom{f, {}}, true);
  }

  const DawNet& w_;
  PlanningDomain pd_;
};

}  // namespace

PlanningDomain encode(const DawNet& w) { return Encoder(w).run(); }

// ---------------------------------------------------------------------------
// Text form.

namespace {

std::string term_text(const KTerm& t) { return t.text; }

std::string atom_text(const KAtom& a) {
  if (a.args.empty()) return a.pred;
  std::string s = a.pred + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ", ";
    s += term_text(a.args[i]);
  }
  return s + ")";
}

std::string lit_text(const KLit& l) { return (l.neg ? "-" : "") + atom_text(l.atom); }

std::string builtin_text(const KBuiltin& b) {
  return term_text(b.lhs) + (b.eq ? " == " : " != ") + term_text(b.rhs);
}

std::string rule_text(const KRule& r) {
  std::ostringstream os;
  if (r.kind == KRule::Kind::Executability) {
    os << "executable " << lit_text(*r.head);
    bool first = true;
    for (const auto& l : r.post_pos) {
      os << (first ? " if " : ", ") << lit_text(l);
      first = false;
    }
    for (const auto& l : r.post_neg) {
      os << (first ? " if not " : ", not ") << lit_text(l);
      first = false;
    }
    os << ".";
    return os.str();
  }
  os << "caused " << (r.head ? lit_text(*r.head) : std::string("false"));
  bool first = true;
  auto emit_if = [&](const std::string& part) {
    os << (first ? " if " : ", ") << part;
    first = false;
  };
  for (const auto& l : r.post_pos) emit_if(lit_text(l));
  for (const auto& l : r.post_neg) emit_if("not " + lit_text(l));
  for (const auto& b : r.builtins) emit_if(builtin_text(b));
  first = true;
  auto emit_after = [&](const std::string& part) {
    os << (first ? " after " : ", ") << part;
    first = false;
  };
  for (const auto& l : r.pre_pos) emit_after(lit_text(l));
  for (const auto& l : r.pre_neg) emit_after("not " + lit_text(l));
  os << ".";
  return os.str();
}

}  // namespace

KText serialize(const PlanningDomain& pd) {
  std::ostringstream dom;
  for (const auto& f : pd.background) dom << atom_text(f) << ".\n";
  dom << "fluents:";
  for (std::size_t i = 0; i < pd.fluent_decls.size(); ++i)
    dom << (i ? ", " : " ") << pd.fluent_decls[i].first << "/" << pd.fluent_decls[i].second;
  dom << ".\n";
  dom << "actions:";
  for (std::size_t i = 0; i < pd.action_decls.size(); ++i)
    dom << (i ? ", " : " ") << pd.action_decls[i].first << "/" << pd.action_decls[i].second;
  dom << ".\n";
  for (const auto& r : pd.rules) dom << rule_text(r) << "\n";

  std::ostringstream prob;
  for (const auto& l : pd.initially) prob << "initially: " << lit_text(l) << ".\n";
  prob << "goal:";
  for (std::size_t i = 0; i < pd.goal.size(); ++i) {
    prob << (i ? ", " : " ");
    if (pd.goal[i].second) prob << "not ";
    prob << atom_text(pd.goal[i].first);
  }
  prob << "?\n";
  return KText{dom.str(), prob.str()};
}

// ---------------------------------------------------------------------------
// Parser for the emitted format.

namespace {

class KParser {
public:
  explicit KParser(const std::string& text) : s_(text) {}

  void parse_into(PlanningDomain& pd, bool problem_file) {
    std::size_t line_start = 0;
    while (line_start < s_.size()) {
      std::size_t nl = s_.find('\n', line_start);
      std::string line = s_.substr(line_start, nl == std::string::npos ? nl : nl - line_start);
      line_start = nl == std::string::npos ? s_.size() : nl + 1;
      trim(line);
      if (line.empty() || line[0] == '%') continue;
      parse_line(line, pd, problem_file);
    }
  }

private:
  static void trim(std::string& s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    s.erase(0, i);
  }

  [[noreturn]] static void fail(const std::string& line, const std::string& why) {
    throw DawError(ErrorCode::FormatError, why + " in: " + line);
  }

  static bool strip_terminator(std::string& line, char term) {
    trim(line);
    if (line.empty() || line.back() != term) return false;
    line.pop_back();
    trim(line);
    return true;
  }

  // Splits on top-level commas (no nested parens in this format beyond atoms).
  static std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 0) {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) out.push_back(cur);
    for (auto& p : out) trim(p);
    return out;
  }

  static KTerm parse_term(std::string t) {
    trim(t);
    if (t.empty()) throw DawError(ErrorCode::FormatError, "empty term");
    bool var = std::isupper(static_cast<unsigned char>(t[0]));
    return var ? KTerm::variable(t) : KTerm::constant(t);
  }

  static KAtom parse_atom(std::string s) {
    trim(s);
    std::size_t lp = s.find('(');
    if (lp == std::string::npos) return KAtom{s, {}};
    if (s.back() != ')') throw DawError(ErrorCode::FormatError, "bad atom " + s);
    KAtom a;
    a.pred = s.substr(0, lp);
    trim(a.pred);
    for (const auto& part : split_commas(s.substr(lp + 1, s.size() - lp - 2)))
      a.args.push_back(parse_term(part));
    return a;
  }

  // A body element: literal, default-negated literal, or builtin.
  static void parse_body_elem(std::string s, std::vector<KLit>& posv, std::vector<KLit>& negv,
                              std::vector<KBuiltin>* builtins) {
    trim(s);
    std::size_t eq = s.find("==");
    std::size_t ne = s.find("!=");
    if (builtins && (eq != std::string::npos || ne != std::string::npos)) {
      std::size_t p = std::min(eq, ne);
      KBuiltin b;
      b.lhs = parse_term(s.substr(0, p));
      b.eq = (p == eq);
      b.rhs = parse_term(s.substr(p + 2));
      builtins->push_back(b);
      return;
    }
    bool defneg = false;
    if (s.rfind("not ", 0) == 0) {
      defneg = true;
      s = s.substr(4);
      trim(s);
    }
    KLit l;
    if (!s.empty() && s[0] == '-') {
      l.neg = true;
      s = s.substr(1);
    }
    l.atom = parse_atom(s);
    (defneg ? negv : posv).push_back(l);
  }

  void parse_line(std::string line, PlanningDomain& pd, bool problem_file) {
    if (line.rfind("fluents:", 0) == 0 || line.rfind("actions:", 0) == 0) {
      bool fl = line[0] == 'f';
      std::string rest = line.substr(8);
      if (!strip_terminator(rest, '.')) fail(line, "missing '.'");
      for (const auto& d : split_commas(rest)) {
        std::size_t slash = d.find('/');
        if (slash == std::string::npos) fail(line, "missing arity");
        std::string name = d.substr(0, slash);
        trim(name);
        int arity = std::stoi(d.substr(slash + 1));
        (fl ? pd.fluent_decls : pd.action_decls).emplace_back(name, arity);
      }
      return;
    }
    if (line.rfind("initially:", 0) == 0) {
      std::string rest = line.substr(10);
      if (!strip_terminator(rest, '.')) fail(line, "missing '.'");
      std::vector<KLit> posv, negv;
      parse_body_elem(rest, posv, negv, nullptr);
      if (!negv.empty() || posv.size() != 1) fail(line, "bad initially literal");
      pd.initially.push_back(posv.front());
      return;
    }
    if (line.rfind("goal:", 0) == 0) {
      std::string rest = line.substr(5);
      if (!strip_terminator(rest, '?')) fail(line, "missing '?'");
      for (auto part : split_commas(rest)) {
        bool negd = false;
        if (part.rfind("not ", 0) == 0) {
          negd = true;
          part = part.substr(4);
        }
        pd.goal.emplace_back(parse_atom(part), negd);
      }
      return;
    }
    if (line.rfind("executable ", 0) == 0) {
      std::string rest = line.substr(11);
      if (!strip_terminator(rest, '.')) fail(line, "missing '.'");
      KRule r;
      r.kind = KRule::Kind::Executability;
      std::size_t ifpos = rest.find(" if ");
      std::string head = ifpos == std::string::npos ? rest : rest.substr(0, ifpos);
      KLit h;
      h.atom = parse_atom(head);
      r.head = h;
      if (ifpos != std::string::npos)
        for (const auto& part : split_commas(rest.substr(ifpos + 4)))
          parse_body_elem(part, r.post_pos, r.post_neg, &r.builtins);
      pd.rules.push_back(std::move(r));
      return;
    }
    if (line.rfind("caused ", 0) == 0) {
      std::string rest = line.substr(7);
      if (!strip_terminator(rest, '.')) fail(line, "missing '.'");
      KRule r;
      std::size_t afterpos = rest.find(" after ");
      std::string front = afterpos == std::string::npos ? rest : rest.substr(0, afterpos);
      if (afterpos != std::string::npos)
        for (const auto& part : split_commas(rest.substr(afterpos + 7)))
          parse_body_elem(part, r.pre_pos, r.pre_neg, nullptr);
      std::size_t ifpos = front.find(" if ");
      std::string head = ifpos == std::string::npos ? front : front.substr(0, ifpos);
      trim(head);
      if (head != "false") {
        KLit h;
        if (!head.empty() && head[0] == '-') {
          h.neg = true;
          head = head.substr(1);
        }
        h.atom = parse_atom(head);
        r.head = h;
      }
      if (ifpos != std::string::npos)
        for (const auto& part : split_commas(front.substr(ifpos + 4)))
          parse_body_elem(part, r.post_pos, r.post_neg, &r.builtins);
      pd.rules.push_back(std::move(r));
      return;
    }
    // Bare fact.
    std::string rest = line;
    if (!strip_terminator(rest, '.')) fail(line, "unrecognised statement");
    if (problem_file) fail(line, "facts belong to the domain file");
    pd.background.push_back(parse_atom(rest));
  }

  const std::string& s_;
};

}  // namespace

PlanningDomain parse_k(const std::string& domain_text, const std::string& problem_text) {
  PlanningDomain pd;
  KParser(domain_text).parse_into(pd, false);
  KParser(problem_text).parse_into(pd, true);
  return pd;
}

}  // namespace dawnet
