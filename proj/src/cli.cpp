#include "dawnet/cli.hpp"

#include <cstring>
#include <filesystem>
#include <iostream>
#include <map>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dawnet/kinterp.hpp"
#include "dawnet/model_io.hpp"
#include "dawnet/search.hpp"

namespace dawnet {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string model_stem(const std::string& path) {
  std::string stem = std::filesystem::path(path).filename().string();
  for (const char* suffix : {".json", ".model"}) {
    if (stem.size() > std::strlen(suffix) &&
        stem.compare(stem.size() - std::strlen(suffix), std::string::npos, suffix) == 0)
      stem.resize(stem.size() - std::strlen(suffix));
  }
  return stem;
}

std::string firing_text(const FiringRecord& r) {
  std::string s = r.transition;
  if (!r.written.empty() || !r.deleted.empty()) {
    s += "{";
    bool first = true;
    for (const auto& [v, val] : r.written) {
      if (!first) s += ", ";
      s += v + "=" + to_string(val);
      first = false;
    }
    for (const auto& v : r.deleted) {
      if (!first) s += ", ";
      s += "drop " + v;
      first = false;
    }
    s += "}";
  }
  return s;
}

ordered_json repair_json(const Repair& rep) {
  ordered_json rj;
  rj["control_flow"] = rep.control_flow;
  ordered_json firings = ordered_json::array();
  for (const auto& [rec, state] : rep.repaired.steps) {
    ordered_json fj;
    fj["t"] = rec.transition;
    if (!rec.written.empty()) {
      ordered_json wj = ordered_json::object();
      for (const auto& [v, val] : rec.written)
        wj[v] = val.is_int() ? ordered_json(val.as_int()) : ordered_json(val.as_atom().name);
      fj["w"] = std::move(wj);
    }
    if (!rec.deleted.empty()) fj["d"] = rec.deleted;
    firings.push_back(std::move(fj));
  }
  rj["firings"] = std::move(firings);
  ordered_json align = ordered_json::object();
  for (const auto& [i, j] : rep.trace_alignment.gamma) align[std::to_string(i)] = j;
  rj["alignment"] = std::move(align);
  return rj;
}

int cmd_validate(const std::string& model_path, std::uint32_t k, std::ostream& out) {
  DawNet w = parse_model(model_path, /*validate=*/false);
  bool data_ok = true;
  try {
    w.dm.validate();
  } catch (const DawError& e) {
    out << "violation: " << e.what() << "\n";
    data_ok = false;
  }
  ValidationReport report = validate_wfnet(w.net, w.meta);
  for (const auto& v : report.violations) out << "violation: " << v.node << ": " << v.message << "\n";
  if (!report.ok() || !data_ok) return 1;
  SafenessVerdict sv = check_k_safe(w.net, w.meta, k);
  switch (sv.kind) {
    case SafenessVerdict::Kind::Safe:
      out << "ok: WF-net, " << k << "-safe (" << sv.explored << " markings)\n";
      return 0;
    case SafenessVerdict::Kind::Unsafe: {
      out << "unsafe: marking above " << k << " tokens via";
      for (const auto& t : sv.witness) out << " " << t;
      out << "\n";
      return 1;
    }
    case SafenessVerdict::Kind::Inconclusive:
      out << "inconclusive: state cap hit after " << sv.explored << " markings\n";
      return 1;
  }
  return 1;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Data-aware workflow nets: trace repair and planning encoding"};
  app.require_subcommand(1);

  std::string model_path, trace_path, out_path = "-", out_dir = ".";
  bool xes = false, as_json = false, as_text = false, do_regionize = false;
  std::string dedupe = "none", mode = "regions";
  std::uint32_t max_depth = 64, depth = 8, k = 1;
  std::uint64_t max_solutions = 1000;
  std::int64_t expand_cap = 10000;

  auto* validate = app.add_subcommand("validate", "WF-net conditions and k-safeness");
  validate->add_option("model", model_path)->required();
  validate->add_option("--k", k, "safeness bound (default 1)");

  auto* inject_cmd = app.add_subcommand("inject", "emit the trace workflow as a model file");
  inject_cmd->add_option("model", model_path)->required();
  inject_cmd->add_option("trace", trace_path)->required();
  inject_cmd->add_option("-o,--output", out_path, "output file (- for stdout)");
  inject_cmd->add_flag("--xes", xes, "trace file is XES");

  auto* repair = app.add_subcommand("repair", "enumerate trace repairs");
  repair->add_option("model", model_path)->required();
  repair->add_option("trace", trace_path)->required();
  repair->add_option("--dedupe", dedupe)->check(CLI::IsMember({"none", "cf"}));
  repair->add_option("--mode", mode)->check(CLI::IsMember({"enumerate", "regions"}));
  repair->add_option("--max-depth", max_depth);
  repair->add_option("--max-solutions", max_solutions);
  repair->add_flag("--json", as_json, "stable JSON output");
  repair->add_flag("--text", as_text, "human-readable output (default)");
  repair->add_flag("--xes", xes, "trace file is XES");

  auto* encode_cmd = app.add_subcommand("encode", "emit the planning encoding (.dom.k/.prob.k)");
  encode_cmd->add_option("model", model_path)->required();
  encode_cmd->add_option("-o,--output", out_dir, "output directory");
  encode_cmd->add_flag("--regionize", do_regionize, "abstract interval writes to regions");
  encode_cmd->add_option("--expand", expand_cap, "interval expansion cap");

  auto* interp = app.add_subcommand("interp", "enumerate trajectories of the encoding");
  interp->add_option("model", model_path)->required();
  interp->add_option("--depth", depth)->required();
  interp->add_flag("--regionize", do_regionize);
  interp->add_option("--expand", expand_cap);

  auto* check = app.add_subcommand("check-equiv", "case/trajectory equivalence check");
  check->add_option("model", model_path)->required();
  check->add_option("--depth", depth)->required();
  check->add_option("--expand", expand_cap);

  std::vector<const char*> argv;
  argv.push_back("dawnet");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (*validate) return cmd_validate(model_path, k, out);

    DawNet w = parse_model(model_path);

    if (*inject_cmd) {
      Trace tau = parse_trace(trace_path, xes ? TraceFormat::Xes : TraceFormat::Json, w);
      DawNet wt = inject(normalize(w), tau);
      std::string text = serialize_model(wt, model_stem(model_path) + ".trace");
      if (out_path == "-")
        out << text;
      else
        write_file(out_path, text);
      return 0;
    }

    if (*repair) {
      Trace tau = parse_trace(trace_path, xes ? TraceFormat::Xes : TraceFormat::Json, w);
      SearchConfig cfg;
      cfg.value_mode = mode == "enumerate" ? ValueMode::Enumerate : ValueMode::Regions;
      cfg.dedupe = dedupe == "cf" ? DedupeMode::ControlFlow : DedupeMode::None;
      cfg.max_depth = max_depth;
      cfg.max_solutions = max_solutions;
      RepairResult result = enumerate_repairs(w, tau, cfg);
      if (as_json) {
        ordered_json j;
        ordered_json arr = ordered_json::array();
        for (const Repair& rep : result.repairs) arr.push_back(repair_json(rep));
        j["repairs"] = std::move(arr);
        j["truncated"] = result.truncated;
        out << j.dump(2) << "\n";
      } else {
        for (std::size_t i = 0; i < result.repairs.size(); ++i) {
          out << "repair " << (i + 1) << ":";
          for (const auto& [rec, state] : result.repairs[i].repaired.steps)
            out << " " << firing_text(rec);
          out << "\n";
        }
        out << result.repairs.size() << " repair(s)" << (result.truncated ? " (truncated)" : "")
            << "\n";
      }
      return 0;
    }

    if (*encode_cmd) {
      DawNet prepared = do_regionize ? regionize(w) : expand_intervals(w, expand_cap);
      KText text = serialize(encode(prepared));
      std::filesystem::create_directories(out_dir);
      std::string stem = model_stem(model_path);
      write_file((std::filesystem::path(out_dir) / (stem + ".dom.k")).string(), text.domain);
      write_file((std::filesystem::path(out_dir) / (stem + ".prob.k")).string(), text.problem);
      out << "wrote " << stem << ".dom.k and " << stem << ".prob.k\n";
      return 0;
    }

    if (*interp) {
      DawNet prepared = do_regionize ? regionize(w) : expand_intervals(w, expand_cap);
      GroundProgram gp = ground(encode(prepared));
      PlanState s0 = legal_initial_states(gp).front();
      std::uint64_t total = 0, goal_count = 0;
      std::vector<std::string> current;
      std::function<void(const PlanState&, std::uint32_t)> walk = [&](const PlanState& s,
                                                                      std::uint32_t d) {
        if (goal_satisfied(gp, s)) {
          ++goal_count;
          out << "plan:";
          for (const auto& a : current) out << " " << a;
          out << "\n";
        }
        if (d >= depth) return;
        for (const auto& [a, s2] : successors(gp, s)) {
          ++total;
          current.push_back(gp.name(a));
          walk(s2, d + 1);
          current.pop_back();
        }
      };
      walk(s0, 0);
      out << total << " transition(s) explored, " << goal_count << " goal-satisfying trajectory(ies)\n";
      return 0;
    }

    if (*check) {
      DawNet prepared = expand_intervals(w, expand_cap);
      EquivalenceReport report = check_equivalence(prepared, depth);
      out << (report.ok() ? "equivalent" : "NOT equivalent") << ": " << report.paired_states
          << " paired states, " << report.firings_checked << " firings, " << report.guard_checks
          << " guard checks";
      if (report.guard_mismatches) out << ", " << report.guard_mismatches << " guard mismatches";
      out << "\n";
      if (!report.ok()) {
        out << "counterexample: " << report.counterexample << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const DawError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace dawnet
