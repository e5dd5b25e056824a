#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dawnet/cli.hpp"
#include "dawnet/model_io.hpp"
#include "support/builders.hpp"

using namespace dawnet;
using namespace dawnet::testing;

namespace {

const std::string kModels = DAWNET_MODELS_DIR;

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "dawnet_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("parse_model") {
  SUBCASE("the bundled loan model matches the programmatic one") {
    DawNet w = parse_model(kModels + "/loan.model.json");
    CHECK(nets_equal(w, loan_net()));
  }
  SUBCASE("the loan-data variant adds the approval writes") {
    DawNet w = parse_model(kModels + "/loan-data.model.json");
    CHECK(nets_equal(w, loan_net_with_approvals()));
  }
  SUBCASE("guard referencing an undeclared variable") {
    std::string text = read_file(kModels + "/loan.model.json");
    auto pos = text.find("request <= 5000");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 7, "reqest7");
    CHECK_THROWS_AS(parse_model_text(text), DawError);
  }
  SUBCASE("empty file is a schema error") {
    CHECK_THROWS_WITH_AS(parse_model_text(""), doctest::Contains("SchemaError"), DawError);
  }
  SUBCASE("duplicate identifiers are rejected") {
    std::string text = read_file(kModels + "/loan.model.json");
    auto pos = text.find("\"p2\"");
    text.replace(pos, 4, "\"p1\"");
    CHECK_THROWS_AS(parse_model_text(text), DawError);
  }
  SUBCASE("round-trip") {
    DawNet w = parse_model(kModels + "/loan-data.model.json");
    CHECK(nets_equal(parse_model_text(serialize_model(w)), w));
    DawNet n = normalize(loan_net());
    CHECK(nets_equal(parse_model_text(serialize_model(n)), n));
  }
}

TEST_CASE("parse_trace") {
  DawNet w = parse_model(kModels + "/loan-data.model.json");
  SUBCASE("json with empty payloads") {
    Trace tau = parse_trace(kModels + "/t3t7.trace.json", TraceFormat::Json, w);
    REQUIRE(tau.size() == 2);
    CHECK(tau.events[0] == ev("T3"));
    CHECK(tau.events[1] == ev("T7"));
  }
  SUBCASE("json with payload") {
    Trace tau = parse_trace(kModels + "/t7-data.trace.json", TraceFormat::Json, w);
    REQUIRE(tau.size() == 1);
    CHECK(tau.events[0].writes.at("request") == Value::integer(60000));
    CHECK(tau.events[0].writes.at("loan") == Value::integer(50000));
  }
  SUBCASE("empty event list") {
    CHECK(parse_trace_text("[]", TraceFormat::Json, w).empty());
  }
  SUBCASE("xes subset") {
    Trace tau = parse_trace(kModels + "/t3t7.xes", TraceFormat::Xes, w);
    REQUIRE(tau.size() == 2);
    CHECK(tau.events[0].transition == "T3");
    CHECK(tau.events[0].writes.empty());  // lifecycle/timestamps ignored
    CHECK(tau.events[1].transition == "T7");
    CHECK(tau.events[1].writes.at("request") == Value::integer(60000));
  }
  SUBCASE("trace round-trip") {
    Trace tau = parse_trace(kModels + "/t7-data.trace.json", TraceFormat::Json, w);
    CHECK(parse_trace_text(serialize_trace(tau), TraceFormat::Json, w) == tau);
  }
  SUBCASE("value outside the variable domain") {
    CHECK_THROWS_AS(parse_trace_text(R"([{"t":"T4","w":{"request":-3}}])", TraceFormat::Json, w),
                    DawError);
  }
}

TEST_CASE("cli") {
  auto dir = temp_dir();
  auto run = [&](std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(std::move(args), out, err);
    return std::tuple<int, std::string, std::string>(code, out.str(), err.str());
  };

  SUBCASE("validate accepts the loan model") {
    auto [code, out, err] = run({"validate", kModels + "/loan.model.json"});
    CHECK(code == 0);
    CHECK(out.find("1-safe") != std::string::npos);
  }
  SUBCASE("validate rejects a broken model with exit 1") {
    std::string broken = read_file(kModels + "/loan.model.json");
    auto pos = broken.find("[\"p8\", \"T12\"], ");
    REQUIRE(pos != std::string::npos);
    broken.erase(pos, 15);  // p8 loses its outgoing arc
    std::string path = (dir / "broken.model.json").string();
    write_file(path, broken);
    auto [code, out, err] = run({"validate", path});
    CHECK(code == 1);
    CHECK(out.find("violation") != std::string::npos);
  }
  SUBCASE("repair prints the two loan repairs") {
    auto [code, out, err] = run({"repair", kModels + "/loan.model.json",
                                 kModels + "/t3t7.trace.json", "--dedupe", "cf"});
    CHECK(code == 0);
    CHECK(out.find("2 repair(s)") != std::string::npos);
  }
  SUBCASE("repair --json is byte-stable") {
    std::vector<std::string> args{"repair", kModels + "/loan.model.json",
                                  kModels + "/t3t7.trace.json", "--dedupe", "cf", "--json"};
    auto [c1, o1, e1] = run(args);
    auto [c2, o2, e2] = run(args);
    CHECK(c1 == 0);
    CHECK(o1 == o2);
    CHECK(o1.find("\"T10\"") != std::string::npos);
  }
  SUBCASE("inject output re-parses and validates") {
    std::string out_path = (dir / "wt.model.json").string();
    auto [code, out, err] = run({"inject", kModels + "/loan.model.json",
                                 kModels + "/t3t7.trace.json", "-o", out_path});
    REQUIRE(code == 0);
    DawNet wt = parse_model(out_path);
    CHECK(validate_wfnet(wt.net, wt.meta).ok());
    CHECK(wt.net.transitions.count("__trace.t1") == 1);
  }
  SUBCASE("encode writes the file pair") {
    auto [code, out, err] = run({"encode", kModels + "/loan.model.json", "-o", dir.string(),
                                 "--regionize"});
    REQUIRE(code == 0);
    CHECK(std::filesystem::exists(dir / "loan.dom.k"));
    CHECK(std::filesystem::exists(dir / "loan.prob.k"));
    CHECK(read_file((dir / "loan.prob.k").string()).find("goal:") != std::string::npos);
  }
  SUBCASE("check-equiv on the regionized loan model") {
    std::string path = (dir / "loan-regions.model.json").string();
    write_file(path, serialize_model(regionize(parse_model(kModels + "/loan.model.json"))));
    auto [code, out, err] = run({"check-equiv", path, "--depth", "10"});
    CHECK(code == 0);
    CHECK(out.find("equivalent") == 0);
  }
  SUBCASE("interp enumerates plans on the chain") {
    std::string path = (dir / "chain.model.json").string();
    write_file(path, serialize_model(chain_net()));
    auto [code, out, err] = run({"interp", path, "--depth", "3"});
    CHECK(code == 0);
    CHECK(out.find("plan: t") != std::string::npos);
    CHECK(out.find("1 goal-satisfying") != std::string::npos);
  }
  SUBCASE("usage errors exit 2") {
    auto [code, out, err] = run({"repair"});
    CHECK(code == 2);
    auto [code2, out2, err2] = run({"no-such-command"});
    CHECK(code2 == 2);
  }
  SUBCASE("missing file exits 1") {
    auto [code, out, err] = run({"validate", "/nonexistent.model.json"});
    CHECK(code == 1);
    CHECK(err.find("IoError") != std::string::npos);
  }
}

TEST_CASE("malformed model files raise typed errors") {
  auto expect_error = [](const std::string& text) {
    CHECK_THROWS_AS(parse_model_text(text), DawError);
  };
  expect_error("[]");
  expect_error("{\"schema\": 2}");
  expect_error(R"({"schema":1,"domains":{},"variables":{},"places":["a"],
                  "transitions":[],"arcs":[["a"]],"start":"a","end":"a"})");
  expect_error(R"({"schema":1,"domains":{"d":{"values":[]}},"variables":{"x":"d"},
                  "places":["a","b"],"transitions":[{"id":"t","writes":{"x":[1]}}],
                  "arcs":[["a","t"],["t","b"]],"start":"a","end":"b"})");
  expect_error(R"({"schema":1,"domains":{"d":{"bad":true}},"variables":{"x":"d"},
                  "places":["a","b"],"transitions":[{"id":"t"}],
                  "arcs":[["a","t"],["t","b"]],"start":"a","end":"b"})");
  // Not JSON at all.
  expect_error("places: [start]");
}

TEST_CASE("xes reads only the first trace") {
  DawNet w = parse_model(kModels + "/loan.model.json");
  std::string two_traces = R"(<log>
    <trace><event><string key="concept:name" value="T3"/></event></trace>
    <trace><event><string key="concept:name" value="T7"/></event></trace>
  </log>)";
  Trace tau = parse_trace_text(two_traces, TraceFormat::Xes, w);
  REQUIRE(tau.size() == 1);
  CHECK(tau.events[0].transition == "T3");
}
