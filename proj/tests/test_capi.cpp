#include "fapres/fapres.h"

#include <doctest.h>

#include <string>
#include <vector>

namespace {

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s ? s : "";
  fap_string_free(s);
  return out;
}

struct Step {
  uint64_t index;
  std::string tuple;
  int rule;
};

void collect(void* user, uint64_t index, const char* tuple, int rule) {
  static_cast<std::vector<Step>*>(user)->push_back({index, tuple, rule});
}

}  // namespace

TEST_CASE("walker through the C surface") {
  fap_walker* w = nullptr;
  REQUIRE(fap_walker_new(0, &w) == FAP_OK);
  std::vector<Step> steps;
  REQUIRE(fap_walker_run(w, 23, collect, &steps) == FAP_OK);
  REQUIRE(steps.size() == 24);
  CHECK(steps.front().tuple == "0,0,0,1");
  CHECK(steps.front().rule == 0);
  CHECK(steps.back().index == 23);
  CHECK(steps.back().tuple == "0,4,0,0");
  CHECK(steps.back().rule == 2);
  CHECK(fap_walker_index(w) == 23);
  CHECK(fap_walker_degraded(w) == 0);
  char* json = nullptr;
  REQUIRE(fap_walker_milestones_json(w, &json) == FAP_OK);
  CHECK(take(json).find("\"steps\"") != std::string::npos);
  // continuing does not repeat the origin
  steps.clear();
  REQUIRE(fap_walker_run(w, 1, collect, &steps) == FAP_OK);
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].index == 24);
  fap_walker_free(w);
}

TEST_CASE("orbit arithmetic and errors") {
  char* out = nullptr;
  REQUIRE(fap_orbit_index("0,4,0,0", 0, &out) == FAP_OK);
  CHECK(take(out) == "23");
  REQUIRE(fap_orbit_index("8,1,0,0", 1024, &out) == FAP_OK);
  CHECK(take(out).back() == '+');
  REQUIRE(fap_orbit_tuple_at("23", &out) == FAP_OK);
  CHECK(take(out) == "0,4,0,0");
  CHECK(fap_orbit_index("1,0,0,0", 0, &out) == FAP_ERR_INVALID_ARGUMENT);
  CHECK(std::string(fap_last_error()).find("not in V") != std::string::npos);
  CHECK(fap_orbit_index("1,2", 0, &out) == FAP_ERR_MALFORMED);
  CHECK(fap_orbit_index(nullptr, 0, &out) == FAP_ERR_INVALID_ARGUMENT);
  REQUIRE(fap_orbit_tuple_at("7", &out) == FAP_OK);
  CHECK(take(out) == "1,1,0,0");
  CHECK(std::string(fap_last_error()).empty());
  CHECK(std::string(fap_status_name(FAP_ERR_BUDGET)) == "budget exceeded");
}

TEST_CASE("tables") {
  char* out = nullptr;
  REQUIRE(fap_r_table(2, "enumerate", nullptr, 0, FAP_FORMAT_CSV, &out) == FAP_OK);
  const std::string r = take(out);
  CHECK(r.rfind("n,r,exact,witness\n0,0,1,", 0) == 0);
  CHECK(r.find("\n1,7,1,") != std::string::npos);
  CHECK(fap_r_table(2, "walk", nullptr, 0, FAP_FORMAT_CSV, &out) == FAP_ERR_INVALID_ARGUMENT);
  CHECK(fap_r_table(2, "guess", nullptr, 0, FAP_FORMAT_CSV, &out) == FAP_ERR_NOT_FOUND);

  REQUIRE(fap_s_table("base-2", "base-2", 3, nullptr, nullptr, 0, FAP_FORMAT_CSV, &out) == FAP_OK);
  CHECK(take(out) == "n,s,exact,witness\n0,0,1,\n1,1,1,1\n2,2,1,1 1\n3,3,1,1 1 1\n");
  REQUIRE(fap_s_table("base-4", "base-2", 2, nullptr, nullptr, 0, FAP_FORMAT_JSON, &out) == FAP_OK);
  CHECK(take(out).find("\"s\": \"4\"") != std::string::npos);
  CHECK(fap_s_table("octal", "base-2", 2, nullptr, nullptr, 0, FAP_FORMAT_CSV, &out) == FAP_ERR_NOT_FOUND);
  CHECK(fap_s_table("base-2", "base-2", 2, nullptr, nullptr, 0, FAP_FORMAT_DOT, &out) == FAP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("automaton export") {
  char* out = nullptr;
  REQUIRE(fap_dfa_export("language", FAP_FORMAT_JSON, &out) == FAP_OK);
  CHECK(take(out).find("\"states\"") != std::string::npos);
  REQUIRE(fap_dfa_export("base-2:addition", FAP_FORMAT_DOT, &out) == FAP_OK);
  CHECK(take(out).rfind("digraph", 0) == 0);
  REQUIRE(fap_dfa_export("increment", FAP_FORMAT_DOT, &out) == FAP_OK);
  take(out);
  CHECK(fap_dfa_export("unary:addition", FAP_FORMAT_JSON, &out) == FAP_ERR_NOT_FOUND);
  CHECK(fap_dfa_export("nothing", FAP_FORMAT_JSON, &out) == FAP_ERR_NOT_FOUND);
  CHECK(fap_dfa_export("language", FAP_FORMAT_CSV, &out) == FAP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("machines") {
  fap_machine* m = nullptr;
  REQUIRE(fap_machine_sample(&m) == FAP_OK);
  char* out = nullptr;
  int halted = -1;
  REQUIRE(fap_machine_step(m, "q0 1 1", &out, &halted) == FAP_OK);
  CHECK(halted == 0);
  CHECK(take(out) == "0 q0 1");
  REQUIRE(fap_machine_step(m, "q1 _", &out, &halted) == FAP_OK);
  CHECK(halted == 1);
  CHECK(out == nullptr);
  REQUIRE(fap_machine_encode(m, "g g g q0 _", nullptr, &out) == FAP_OK);
  const std::string packed = take(out);
  CHECK(packed.find("q0 _") != std::string::npos);
  REQUIRE(fap_machine_decode(m, packed.c_str(), "g", &out) == FAP_OK);
  CHECK(take(out) == "g g g q0 _");
  CHECK(fap_machine_step(m, "q0 x", &out, &halted) != FAP_OK);
  REQUIRE(fap_machine_to_json(m, &out) == FAP_OK);
  const std::string json = take(out);
  fap_machine* back = nullptr;
  REQUIRE(fap_machine_from_json(json.c_str(), &back) == FAP_OK);
  fap_machine_free(back);
  CHECK(fap_machine_from_json("{", &back) != FAP_OK);
  fap_machine_free(m);
}

TEST_CASE("groups") {
  fap_group* g = nullptr;
  REQUIRE(fap_group_new("bs:1,2", &g) == FAP_OK);
  char *name = nullptr, *s = nullptr, *c = nullptr;
  REQUIRE(fap_group_name(g, &name) == FAP_OK);
  CHECK(take(name) == "BS(1,2)");
  REQUIRE(fap_group_encode(g, "t t t a", &s, &c) == FAP_OK);
  CHECK(take(s) == "t t t 1");
  const std::string packed = take(c);
  char* back = nullptr;
  REQUIRE(fap_group_decode(g, packed.c_str(), 1, &back) == FAP_OK);
  CHECK(take(back) == "t t t 1");
  REQUIRE(fap_group_decode(g, "t t t 1", 0, &back) == FAP_OK);
  CHECK(take(back) == packed);
  CHECK(fap_group_decode(g, "t 1 t", 0, &back) == FAP_ERR_MALFORMED);
  fap_group_free(g);
  CHECK(fap_group_new("bs:2,2", &g) == FAP_ERR_INVALID_ARGUMENT);
  CHECK(fap_group_new("lamplighter", &g) == FAP_ERR_NOT_FOUND);
}

TEST_CASE("verification entry point") {
  CHECK(std::string(fap_verify_suites()) == "props lemmas automata presburger tm groups");
  fap_verify_options o;
  fap_verify_options_init(&o);
  CHECK(o.walk_budget == 1000000);
  char* report = nullptr;
  int passed = 0;
  REQUIRE(fap_verify("props", &o, &report, &passed) == FAP_OK);
  CHECK(passed == 1);
  CHECK(take(report).rfind("PASS props/", 0) == 0);
  CHECK(fap_verify("everything", &o, &report, &passed) == FAP_ERR_NOT_FOUND);
}
