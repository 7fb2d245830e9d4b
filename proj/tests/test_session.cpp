// Copyright 2026 The Neuroscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <memory>

#include "doctest.h"
#include "fixtures.hpp"
#include "neuroscope/session.hpp"

using namespace neuroscope;
using neuroscope::testing::TempDir;
using nlohmann::json;

namespace {

struct Reply {
  int status;
  json body;
  std::string raw;
};

class ApiFixture {
 public:
  explicit ApiFixture(std::size_t n = 300) {
    neuroscope::testing::ScenarioOptions opt;
    opt.n_instances = n;
    gen_ = neuroscope::testing::make_scenario_bundle(tmp_.path(), opt);
    bundle_ = std::make_shared<const Bundle>(load_bundle(tmp_.path()));
    session_ = std::make_unique<Session>(bundle_);
  }

  Reply call(const std::string& method, const std::string& path, const json& body = nullptr,
             std::map<std::string, std::string> query = {}) {
    ApiRequest req{method, path, std::move(query), body.is_null() ? "" : body.dump()};
    ApiResponse res = session_->handle(req);
    return {res.status, json::parse(res.body), res.body};
  }

  Session& session() { return *session_; }
  const Bundle& bundle() const { return *bundle_; }
  const neuroscope::testing::GeneratedBundle& gen() const { return gen_; }

 private:
  TempDir tmp_;
  neuroscope::testing::GeneratedBundle gen_;
  std::shared_ptr<const Bundle> bundle_;
  std::unique_ptr<Session> session_;
};

void check_error(const Reply& r, int status, const std::string& code) {
  CHECK(r.status == status);
  CHECK(r.body["code"] == code);
  CHECK(r.body["message"].is_string());
}

json small_projection(std::uint64_t seed, std::size_t iterations = 120) {
  return {{"config",
           {{"perplexity", 10},
            {"iterations", iterations},
            {"exaggeration_iterations", 50},
            {"momentum_switch_iteration", 50},
            {"seed", seed}}}};
}

}  // namespace

TEST_SUITE("session") {

TEST_CASE("graph and nodes") {
  ApiFixture api;
  const Reply g = api.call("GET", "/api/graph");
  CHECK(g.status == 200);
  CHECK(g.body["nodes"].size() == 21);
  CHECK(g.body["edges"].size() == api.bundle().graph.edges().size());
  CHECK(parse_graph(g.raw) == api.bundle().graph);
  CHECK(g.body["topo_order"].size() == 21);

  const Reply nodes = api.call("GET", "/api/nodes");
  REQUIRE(nodes.body.size() == 3);
  CHECK(nodes.body[0]["id"] == "concat_out");
  CHECK(nodes.body[1]["neurons"] == 128);
}

TEST_CASE("matrix, pins and subsets") {
  ApiFixture api;
  Reply m = api.call("GET", "/api/nodes/fc_out/matrix");
  CHECK(m.status == 200);
  CHECK(m.body["row_keys"].size() == 6);
  CHECK(m.body["row_keys"][0] == "subset:ABBR");
  CHECK(m.body["values"][0].size() == 128);
  CHECK(m.body["column_order"].size() == 128);
  CHECK(m.body["empty_rows"].empty());
  CHECK(api.call("GET", "/api/nodes/fc_out/matrix").raw == m.raw);

  for (int i : {38, 47, 120, 126}) {
    const Reply pin = api.call("POST", "/api/pins", {{"node", "fc_out"}, {"instance", i}});
    CHECK(pin.status == 200);
  }
  m = api.call("GET", "/api/nodes/fc_out/matrix");
  REQUIRE(m.body["row_keys"].size() == 10);
  CHECK(m.body["row_keys"][9] == "instance:126");
  // Pins are per node.
  CHECK(api.call("GET", "/api/nodes/concat_out/matrix").body["row_keys"].size() == 6);

  const Reply created = api.call("POST", "/api/subsets",
                                 {{"name", "what is"}, {"predicate", "text starts_with 'What is'"}});
  CHECK(created.status == 201);
  CHECK(created.body["id"] == "user-1");
  CHECK(created.body["row"] == 6);
  CHECK(created.body["predicate"] == "text starts_with 'What is'");
  m = api.call("GET", "/api/nodes/fc_out/matrix");
  REQUIRE(m.body["row_keys"].size() == 11);
  CHECK(m.body["row_keys"][6] == "subset:user-1");

  const Reply sorted = api.call("GET", "/api/nodes/fc_out/matrix", nullptr,
                                {{"sort_by", "subset:LOC"}});
  CHECK(sorted.status == 200);
  const json& order = sorted.body["column_order"];
  const json& loc = sorted.body["values"][4];
  for (std::size_t k = 1; k < order.size(); ++k) {
    CHECK(loc[order[k - 1].get<std::size_t>()].get<double>() >=
          loc[order[k].get<std::size_t>()].get<double>());
  }

  const Reply members = api.call("GET", "/api/subsets/NUM/members");
  std::vector<std::size_t> expected;
  for (std::size_t i = 0; i < api.gen().n(); ++i) {
    if (api.gen().true_class[i] == 5) expected.push_back(i);
  }
  CHECK(members.body["members"].get<std::vector<std::size_t>>() == expected);

  CHECK(api.call("GET", "/api/subsets").body.size() == 7);
  CHECK(api.call("DELETE", "/api/subsets/user-1").status == 200);
  CHECK(api.call("GET", "/api/subsets").body.size() == 6);
  CHECK(api.call("DELETE", "/api/pins", {{"node", "fc_out"}, {"instance", 38}}).body["pins"] ==
        json({47, 120, 126}));

  const Reply row = api.call("GET", "/api/nodes/fc_out/instance_row/3");
  CHECK(row.body["values"].size() == 128);
  CHECK(row.body["values"][0].get<double>() ==
        doctest::Approx(api.gen().row("fc_out", 3)[0]).epsilon(1e-8));
}

TEST_CASE("empty subsets are flagged") {
  ApiFixture api;
  const Reply created = api.call("POST", "/api/subsets", {{"predicate", "score.NUM > 2"}});
  CHECK(created.body["count"] == 0);
  const Reply m = api.call("GET", "/api/nodes/softmax_out/matrix");
  CHECK(m.body["empty_rows"] == json({6}));
  const Reply bad = api.call("GET", "/api/nodes/softmax_out/matrix", nullptr,
                             {{"sort_by", "subset:user-1"}});
  check_error(bad, 400, "EmptyAnchorRow");
}

TEST_CASE("panel, instances and sample") {
  ApiFixture api;
  const Reply panel = api.call("GET", "/api/panel");
  REQUIRE(panel.body["groups"].size() == 6);
  CHECK(panel.body["groups"][5]["class"] == "NUM");
  CHECK_FALSE(panel.body["groups"][5]["misclassified"].empty());

  const Reply inst = api.call("GET", "/api/instances/120");
  CHECK(inst.body["true_label"] == "NUM");
  CHECK(inst.body["predicted_label"] == "DESC");
  CHECK(inst.body["text"].is_string());
  CHECK(inst.body["scores"].size() == 6);

  const Reply sample = api.call("POST", "/api/sample",
                                {{"budget", 60}, {"seed", 5}, {"pinned", {"120", "126"}}});
  CHECK(sample.status == 200);
  const auto s = sample.body["sample"].get<std::vector<std::size_t>>();
  CHECK(s.size() == 60);
  CHECK(std::binary_search(s.begin(), s.end(), 120));
  CHECK(api.call("GET", "/api/sample").body == sample.body);
  CHECK(api.session().sample() == s);
}

TEST_CASE("documented error codes") {
  ApiFixture api;
  check_error(api.call("GET", "/api/nodes/bogus/matrix"), 404, "UnknownNode");
  check_error(api.call("GET", "/api/nodes/bogus/instance_row/0"), 404, "UnknownNode");
  check_error(api.call("GET", "/api/nodes/fc_out/instance_row/300"), 404, "IndexOutOfRange");
  check_error(api.call("GET", "/api/nodes/fc_out/instance_row/abc"), 404, "IndexOutOfRange");
  check_error(api.call("GET", "/api/instances/300"), 404, "IndexOutOfRange");

  const Reply syntax = api.call("POST", "/api/subsets", {{"predicate", "text starts_with"}});
  check_error(syntax, 400, "SyntaxError");
  CHECK(syntax.body["position"] == 16);
  check_error(api.call("POST", "/api/subsets", {{"predicate", "score.NUM >= 'abc'"}}), 400,
              "TypeMismatch");
  check_error(api.call("POST", "/api/subsets", {{"predicate", "feature.age > 1"}}), 400,
              "UnknownField");
  check_error(api.call("POST", "/api/subsets", {{"name", "x"}}), 400, "InvalidArgument");
  const ApiResponse malformed = api.session().handle({"POST", "/api/subsets", {}, "{oops"});
  CHECK(malformed.status == 400);
  CHECK(json::parse(malformed.body)["code"] == "SyntaxError");

  check_error(api.call("DELETE", "/api/subsets/nope"), 404, "UnknownSubset");
  check_error(api.call("GET", "/api/subsets/nope/members"), 404, "UnknownSubset");
  check_error(api.call("GET", "/api/nodes/fc_out/matrix", nullptr, {{"sort_by", "subset:nope"}}),
              400, "UnknownRow");
  check_error(api.call("GET", "/api/nodes/fc_out/matrix", nullptr, {{"sort_by", "garbage"}}),
              400, "UnknownRow");
  check_error(api.call("POST", "/api/pins", {{"node", "bogus"}, {"instance", 1}}), 404,
              "UnknownNode");
  check_error(api.call("POST", "/api/pins", {{"node", "fc_out"}, {"instance", 999}}), 404,
              "IndexOutOfRange");
  check_error(api.call("DELETE", "/api/pins", {{"node", "fc_out"}, {"instance", 1}}), 404,
              "UnknownPin");
  check_error(api.call("POST", "/api/sample", {{"pinned", {"nobody"}}}), 400, "UnknownPinnedId");
  check_error(api.call("POST", "/api/sample", {{"budget", 1}, {"pinned", {"1", "2"}}}), 400,
              "BudgetTooSmall");
  check_error(api.call("GET", "/api/projections/job-99"), 404, "UnknownJob");
  check_error(api.call("POST", "/api/nodes/fc_out/projection", {{"perplexity", 200}}), 400,
              "PerplexityInfeasible");
  check_error(api.call("POST", "/api/nodes/bogus/projection"), 404, "UnknownNode");
  check_error(api.call("GET", "/api/nothing"), 404, "RouteNotFound");
  check_error(api.call("PUT", "/api/graph"), 404, "RouteNotFound");
  check_error(api.call("GET", "/elsewhere"), 404, "RouteNotFound");
}

TEST_CASE("projection jobs") {
  ApiFixture api(200);
  const Reply first = api.call("POST", "/api/nodes/fc_out/projection", small_projection(1));
  CHECK(first.status == 202);
  CHECK(first.body["coalesced"] == false);
  const std::string id = first.body["job_id"];
  const Reply second = api.call("POST", "/api/nodes/fc_out/projection", small_projection(1));
  CHECK(second.body["job_id"] == id);
  CHECK(second.body["coalesced"] == true);

  // Reads are answered while the job may still be running.
  CHECK(api.call("GET", "/api/graph").status == 200);

  REQUIRE(api.session().wait_for_job(id, 120));
  const Reply done = api.call("GET", "/api/projections/" + id);
  CHECK(done.body["status"] == "done");
  CHECK(done.body["coords"].size() == 200);
  CHECK(done.body["coords"][0].size() == 2);
  CHECK(done.body["point_ids"].size() == 200);
  CHECK(done.body["kl_final"].is_number());
  CHECK(api.call("GET", "/api/projections/" + id).raw == done.raw);

  // A finished job is still reused for the same key.
  CHECK(api.call("POST", "/api/nodes/fc_out/projection", small_projection(1)).body["job_id"] == id);
  const Reply other = api.call("POST", "/api/nodes/fc_out/projection", small_projection(2));
  CHECK(other.body["job_id"] != id);
  REQUIRE(api.session().wait_for_job(other.body["job_id"], 120));

  // Same seed on a fresh session gives identical coordinates.
  ApiFixture twin(200);
  const Reply t = twin.call("POST", "/api/nodes/fc_out/projection", small_projection(1));
  REQUIRE(twin.session().wait_for_job(t.body["job_id"], 120));
  CHECK(twin.call("GET", "/api/projections/" + t.body["job_id"].get<std::string>())
            .body["coords"] == done.body["coords"]);
}

TEST_CASE("projection cancellation") {
  ApiFixture api(200);
  const Reply started =
      api.call("POST", "/api/nodes/concat_out/projection", small_projection(3, 100000));
  const std::string id = started.body["job_id"];
  CHECK(api.call("DELETE", "/api/projections/" + id).status == 200);
  REQUIRE(api.session().wait_for_job(id, 60));
  const Reply r = api.call("GET", "/api/projections/" + id);
  CHECK(r.body["status"] == "cancelled");
  CHECK(r.body["error"]["code"] == "Cancelled");
  // A cancelled job is not reused.
  CHECK(api.call("POST", "/api/nodes/concat_out/projection", small_projection(3, 100000))
            .body["job_id"] != id);
}

TEST_CASE("export snapshot") {
  ApiFixture api;
  api.call("POST", "/api/pins", {{"node", "fc_out"}, {"instance", 38}});
  const std::string text = api.session().export_snapshot();
  CHECK(text == api.session().export_snapshot());
  const json doc = json::parse(text);
  CHECK(doc["graph"]["nodes"].size() == 21);
  CHECK(doc["matrices"].size() == 3);
  CHECK(doc["matrices"]["fc_out"]["row_keys"].size() == 7);
  CHECK(doc["subsets"].size() == 6);
  CHECK(doc["instances"].size() == doc["sample"].size());
  CHECK(doc["panel"]["groups"].size() == 6);
}

}  // TEST_SUITE
