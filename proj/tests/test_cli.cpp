#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include <flexcross/angles.hpp>

#include "commands.hpp"
#include "config.hpp"

using namespace flexcross;
using namespace flexcross::cli;
using nlohmann::json;

namespace {

std::string config_path(const std::string& name) { return std::string(FLEXCROSS_CONFIG_DIR) + "/" + name; }

const char* kMinimal = R"({
  "schema_version": 1, "space": "spherical", "n": 3,
  "G": [[1,0,0],[0,1,0],[0,0,1]], "lambda": [1,2,4], "s": [-1,-1,-1], "s_prime": [1,1,1]
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

int run(const std::string& args, std::string* out = nullptr) {
  const std::string tmp = std::filesystem::temp_directory_path() / "flexcross_cli_test.out";
  const int raw = std::system((std::string(FLEXCROSS_BINARY) + " " + args + " > " + tmp + " 2>&1").c_str());
  if (out) {
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
  }
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config parsing") {
    const RunConfig cfg = parse_config_text(kMinimal, "inline");
    CHECK(cfg.data.n() == 3);
    CHECK(cfg.seed == kDefaultSeed);
    CHECK(cfg.u_grid.size() == 65);
    CHECK(cfg.u_grid.back().infinite);
    CHECK(cfg.tol["edge"] == 1e-9);
  }

  TEST_CASE("config errors") {
    auto code_of = [](const std::string& text) {
      try {
        parse_config_text(text, "inline");
      } catch (const Error& e) {
        return std::make_pair(e.code(), std::string(e.what()));
      }
      return std::make_pair(ErrorCode::io, std::string("no error"));
    };
    auto [c1, m1] = code_of(replace(kMinimal, "[1,2,4]", "[2,1,4]"));
    CHECK(c1 == ErrorCode::invalid_data);
    CHECK(m1.find("strictly increasing") != std::string::npos);
    auto [c2, m2] = code_of(replace(kMinimal, "\"n\": 3,", "\"n\": 3"));
    CHECK(c2 == ErrorCode::input);
    CHECK(m2.find("line") != std::string::npos);
    auto [c3, m3] = code_of(replace(kMinimal, "\"lambda\": [1,2,4]", "\"lambda\": [1,2]"));
    CHECK(c3 == ErrorCode::input);
    CHECK(m3.find("lambda") != std::string::npos);
    std::string euclid = replace(kMinimal, "spherical", "euclidean");
    euclid = replace(euclid, "[[1,0,0],[0,1,0],[0,0,1]]", "[[1,0.5477225575051661,0],[0.5477225575051661,1,0],[0,0,1]]");  // det 0.7
    auto [c4, m4] = code_of(euclid);
    CHECK(c4 == ErrorCode::invalid_data);
    CHECK(m4.find("det") != std::string::npos);
    auto [c5, m5] = code_of(replace(kMinimal, "\"s_prime\"", "\"tolerances\": {\"bogus\": 1}, \"s_prime\""));
    CHECK(c5 == ErrorCode::input);
  }

  TEST_CASE("euclidean data with one product sign is rejected") {
    RunConfig cfg = parse_config(config_path("euclidean_n3.json"));
    json doc = json::parse(config_to_json(cfg));
    doc["s_prime"] = json::array();
    for (int v : cfg.data.s) doc["s_prime"].push_back(-v);
    CHECK_THROWS_AS(parse_config_text(doc.dump(), "inline"), Error);
  }

  TEST_CASE("grid tokens") {
    CHECK(parse_param("inf").infinite);
    CHECK(parse_param("-inf").infinite);
    CHECK(parse_param("0.25").value == 0.25);
    CHECK_THROWS_AS(parse_param("abc"), Error);
    const RunConfig cfg = parse_config_text(replace(kMinimal, "\"n\": 3,", R"("n": 3, "u_grid": [1, "-inf", 0, "inf", -2],)"), "x");
    CHECK(cfg.u_grid.size() == 4);
    CHECK(parse_seed("0x5EED") == 0x5EED);
  }

  TEST_CASE("config round trip") {
    const RunConfig a = parse_config(config_path("hyperbolic_n3.json"));
    const RunConfig b = parse_config_text(config_to_json(a), "roundtrip");
    CHECK((a.data.G - b.data.G).norm() == 0.0);
    CHECK((a.data.lambda - b.data.lambda).norm() == 0.0);
    CHECK(a.data.s == b.data.s);
    CHECK(a.seed == b.seed);
  }

  TEST_CASE("verify passes on the bundled configurations") {
    for (const char* name : {"spherical_n3.json", "euclidean_n3.json", "hyperbolic_n3.json", "euclidean_n4.json"}) {
      CAPTURE(name);
      const VerificationReport r = cmd_verify(parse_config(config_path(name)));
      for (const CheckRecord& c : r.checks) {
        CAPTURE(c.name);
        CAPTURE(c.note);
        CHECK(c.status != Status::fail);
        CHECK(c.status != Status::inconclusive);
      }
      CHECK(exit_status(r, false) == 0);
    }
  }

  TEST_CASE("non-constant volume is flagged for the all-minus pattern") {
    const VerificationReport r = cmd_verify(parse_config_text(kMinimal, "inline"));
    bool flagged = false;
    for (const CheckRecord& c : r.checks)
      if (c.name == "volume non-constant") flagged = c.status == Status::info && std::abs(c.residual) > 0.1;
    CHECK(flagged);
  }

  TEST_CASE("exit status contract") {
    VerificationReport r;
    r.checks.push_back({"a", "x", Status::pass, 0, 1, ""});
    CHECK(exit_status(r, false) == 0);
    r.checks.push_back({"b", "x", Status::inconclusive, 0, 1, ""});
    CHECK(exit_status(r, false) == 3);
    CHECK(exit_status(r, true) == 0);
    r.checks.push_back({"c", "x", Status::fail, 2, 1, ""});
    CHECK(exit_status(r, true) == 1);
    CHECK(json::parse(r.to_json())["failed"] == true);
  }

  TEST_CASE("trajectory table and round trip") {
    const RunConfig cfg = parse_config(config_path("spherical_n3.json"));
    const Table t = cmd_trajectory(cfg);
    CHECK(t.rows.size() == 65);
    const Trajectory tr = read_trajectory(t.to_csv());
    REQUIRE(tr.rows.size() == 65);
    FamilyPtr fam = build(cfg.data);
    const auto rs = ridges(3);
    for (const TrajectoryRow& row : tr.rows) {
      const Configuration c = configuration(fam, row.u);
      for (int id = 0; id < 6; ++id)
        for (int j = 0; j < 4; ++j) CHECK(row.values[id * 4 + j] == c.vertex(id)[j]);  // bit-identical
      if (row.u.infinite || row.u.value == 0)
        for (int id = 0; id < 6; ++id) CHECK(std::abs(row.values[24 + id]) < 1e-10);
      for (size_t r = 0; r < rs.size(); ++r)
        CHECK(angle_distance(row.values[30 + r], predicted_dihedral(cfg.data, rs[r], row.u)) < 1e-8);
    }
    CHECK(cmd_trajectory(cfg).to_csv() == t.to_csv());
  }

  TEST_CASE("volume tables") {
    const RunConfig s = parse_config_text(kMinimal, "inline");
    RunConfig one = s;
    one.u_grid = {FlexParam::finite(1)};
    const Table cf = cmd_volume(one, VolumeSelection::closed_form);
    const double sig = 2 * M_PI * M_PI;
    CHECK(std::stod(cf.rows[0][1]) == doctest::Approx(sig / 2 - sig / M_PI * std::atan(4.0)).epsilon(1e-12));

    RunConfig few = s;
    few.u_grid = {FlexParam::finite(0), FlexParam::finite(0.5), FlexParam::inf()};
    const Table all = cmd_volume(few, VolumeSelection::all);
    const size_t n = all.header.size();
    for (const auto& row : all.rows)
      for (size_t c = n - 3; c < n; ++c) CHECK(std::stod(row[c]) < 1e-6);

    RunConfig e = parse_config(config_path("euclidean_n3.json"));
    e.u_grid = {FlexParam::finite(0.3), FlexParam::finite(-2)};
    for (const auto& row : cmd_volume(e, VolumeSelection::decomposition).rows) CHECK(std::abs(std::stod(row[1])) < 1e-9);
    CHECK_THROWS_AS(cmd_volume(e, VolumeSelection::schlafli), Error);
  }

  TEST_CASE("flat report") {
    const CommandOutput o = cmd_flat(parse_config(config_path("spherical_n3.json")));
    CHECK(o.status == 0);
    const json doc = json::parse(o.text);
    CHECK(doc["flat_positions"].size() == 2);
    CHECK(doc["parity_match"] == true);
    CHECK(doc.contains("O_distance"));
    for (const json& k : doc["flat_positions"][0]["per_k"]) CHECK(k["great_sphere"] == false);
    CHECK(doc["flat_positions"][0]["case"] == "concentric-spheres-or-orispheres");
  }

  TEST_CASE("embed report") {
    const RunConfig cfg = parse_config_text(kMinimal, "inline");
    json small = json::parse(cmd_embed(cfg, FlexParam::finite(1e-3), false).text);
    CHECK(small["verdict"] == "embedded");
    json far = json::parse(cmd_embed(cfg, FlexParam::inf(), false).text);
    CHECK(far["verdict"] == "self-intersecting");
    CHECK(far.contains("witness"));
    const CommandOutput cert = cmd_embed(cfg, FlexParam::finite(1e-3), true);
    CHECK(cert.status == 0);
    CHECK(json::parse(cert.text)["certificate"]["pass"] == true);
  }

  TEST_CASE("mesh export") {
    const RunConfig cfg = parse_config(config_path("euclidean_n3.json"));
    std::istringstream in(cmd_mesh(cfg, FlexParam::finite(0.7), Projection::automatic));
    std::string magic, comment;
    std::getline(in, magic);
    std::getline(in, comment);
    CHECK(magic == "OFF");
    CHECK(comment.rfind("# projection", 0) == 0);
    int nv, nf, ne;
    in >> nv >> nf >> ne;
    CHECK(nv == 6);
    CHECK(nf == 8);
    for (int i = 0; i < 3 * nv; ++i) {
      double x;
      in >> x;
    }
    std::map<std::pair<int, int>, int> directed;
    for (int f = 0; f < nf; ++f) {
      int three, a, b, c;
      in >> three >> a >> b >> c;
      ++directed[{a, b}];
      ++directed[{b, c}];
      ++directed[{c, a}];
    }
    CHECK(directed.size() == 24);
    for (const auto& [e, count] : directed) {
      CHECK(count == 1);
      CHECK(directed.count({e.second, e.first}) == 1);
    }
  }

  TEST_CASE("stereographic image of the flat position lies on one sphere") {
    const RunConfig cfg = parse_config(config_path("spherical_n3.json"));
    std::istringstream in(cmd_mesh(cfg, FlexParam::finite(0), Projection::stereographic));
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    int nv, nf, ne;
    in >> nv >> nf >> ne;
    Mat P(nv, 3);
    for (int i = 0; i < nv; ++i) in >> P(i, 0) >> P(i, 1) >> P(i, 2);
    // the equator is orthogonal to the pole and projects onto the unit sphere
    for (int i = 0; i < nv; ++i) CHECK(P.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(cmd_mesh(parse_config(config_path("spherical_n4.json")), FlexParam::finite(0), Projection::automatic),
                    Error);
    CHECK_THROWS_AS(cmd_mesh(cfg, FlexParam::finite(0), Projection::klein), Error);
  }

  TEST_CASE("custom stereographic pole keeps the flat image cospherical") {
    const RunConfig cfg = parse_config(config_path("spherical_n3.json"));
    const Vec pole = parse_vector("0.3,-0.2,0.5,0.7");
    std::istringstream in(cmd_mesh(cfg, FlexParam::finite(0), Projection::stereographic, pole));
    std::string line;
    std::getline(in, line);
    CHECK(line == "OFF");
    std::getline(in, line);
    int nv, nf, ne;
    in >> nv >> nf >> ne;
    // |p|^2 = 2 c·p + k for a sphere with centre c
    Mat A(nv, 4);
    Vec rhs(nv);
    for (int i = 0; i < nv; ++i) {
      Vec p(3);
      in >> p[0] >> p[1] >> p[2];
      A.row(i) << 2 * p[0], 2 * p[1], 2 * p[2], 1.0;
      rhs[i] = p.squaredNorm();
    }
    const Vec sol = A.colPivHouseholderQr().solve(rhs);
    CHECK((A * sol - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));

    const std::string by_default = cmd_mesh(cfg, FlexParam::finite(0.4), Projection::stereographic);
    const std::string explicit_pole = cmd_mesh(cfg, FlexParam::finite(0.4), Projection::stereographic,
                                               Vec(-build(cfg.data)->frame.axis));
    CHECK(by_default.substr(by_default.find('\n', 4)) == explicit_pole.substr(explicit_pole.find('\n', 4)));
    CHECK_THROWS_AS(parse_vector("1,,x"), Error);
    CHECK_THROWS_AS(cmd_mesh(cfg, FlexParam::finite(0), Projection::stereographic, parse_vector("1,0")), Error);
  }

  TEST_CASE("atomic writes") {
    const std::string path = std::filesystem::temp_directory_path() / "flexcross_atomic.txt";
    write_atomic(path, "one");
    write_atomic(path, "two");
    std::ifstream in(path);
    std::string s;
    in >> s;
    CHECK(s == "two");
    CHECK_THROWS_AS(write_atomic("/nonexistent-dir/x.txt", "x"), Error);
  }

  TEST_CASE("binary exit codes and seed precedence") {
    const std::string s3 = config_path("spherical_n3.json");
    CHECK(run("verify " + s3) == 0);
    CHECK(run("verify /nonexistent.json") == 2);
    CHECK(run("frobnicate " + s3) == 2);
    CHECK(run("mesh " + config_path("spherical_n4.json")) == 2);
    CHECK(run("verify " + s3 + " --tol edge=1e-300") == 1);
    CHECK(run("verify " + s3 + " --tol nosuch=1") == 2);
    std::string a, b, c;
    run("trajectory " + s3 + " --seed 7", &a);
    run("trajectory " + s3, &b);
    CHECK(a.find("# seed=7\n") != std::string::npos);
    CHECK(b.find("# seed=24301\n") != std::string::npos);
    run("trajectory " + s3 + " --seed 7 --out " + (std::filesystem::temp_directory_path() / "fc_traj.csv").string(), &c);
    CHECK(c.empty());
    setenv("FLEXCROSS_SEED", "99", 1);
    run("trajectory " + s3, &b);
    CHECK(b.find("# seed=99\n") != std::string::npos);
    run("trajectory " + s3 + " --seed 7", &b);
    CHECK(b.find("# seed=7\n") != std::string::npos);
    unsetenv("FLEXCROSS_SEED");
  }
}
