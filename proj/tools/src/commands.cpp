#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include <flexcross/angles.hpp>
#include <flexcross/embedding.hpp>
#include <flexcross/flatgeom.hpp>
#include <flexcross/measure.hpp>

namespace flexcross::cli {

using nlohmann::json;

const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
    case Status::skipped: return "skipped";
    case Status::info: return "info";
  }
  return "?";
}

bool VerificationReport::failed() const {
  return std::any_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.status == Status::fail; });
}

bool VerificationReport::inconclusive() const {
  return std::any_of(checks.begin(), checks.end(),
                     [](const CheckRecord& c) { return c.status == Status::inconclusive; });
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_param(const FlexParam& u) { return u.infinite ? "inf" : format_double(u.value); }

namespace {

std::string short_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  size_t w = 0;
  for (const CheckRecord& c : checks) w = std::max(w, c.name.size());
  for (const CheckRecord& c : checks) {
    os << std::left << std::setw(14) << (std::string("[") + to_string(c.status) + "]") << std::setw(w + 2) << c.name;
    if (c.status == Status::pass || c.status == Status::fail)
      os << "residual " << short_double(c.residual) << " (tol " << short_double(c.tolerance) << ")";
    if (!c.note.empty()) os << "  " << c.note;
    os << "  {" << c.anchor << "}\n";
  }
  int counts[5] = {0, 0, 0, 0, 0};
  for (const CheckRecord& c : checks) ++counts[static_cast<int>(c.status)];
  os << counts[0] << " passed, " << counts[1] << " failed, " << counts[2] << " inconclusive, " << counts[3]
     << " skipped, " << counts[4] << " informational\n";
  return os.str();
}

std::string VerificationReport::to_json() const {
  json arr = json::array();
  for (const CheckRecord& c : checks)
    arr.push_back({{"name", c.name},
                   {"anchor", c.anchor},
                   {"status", to_string(c.status)},
                   {"residual", c.residual},
                   {"tolerance", c.tolerance},
                   {"note", c.note}});
  return json{{"checks", arr}, {"failed", failed()}, {"inconclusive", inconclusive()}}.dump(2);
}

int exit_status(const VerificationReport& r, bool allow_inconclusive) {
  if (r.failed()) return 1;
  if (r.inconclusive() && !allow_inconclusive) return 3;
  return 0;
}

namespace {

template <class F>
void parallel_for(int count, F&& f) {
  const int workers = std::max(1, std::min<int>(count, static_cast<int>(std::thread::hardware_concurrency())));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

bool is_flat_param(const FlexParam& u) { return u.infinite || u.value == 0.0; }

class Checker {
 public:
  explicit Checker(VerificationReport& r) : report_(r) {}

  // Runs fn, which returns the residual; errors become fail/inconclusive records.
  void measure(const std::string& name, const std::string& anchor, double tol, const std::function<double()>& fn,
               const std::string& note = {}) {
    CheckRecord rec{name, anchor, Status::pass, 0.0, tol, note};
    try {
      rec.residual = fn();
      rec.status = rec.residual <= tol ? Status::pass : Status::fail;
    } catch (const Error& e) {
      rec.status = e.code() == ErrorCode::indeterminate ? Status::inconclusive : Status::fail;
      rec.note = e.what();
    }
    report_.checks.push_back(rec);
  }

  void boolean(const std::string& name, const std::string& anchor, const std::function<std::string()>& fn) {
    CheckRecord rec{name, anchor, Status::pass, 0.0, 0.0, {}};
    try {
      rec.note = fn();
      if (!rec.note.empty() && rec.note.rfind("ok", 0) != 0) {
        rec.status = Status::fail;
        rec.residual = 1.0;
      }
    } catch (const Error& e) {
      rec.status = e.code() == ErrorCode::indeterminate ? Status::inconclusive : Status::fail;
      rec.note = e.what();
    }
    report_.checks.push_back(rec);
  }

  void add(CheckRecord rec) { report_.checks.push_back(std::move(rec)); }

 private:
  VerificationReport& report_;
};

// Face volumes up to dimension 2 are closed-form; above that they are quadrature.
double relation_tol(const CheckTolerances& tol, int face_dim) {
  return face_dim <= 2 ? tol["relation_exact"] : tol["relation_numeric"];
}

std::vector<FlexParam> subsample(const std::vector<FlexParam>& grid, int count) {
  std::vector<FlexParam> out;
  for (const FlexParam& u : grid)
    if (is_flat_param(u)) out.push_back(u);
  const int n = static_cast<int>(grid.size());
  for (int i = 0; i < count && n > 0; ++i) out.push_back(grid[(static_cast<long>(i) * (n - 1)) / std::max(1, count - 1)]);
  return normalize_grid(out);
}

}  // namespace

VerificationReport cmd_verify(const RunConfig& cfg) {
  VerificationReport report;
  Checker ck(report);
  const SimplestTypeData& d = cfg.data;
  const int n = d.n();
  const Kind kind = d.space.kind;
  const CheckTolerances& tol = cfg.tol;
  const std::vector<FlexParam>& grid = cfg.u_grid;
  Rng rng(split_seed(cfg.seed, "verify"));

  FamilyPtr fam;
  try {
    fam = build(d);
  } catch (const Error& e) {
    ck.add({"construction", "realization of the data", Status::fail, 1.0, 0.0, e.what()});
    return report;
  }

  ck.measure("edge-length constancy", "edges are rigid under the flexion", tol["edge"], [&] {
    const auto ref = edge_length_table(configuration(fam, grid.front()));
    double worst = 0.0;
    for (const FlexParam& u : grid)
      for (const auto& [e, len] : edge_length_table(configuration(fam, u)))
        worst = std::max(worst, std::abs(len - ref.at(e)) / std::max(1e-300, std::abs(ref.at(e))));
    return worst;
  });

  if (n == 2 && kind != Kind::spherical) {
    ck.add({"dihedral angle law", "oriented dihedral angles", Status::skipped, 0, 0, "not asserted for quadrangles"});
  } else {
    ck.measure("dihedral angle law", "oriented dihedral angles", tol["angle"], [&] {
      double worst = 0.0;
      for (const FlexParam& u : grid) {
        Configuration c = configuration(fam, u);
        for (const FaceId& r : ridges(n))
          worst = std::max(worst, angle_distance(measured_dihedral(c, r), predicted_dihedral(d, r, u)));
      }
      return worst;
    });
  }
  ck.measure("dihedral sign law", "angles of paired faces", tol["angle"], [&] {
    double worst = 0.0;
    for (const FlexParam& u : grid) worst = std::max(worst, sign_law_residual(configuration(fam, u)));
    return worst;
  });

  ck.measure("h identity", "H + Hᵀ = 2G", tol["h_identity"], [&] {
    return (fam->H + fam->H.transpose() - 2.0 * d.G).cwiseAbs().maxCoeff();
  });

  ck.measure("flat positions", "all vertices orthogonal to m at u = 0, ∞", tol["flat"], [&] {
    double worst = 0.0;
    for (const FlexParam& u : {FlexParam::finite(0.0), FlexParam::inf()}) {
      Configuration c = configuration(fam, u);
      for (int id = 0; id < 2 * n; ++id)
        worst = std::max(worst, std::abs(bilinear_form(c.space, c.vertex(id), c.axis)));
    }
    return worst;
  });

  ck.measure("duality", "λ -> 1/λ, u -> 1/u, indices reversed", tol["duality"],
             [&] { return duality_residual(fam, grid); },
             kind == Kind::euclidean ? "compared up to scale and translation" : "");

  // flat geometry of the (n-1)-dimensional cross-polytopes P_(k)
  if (n >= 3) {
    std::vector<std::vector<std::vector<int>>> classes;
    for (const FlexParam& u : {FlexParam::finite(0.0), FlexParam::inf()}) {
      const std::string at = u.infinite ? " (u = inf)" : " (u = 0)";
      Configuration c = configuration(fam, u);
      std::optional<Concurrency> conc;
      ck.measure("bisector concurrency" + at, "bisecting hyperplanes share one point", tol["concurrency"], [&] {
        conc = concurrency_point(c, std::numeric_limits<double>::infinity());
        return conc->residual;
      });
      if (!conc) continue;
      ck.measure("Ceva triples" + at, "three bisectors inside one facet are dependent", tol["concurrency"],
                 [&] { return conc->triple_residual; });
      ck.measure("bisector coincidence" + at, "B_{k,G} = B_{l,G}", tol["concurrency"],
                 [&] { return conc->bisector_coincidence; });
      ck.measure("sine ratio law" + at, "r(F1, B_G, F2) against λ_F2/λ_F1", tol["ratio"],
                 [&] { return ratio_law_residual(c); },
                 u.infinite ? "reciprocal ratio at u = inf" : "");
      FlatAnalysis fa;
      bool have = false;
      ck.measure("tangency distances" + at, "circumscribed / common-hyperplane classification", tol["tangency"], [&] {
        fa = classify_flat(c, *conc);
        have = true;
        double worst = 0.0;
        for (const PerK& pk : fa.per_k) {
          worst = std::max(worst, pk.spread);
          if (kind == Kind::spherical && !(pk.distance < M_PI / 2 - 1e-6))
            throw Error(ErrorCode::classification, "tangency sphere is a great sphere");
        }
        return worst;
      }, "");
      if (!have) continue;
      {
        std::ostringstream os;
        os << to_string(fa.point) << " point, " << to_string(fa.flat_case);
        for (const PerK& pk : fa.per_k) os << "; k=" << pk.k + 1 << " " << to_string(pk.kind);
        report.checks.back().note = os.str();
      }
      ck.boolean("class parity" + at, "classes follow |J \\ X_k| mod 2", [&]() -> std::string {
        for (const PerK& pk : fa.per_k)
          if (!pk.parity_ok) return "parity mismatch for k=" + std::to_string(pk.k + 1);
        return {};
      });
      std::vector<std::vector<int>> cls;
      for (const PerK& pk : fa.per_k) cls.push_back(pk.classes);
      classes.push_back(cls);

      FaceVolumeCache cache(fam);
      for (int k = 0; k < n; ++k) {
        const std::string name = "alternating facet sum k=" + std::to_string(k + 1) + at;
        try {
          RelationResidual r = circumscribed_alternating_sum(c, fa, k, cache);
          const double t = std::max(relation_tol(tol, n - 2), 10.0 * r.bound);
          ck.add({name, "class-by-colour sum over facets of P_(k)", r.residual <= t ? Status::pass : Status::fail,
                  r.residual, t, ""});
        } catch (const Error& e) {
          if (e.code() == ErrorCode::not_applicable)
            ck.add({name, "class-by-colour sum over facets of P_(k)", Status::skipped, 0, 0, e.message()});
          else
            ck.add({name, "class-by-colour sum over facets of P_(k)", Status::fail, 1, 0, e.what()});
        }
      }
    }
    if (classes.size() == 2)
      ck.boolean("same classes at both flat positions", "one set of classes governs u = 0 and u = inf",
                 [&]() -> std::string { return classes[0] == classes[1] ? "" : "class decompositions differ"; });
  } else {
    ck.add({"flat geometry", "bisector concurrency", Status::skipped, 0, 0, "needs n >= 3"});
  }

  // face-volume relations
  {
    FaceVolumeCache cache(fam);
    for (YSet y : {YSet::plus, YSet::minus}) {
      const std::string name = std::string("facet relation Y") + (y == YSet::plus ? "+" : "-");
      const double t0 = relation_tol(tol, n - 1);
      CheckRecord rec{name, "signed facet-volume sum", Status::pass, 0, t0, {}};
      try {
        RelationResidual r = facet_relation_residual(cache, y);
        rec.tolerance = std::max(t0, 10.0 * r.bound);
        rec.residual = r.residual;
        rec.status = r.residual <= rec.tolerance ? Status::pass : Status::fail;
        if (r.rhs != 0.0) rec.note = "right-hand side σ_{n-1}";
      } catch (const Error& e) {
        rec.status = Status::fail;
        rec.note = e.what();
      }
      ck.add(rec);
    }
    if (n >= 3 || kind == Kind::spherical) {
      for (int k = 0; k < n; ++k) {
        const double t0 = relation_tol(tol, n - 2);
        CheckRecord rec{"codim-2 relation k=" + std::to_string(k + 1), "signed (n-2)-face volume sum", Status::pass, 0,
                        t0, {}};
        try {
          RelationResidual r = codim2_relation_residual(cache, k);
          rec.tolerance = std::max(t0, 10.0 * r.bound);
          rec.residual = r.residual;
          rec.status = r.residual <= rec.tolerance ? Status::pass : Status::fail;
          if (r.rhs != 0.0) rec.note = "X_k empty: right-hand side σ_{n-2}";
        } catch (const Error& e) {
          rec.status = Status::fail;
          rec.note = e.what();
        }
        ck.add(rec);
      }
    }

    // volumes
    if (kind == Kind::euclidean) {
      const auto sample = subsample(grid, 9);
      ck.measure("decomposition volume vanishes", "euclidean volume is constant (zero for these families)",
                 tol["decomposition"], [&] {
                   double worst = 0.0;
                   for (const FlexParam& u : sample)
                     worst = std::max(worst, std::abs(generalized_volume(configuration(fam, u)).value));
                   return worst;
                 });
    } else if (n >= 3) {
      const double sig = sphere_volume(n);
      const double scale = kind == Kind::spherical ? sig : 1.0;
      const double tv = (n == 3 ? tol["volume_exact"] : tol["volume_numeric"]) * scale;
      ck.measure("closed form vs Schlafli", "volume along the flexion", tv, [&] {
        double worst = 0.0;
        for (const FlexParam& u : grid) {
          GeneralizedVolume a = closed_form_volume(d, u), b = schlafli_volume(cache, u);
          worst = std::max(worst, volume_distance(a.value, b.value, a.modulus));
        }
        return worst;
      });
      if (n <= 4) {
        const auto sample = subsample(grid, 7);
        std::vector<double> diff(sample.size()), err(sample.size());
        CheckRecord rec{"decomposition vs closed form", "cone decomposition of the winding-number integral",
                        Status::pass, 0, 0, {}};
        try {
          DecompositionOptions opt;
          opt.seed = split_seed(cfg.seed, "decomposition");
          parallel_for(static_cast<int>(sample.size()), [&](int i) {
            GeneralizedVolume g = generalized_volume(configuration(fam, sample[i]), opt);
            GeneralizedVolume cf = closed_form_volume(d, sample[i]);
            diff[i] = volume_distance(g.value, cf.value, cf.modulus);
            err[i] = g.abs_error + tol["decomposition"];
          });
          for (size_t i = 0; i < sample.size(); ++i) {
            rec.residual = std::max(rec.residual, diff[i]);
            rec.tolerance = std::max(rec.tolerance, err[i]);
            if (diff[i] > err[i]) rec.status = Status::fail;
          }
          rec.note = std::to_string(sample.size()) + " samples";
        } catch (const Error& e) {
          rec.status = e.code() == ErrorCode::indeterminate ? Status::inconclusive : Status::fail;
          rec.note = e.what();
        }
        ck.add(rec);
      } else {
        ck.add({"decomposition vs closed form", "cone decomposition", Status::skipped, 0, 0,
                "quadrature above dimension 4 is not attempted"});
      }
    }
  }

  if (kind == Kind::spherical) {
    bool all_minus = true, all_plus = true;
    for (int i = 0; i < n; ++i) {
      all_minus = all_minus && d.product(i) == -1;
      all_plus = all_plus && d.product(i) == 1;
    }
    ck.boolean("degree at the flat positions", "deg P_0 = 1 iff all products -1; deg P_inf = 1 iff all +1",
               [&]() -> std::string {
                 Rng r = rng;
                 const int d0 = spherical_degree(configuration(fam, FlexParam::finite(0.0)), r);
                 const int di = spherical_degree(configuration(fam, FlexParam::inf()), r);
                 const std::string got = "deg P_0 = " + std::to_string(d0) + ", deg P_inf = " + std::to_string(di);
                 if (d0 != (all_minus ? 1 : 0) || di != (all_plus ? 1 : 0)) return "unexpected " + got;
                 return "ok: " + got;
               });
    if (n >= 3) {
      ck.measure("modified bellows", "constant volume after antipodal flips", tol["bellows"] * sphere_volume(n), [&] {
        SimplestTypeData flipped = d;
        for (int id : modified_bellows_witness(d)) flipped = antipode_flip(flipped, id);
        FaceVolumeCache fc(build(flipped));
        const GeneralizedVolume v0 = schlafli_volume(fc, FlexParam::finite(0.0));
        double worst = 0.0;
        for (const FlexParam& u : grid)
          worst = std::max(worst, volume_distance(schlafli_volume(fc, u).value, v0.value, v0.modulus));
        return worst;
      });
      if (all_minus) {
        ck.measure("volume non-constant", "embedded spherical cross-polytopes change volume", 0.0, [&] {
          FaceVolumeCache fc(fam);
          const double sig = sphere_volume(n);
          const double dv = canonical_angle(2 * M_PI / sig *
                                            (schlafli_volume(fc, FlexParam::finite(0.1)).value -
                                             schlafli_volume(fc, FlexParam::finite(0.0)).value)) * sig / (2 * M_PI);
          return dv;
        });
        CheckRecord& rec = report.checks.back();
        const double predicted = d.s[n - 1] * sphere_volume(n) / M_PI * std::atan(0.1 * d.lambda[n - 1]);
        if (rec.status != Status::inconclusive) {
          rec.note = "V(P_0.1) - V(P_0) = " + short_double(rec.residual) + ", expected " + short_double(predicted);
          rec.status = Status::info;
          rec.tolerance = 0.0;
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------- tables

std::string Table::to_csv() const {
  std::ostringstream os;
  for (const std::string& c : comments) os << "# " << c << "\n";
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

namespace {

std::vector<std::string> common_comments(const RunConfig& cfg, const std::string& what) {
  std::vector<std::string> c{"flexcross " + what, "schema_version=" + std::to_string(kSchemaVersion),
                             "seed=" + std::to_string(cfg.seed),
                             "space=" + std::string(to_string(cfg.data.space.kind)) + " n=" + std::to_string(cfg.data.n())};
  std::string t = "tolerances:";
  for (const auto& [k, v] : cfg.tol.values) t += " " + k + "=" + short_double(v);
  c.push_back(t);
  return c;
}

std::string vertex_name(int n, int id) { return (id < n ? "a" : "b") + std::to_string(id % n + 1); }

std::string face_name(int n, const FaceId& f) {
  std::string s;
  for (int id : f.vertex_ids(n))
    if (id < n ? has(f.I, id) : has(f.J, id - n)) s += vertex_name(n, id);
  return s;
}

}  // namespace

Table cmd_trajectory(const RunConfig& cfg) {
  const SimplestTypeData& d = cfg.data;
  const int n = d.n();
  FamilyPtr fam = build(d);
  Table t;
  t.comments = common_comments(cfg, "trajectory");
  t.header.push_back("u");
  const int dim = d.space.dim();
  for (int id = 0; id < 2 * n; ++id)
    for (int j = 0; j < dim; ++j) t.header.push_back(vertex_name(n, id) + "_x" + std::to_string(j));
  for (int id = 0; id < 2 * n; ++id) t.header.push_back(vertex_name(n, id) + "_m");
  const auto rs = ridges(n);
  for (const FaceId& r : rs) t.header.push_back("psi_" + face_name(n, r));
  t.rows.resize(cfg.u_grid.size());
  parallel_for(static_cast<int>(cfg.u_grid.size()), [&](int i) {
    const FlexParam& u = cfg.u_grid[i];
    Configuration c = configuration(fam, u);
    std::vector<std::string>& row = t.rows[i];
    row.push_back(format_param(u));
    for (int id = 0; id < 2 * n; ++id)
      for (int j = 0; j < dim; ++j) row.push_back(format_double(c.vertex(id)[j]));
    for (int id = 0; id < 2 * n; ++id) row.push_back(format_double(bilinear_form(c.space, c.vertex(id), c.axis)));
    for (const FaceId& r : rs) {
      double psi = std::nan("");
      try {
        psi = measured_dihedral(c, r);
      } catch (const Error&) {
      }
      row.push_back(format_double(psi));
    }
  });
  return t;
}

Trajectory read_trajectory(const std::string& csv) {
  Trajectory tr;
  std::istringstream in(csv);
  std::string line;
  bool have_header = false;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line);
    if (!have_header) {
      tr.header = cells;
      have_header = true;
      continue;
    }
    if (cells.size() != tr.header.size()) throw Error(ErrorCode::input, "trajectory row has the wrong width");
    TrajectoryRow row;
    row.u = parse_param(cells[0]);
    for (size_t i = 1; i < cells.size(); ++i) row.values.push_back(std::strtod(cells[i].c_str(), nullptr));
    tr.rows.push_back(std::move(row));
  }
  return tr;
}

VolumeSelection volume_selection_from_string(const std::string& s) {
  if (s == "closed-form") return VolumeSelection::closed_form;
  if (s == "schlafli") return VolumeSelection::schlafli;
  if (s == "decomposition") return VolumeSelection::decomposition;
  if (s == "all") return VolumeSelection::all;
  throw Error(ErrorCode::input, "unknown volume method '" + s + "'");
}

Table cmd_volume(const RunConfig& cfg, VolumeSelection method) {
  const SimplestTypeData& d = cfg.data;
  const bool curved = d.space.curved();
  const bool want_cf = method == VolumeSelection::closed_form || method == VolumeSelection::all;
  const bool want_sch = method == VolumeSelection::schlafli || method == VolumeSelection::all;
  const bool want_dec = method == VolumeSelection::decomposition || method == VolumeSelection::all;
  if (method == VolumeSelection::schlafli && (!curved || d.n() < 3))
    throw Error(ErrorCode::unsupported, "the Schläfli route needs a curved space and n >= 3");
  const bool sch_ok = want_sch && curved && d.n() >= 3;
  FamilyPtr fam = build(d);
  FaceVolumeCache cache(fam);
  DecompositionOptions opt;
  opt.seed = split_seed(cfg.seed, "decomposition");
  Table t;
  t.comments = common_comments(cfg, "volume");
  std::optional<double> modulus;
  if (d.space.kind == Kind::spherical) {
    modulus = sphere_volume(d.n());
    t.comments.push_back("spherical volumes are classes mod sigma_n=" + format_double(*modulus));
  }
  t.header.push_back("u");
  if (want_cf) t.header.push_back("closed_form");
  if (want_sch) {
    t.header.push_back("schlafli");
    t.header.push_back("schlafli_abs_error");
  }
  if (want_dec) {
    t.header.push_back("decomposition");
    t.header.push_back("decomposition_abs_error");
  }
  if (method == VolumeSelection::all) {
    t.header.push_back("disagreement_cf_schlafli");
    t.header.push_back("disagreement_cf_decomposition");
    t.header.push_back("disagreement_schlafli_decomposition");
  }
  t.rows.resize(cfg.u_grid.size());
  parallel_for(static_cast<int>(cfg.u_grid.size()), [&](int i) {
    const FlexParam& u = cfg.u_grid[i];
    std::vector<std::string>& row = t.rows[i];
    row.push_back(format_param(u));
    GeneralizedVolume cf, sch, dec;
    if (want_cf) {
      cf = closed_form_volume(d, u);
      row.push_back(format_double(cf.value));
    }
    if (want_sch) {
      if (sch_ok) {
        sch = schlafli_volume(cache, u);
        row.push_back(format_double(sch.value));
        row.push_back(format_double(sch.abs_error));
      } else {
        row.push_back("nan");
        row.push_back("nan");
      }
    }
    if (want_dec) {
      dec = generalized_volume(configuration(fam, u), opt);
      row.push_back(format_double(dec.value));
      row.push_back(format_double(dec.abs_error));
    }
    if (method == VolumeSelection::all) {
      row.push_back(sch_ok ? format_double(volume_distance(cf.value, sch.value, modulus)) : "nan");
      row.push_back(format_double(volume_distance(cf.value, dec.value, modulus)));
      row.push_back(sch_ok ? format_double(volume_distance(sch.value, dec.value, modulus)) : "nan");
    }
  });
  return t;
}

// ---------------------------------------------------------------- flat

namespace {

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

CommandOutput cmd_flat(const RunConfig& cfg) {
  const SimplestTypeData& d = cfg.data;
  const int n = d.n();
  if (n < 3) throw Error(ErrorCode::unsupported, "flat analysis needs n >= 3");
  FamilyPtr fam = build(d);
  CommandOutput out;
  json doc;
  doc["space"] = to_string(d.space.kind);
  doc["n"] = n;
  json positions = json::array();
  std::vector<Vec> Os;
  std::vector<std::vector<std::vector<int>>> classes;
  for (const FlexParam& u : {FlexParam::finite(0.0), FlexParam::inf()}) {
    Configuration c = configuration(fam, u);
    json pos;
    pos["u"] = format_param(u);
    try {
      Concurrency conc = concurrency_point(c, cfg.tol["concurrency"]);
      FlatAnalysis fa = classify_flat(c, conc);
      Os.push_back(conc.O);
      pos["O"] = vec_json(conc.O);
      pos["concurrency_residual"] = conc.residual;
      pos["triple_residual"] = conc.triple_residual;
      pos["bisector_coincidence"] = conc.bisector_coincidence;
      pos["dihedral_margin"] = conc.dihedral_margin;
      pos["ratio_residual"] = ratio_law_residual(c);
      pos["case"] = to_string(fa.flat_case);
      pos["point"] = to_string(fa.point);
      json per = json::array();
      std::vector<std::vector<int>> cls;
      for (const PerK& pk : fa.per_k) {
        json jk;
        jk["k"] = pk.k + 1;
        jk["kind"] = to_string(pk.kind);
        jk["distance"] = pk.distance;
        jk["spread"] = pk.spread;
        jk["parity_ok"] = pk.parity_ok;
        json jc = json::object();
        for (size_t i = 0; i < pk.facets.size(); ++i) jc[face_name(n, pk.facets[i])] = pk.classes[i];
        jk["classes"] = jc;
        if (d.space.kind == Kind::spherical) jk["great_sphere"] = !(pk.distance < M_PI / 2 - 1e-6);
        if (pk.spread > cfg.tol["tangency"] || !pk.parity_ok) out.status = 1;
        per.push_back(jk);
        cls.push_back(pk.classes);
      }
      classes.push_back(cls);
      pos["per_k"] = per;
    } catch (const Error& e) {
      pos["error"] = e.what();
      out.status = 1;
    }
    positions.push_back(pos);
  }
  doc["flat_positions"] = positions;
  if (Os.size() == 2) {
    doc["O_distance"] = projective_distance(Os[0], Os[1]);
    doc["parity_match"] = classes[0] == classes[1];
    if (classes[0] != classes[1]) out.status = 1;
  }
  out.text = doc.dump(2) + "\n";
  return out;
}

// ---------------------------------------------------------------- embed

CommandOutput cmd_embed(const RunConfig& cfg, const FlexParam& u, bool certificate) {
  FamilyPtr fam = build(cfg.data);
  const int n = cfg.data.n();
  CommandOutput out;
  json doc;
  doc["u"] = format_param(u);
  EmbeddingResult e = is_embedded(configuration(fam, u));
  doc["verdict"] = to_string(e.verdict);
  if (e.pair) doc["facet_pair"] = {face_name(n, e.pair->first), face_name(n, e.pair->second)};
  if (e.witness) doc["witness"] = vec_json(*e.witness);
  if (e.verdict == EmbedVerdict::inconclusive) out.status = 3;
  if (certificate) {
    RotatedFamily rf = make_rotated_family(fam);
    Rng rng(split_seed(cfg.seed, "certificate"));
    EmbeddingCertificate cert = embedding_certificate(rf, rng);
    json items = json::array();
    for (const CertificateItem& it : cert.items) items.push_back({{"item", it.name}, {"pass", it.pass}, {"detail", it.detail}});
    doc["certificate"] = {{"items", items}, {"delta", cert.delta}, {"pass", cert.pass()}};
    if (cert.witness_at_infinity) doc["certificate"]["witness_at_infinity"] = vec_json(*cert.witness_at_infinity);
    if (!cert.pass()) out.status = 1;
  }
  out.text = doc.dump(2) + "\n";
  return out;
}

// ---------------------------------------------------------------- mesh

Projection projection_from_string(const std::string& s) {
  if (s == "auto") return Projection::automatic;
  if (s == "stereographic") return Projection::stereographic;
  if (s == "klein") return Projection::klein;
  if (s == "direct") return Projection::direct;
  throw Error(ErrorCode::input, "unknown projection '" + s + "'");
}

std::string cmd_mesh(const RunConfig& cfg, const FlexParam& u, Projection proj, const std::optional<Vec>& custom_pole) {
  const SimplestTypeData& d = cfg.data;
  const int n = d.n();
  if (n != 3) throw Error(ErrorCode::unsupported, "mesh export needs n = 3");
  const Kind kind = d.space.kind;
  if (proj == Projection::automatic)
    proj = kind == Kind::spherical ? Projection::stereographic : kind == Kind::hyperbolic ? Projection::klein : Projection::direct;
  const bool fits = (proj == Projection::stereographic && kind == Kind::spherical) ||
                    (proj == Projection::klein && kind == Kind::hyperbolic) ||
                    (proj == Projection::direct && kind == Kind::euclidean);
  if (!fits) throw Error(ErrorCode::input, "projection does not match the space");
  if (custom_pole && proj != Projection::stereographic) throw Error(ErrorCode::input, "--pole needs the stereographic projection");
  FamilyPtr fam = build(d);
  Configuration c = configuration(fam, u);
  std::vector<Vec> pts;
  std::string comment;
  if (proj == Projection::stereographic) {
    Vec pole = -c.axis;
    if (custom_pole) {
      if (custom_pole->size() != 4 || !(custom_pole->norm() > 0))
        throw Error(ErrorCode::input, "pole needs 4 coordinates, not all zero");
      pole = custom_pole->normalized();
    }
    // orthonormal basis of pole^⊥ with the orientation of the ambient space
    const Mat pole_col = pole;
    Eigen::HouseholderQR<Mat> qr(pole_col);
    Mat full = qr.householderQ();
    if (full.col(0).dot(pole) < 0) full = -full;
    if (full.determinant() < 0) full.col(1) = -full.col(1);
    const Mat B = full.rightCols(3);
    for (int id = 0; id < 2 * n; ++id) {
      const Vec& x = c.vertex(id);
      const double den = 1.0 - x.dot(pole);
      if (den < 1e-9) throw Error(ErrorCode::pole, "vertex " + vertex_name(n, id) + " sits at the projection pole");
      pts.push_back(B.transpose() * (x - x.dot(pole) * pole) / den);
    }
    comment = custom_pole ? "projection: stereographic from a custom pole" : "projection: stereographic from -m";
  } else if (proj == Projection::klein) {
    for (int id = 0; id < 2 * n; ++id) pts.push_back(c.vertex(id).tail(3) / c.vertex(id)[0]);
    comment = "projection: Beltrami-Klein ball";
  } else {
    for (int id = 0; id < 2 * n; ++id) pts.push_back(c.vertex(id));
    comment = "projection: none (euclidean coordinates)";
  }
  std::ostringstream os;
  os << "OFF\n# " << comment << ", u=" << format_param(u) << "\n";
  os << 2 * n << " " << (1 << n) << " 0\n";
  for (const Vec& p : pts) os << format_double(p[0]) << " " << format_double(p[1]) << " " << format_double(p[2]) << "\n";
  for (const FaceId& F : facets(n)) {
    std::vector<int> ids = F.vertex_ids(n);
    if (facet_orientation_sign(n, F.I, F.J) * c.omega < 0) std::swap(ids[0], ids[1]);
    os << "3 " << ids[0] << " " << ids[1] << " " << ids[2] << "\n";
  }
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) % 100000);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::io, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::io, "cannot rename into " + path + ": " + ec.message());
  }
}

}  // namespace flexcross::cli
