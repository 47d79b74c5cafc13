#include "xalign/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace xalign {

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json matrix_to_json(const Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back({round12(m(r, c).real()), round12(m(r, c).imag())});
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json rational_json(const Rational& r) { return rational_to_string(r); }

namespace {

Json tuple_json(const DofTuple& t) {
  Json out = Json::array();
  for (const Rational& r : t.d) out.push_back(rational_json(r));
  return out;
}

Json int4_json(const std::array<long long, 4>& a) {
  return Json{a[0], a[1], a[2], a[3]};
}

Json config_json(const AntennaConfig& c) {
  return Json{{"m1", c.m1}, {"m2", c.m2}, {"n1", c.n1}, {"n2", c.n2}};
}

Json receiver_diag_json(const ReceiverDiag& d) {
  return Json{{"interference_rank", d.interference_rank},
              {"desired_rank", d.desired_rank},
              {"joint_rank", d.joint_rank},
              {"residual", round12(d.residual)}};
}

Json receiver_meta_json(const ReceiverMeta& m) {
  return Json{{"r1", m.r1}, {"r2", m.r2}, {"r", m.r}, {"r0", m.r0}};
}

}  // namespace

Json region_to_json(const AntennaConfig& config) {
  DofPolytope poly = outerbound_polytope(config);
  std::vector<RegionVertex> vertices = enumerate_vertices(poly);

  Json rows = Json::array();
  for (const Inequality& row : poly.rows) {
    rows.push_back(Json{{"c", int4_json(row.c)}, {"b", row.b}});
  }

  Json verts = Json::array();
  for (const RegionVertex& v : vertices) {
    ScaledVertex sv = normalize_scale(v.point);
    Json scaled = Json::array();
    for (const BigInt& s : sv.scaled) scaled.push_back(s.str());
    verts.push_back(Json{{"point", tuple_json(v.point)},
                         {"active", v.active},
                         {"kappa", sv.kappa.str()},
                         {"scaled", std::move(scaled)}});
  }

  IntegerInnerbound inner = integer_innerbound_max(config);
  return Json{{"config", config_json(config)},
              {"inequalities", std::move(rows)},
              {"vertices", std::move(verts)},
              {"eta_out", rational_json(eta_out_closed_form(config))},
              {"eta_mbi", eta_mbi(config)},
              {"integer_innerbound",
               Json{{"value", inner.value}, {"argmax", int4_json(inner.argmax)}}},
              {"zfx_bound_holds", check_zfx_bound(config)}};
}

Json plan_to_json(const BeamformingPlan& plan) {
  return Json{{"counts", Json{plan.counts.d[0], plan.counts.d[1], plan.counts.d[2],
                              plan.counts.d[3]}},
              {"extension", plan.extension},
              {"v11", matrix_to_json(plan.v11)},
              {"v12", matrix_to_json(plan.v12)},
              {"v21", matrix_to_json(plan.v21)},
              {"v22", matrix_to_json(plan.v22)},
              {"rx1", receiver_meta_json(plan.rx1)},
              {"rx2", receiver_meta_json(plan.rx2)},
              {"aligned_rx1", plan.aligned_rx1},
              {"aligned_rx2", plan.aligned_rx2}};
}

Json cognitive_to_json(const CognitivePlan& plan) {
  Json linked = Json::array();
  for (const LinkedPayload& lp : plan.linked) {
    linked.push_back(Json{{"source", message_name(lp.source)},
                          {"carrier", message_name(lp.carrier)},
                          {"sign", round12(lp.sign)}});
  }
  Json subs = Json::array();
  for (const SubtractionRule& sr : plan.subtractions) {
    subs.push_back(Json{{"receiver", sr.receiver}, {"cancels", message_name(sr.cancels)}});
  }
  return Json{{"plan", plan_to_json(plan.plan)},
              {"linked", std::move(linked)},
              {"subtractions", std::move(subs)}};
}

Json diagnostics_to_json(const AlignmentDiagnostics& diag) {
  return Json{{"rx1", receiver_diag_json(diag.rx1)}, {"rx2", receiver_diag_json(diag.rx2)}};
}

Json curve_to_json(const RateCurve& curve) {
  Json pts = Json::array();
  for (const RatePoint& p : curve.points) {
    pts.push_back(Json{{"snr_db", round12(p.snr_db)},
                       {"sum_rate", round12(p.sum)},
                       {"r11", round12(p.per_message[0])},
                       {"r12", round12(p.per_message[1])},
                       {"r21", round12(p.per_message[2])},
                       {"r22", round12(p.per_message[3])}});
  }
  return Json{{"points", std::move(pts)}};
}

Json slope_to_json(const SlopeEstimate& slope) {
  return Json{{"total", round12(slope.total)},
              {"per_message", Json{round12(slope.per_message[0]), round12(slope.per_message[1]),
                                   round12(slope.per_message[2]), round12(slope.per_message[3])}},
              {"fit_residual", round12(slope.fit_residual)}};
}

Json sweep_to_json(const std::vector<ConfigCheck>& checks) {
  Json items = Json::array();
  int failures = 0;
  for (const ConfigCheck& c : checks) {
    if (!c.all_ok()) ++failures;
    items.push_back(Json{{"config", config_json(c.config)},
                         {"eta_closed", rational_json(c.eta_closed)},
                         {"eta_lp", rational_json(c.eta_lp)},
                         {"oracle_match", c.oracle_match},
                         {"eta_mbi", c.mbi},
                         {"zfx_ok", c.zfx_ok},
                         {"integer_innerbound", c.int_inner},
                         {"integer_argmax", int4_json(c.int_argmax)},
                         {"sandwich_ok", c.sandwich_ok},
                         {"normalize_ok", c.normalize_ok},
                         {"vertex_count", c.vertex_count}});
  }
  return Json{{"configs", std::move(items)},
              {"total", checks.size()},
              {"failures", failures}};
}

Json make_report(const std::string& command, const Json& input, Json body) {
  return Json{{"schema", 1},
              {"tool", "xalign"},
              {"version", kToolVersion},
              {"command", command},
              {"input", input},
              {"input_hash", fnv1a64_hex(input.dump())},
              {"result", std::move(body)}};
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

std::string curve_to_csv(const RateCurve& curve) {
  std::string out = "snr_db,sum_rate,r11,r12,r21,r22\n";
  char buf[256];
  for (const RatePoint& p : curve.points) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", round12(p.snr_db),
                  round12(p.sum), round12(p.per_message[0]), round12(p.per_message[1]),
                  round12(p.per_message[2]), round12(p.per_message[3]));
    out += buf;
  }
  return out;
}

}  // namespace xalign
