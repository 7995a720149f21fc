#include "frameweave/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace frameweave {

namespace {

void append_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
  // Keep floats recognisable as floats after a round trip.
  if (std::string_view(buf).find_first_of(".eE") == std::string_view::npos) out += ".0";
}

void emit(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::null:
      out += "null";
      break;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      break;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case Json::value_t::number_float:
      append_number(out, j.get<double>());
      break;
    case Json::value_t::string:
      out += Json(j.get<std::string>()).dump();
      break;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        emit(v, out, depth + 1);
      }
      out += "\n" + close_pad + "]";
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        emit(it.value(), out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      break;
    }
    default:
      throw std::invalid_argument("unsupported JSON value");
  }
}

template <typename T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

Json to_json(const IndexRange& r) { return Json{{"first", r.first}, {"last", r.last}}; }
Json to_json(const Interval& i) { return Json{{"lo", i.lo}, {"hi", i.hi}}; }

Json to_json(const GridInfo& g) {
  return Json{{"lo", g.lo},           {"hi", g.hi},
              {"points", g.points},   {"periods", g.periods},
              {"log_spaced", g.log_spaced}, {"both_signs", g.both_signs}};
}

Json to_json(const BoundsCertificate& c) {
  return Json{{"A_num", c.A_num},
              {"B_num", c.B_num},
              {"A_analytic", opt(c.A_analytic)},
              {"B_analytic", opt(c.B_analytic)},
              {"J_const", opt(c.J_const)},
              {"K_const", opt(c.K_const)},
              {"L_weave", opt(c.L_weave)},
              {"U_weave", opt(c.U_weave)},
              {"grid", to_json(c.grid)},
              {"tail_bound", c.tail_bound},
              {"j_min_eff", c.j_min_eff},
              {"j_max_eff", c.j_max_eff},
              {"argmin", c.argmin},
              {"argmax", c.argmax},
              {"refine_gain_min", c.refine_gain_min},
              {"refine_gain_max", c.refine_gain_max},
              {"grid_tolerance", grid_tolerance(c)},
              {"certified", c.certified},
              {"interior_only", c.interior_only}};
}

Json to_json(const WeaveCertificate& c) {
  return Json{{"L_weave", c.L_weave},
              {"U_weave", c.U_weave},
              {"grid", to_json(c.grid)},
              {"tail_bound", c.tail_bound},
              {"argmin", c.argmin},
              {"argmax", c.argmax},
              {"refine_gain_min", c.refine_gain_min},
              {"refine_gain_max", c.refine_gain_max},
              {"grid_tolerance", grid_tolerance(c)},
              {"witness_window", to_json(c.witness_window)},
              {"witness_choices", c.witness_choices},
              {"certified", c.certified}};
}

Json to_json(const PatternBounds& p) {
  return Json{{"choices", p.choices}, {"A", p.A}, {"B", p.B}, {"refine_gain", p.refine_gain}};
}

Json to_json(const SamplingReport& r, bool with_patterns) {
  Json j{{"count", r.count},
         {"seed", r.seed},
         {"window", to_json(r.window)},
         {"certificate", to_json(r.certificate)},
         {"tolerance", r.tolerance},
         {"min_A", r.min_A},
         {"max_B", r.max_B},
         {"worst_lower", to_json(r.worst_lower)},
         {"worst_upper", to_json(r.worst_upper)},
         {"violations", r.violations},
         {"all_within", r.all_within}};
  if (with_patterns) {
    Json arr = Json::array();
    for (const auto& p : r.patterns) arr.push_back(to_json(p));
    j["patterns"] = std::move(arr);
  }
  return j;
}

Json to_json(const EnumerationReport& r) {
  return Json{{"pattern_count", r.pattern_count},
              {"window", to_json(r.window)},
              {"certificate", to_json(r.certificate)},
              {"tolerance", r.tolerance},
              {"min_A", r.min_A},
              {"max_B", r.max_B},
              {"worst_lower", to_json(r.worst_lower)},
              {"worst_upper", to_json(r.worst_upper)},
              {"certificate_gap", r.certificate_gap},
              {"violations", r.violations},
              {"all_within", r.all_within}};
}

Json to_json(const DensityGate& g) {
  return Json{{"ok", g.ok}, {"product", g.product}, {"message", g.message}};
}

Json to_json(const CoverReport& r) {
  return Json{{"base_interval", to_json(r.base_interval)},
              {"strengthened_interval", to_json(r.strengthened_interval)},
              {"cover", to_json(r.cover)},
              {"floor_eps", r.floor_eps},
              {"base_ok", r.base_ok},
              {"strengthened_ok", r.strengthened_ok}};
}

Json to_json(const FusionBounds& b) {
  return Json{{"A", b.A}, {"B", b.B}, {"dense", b.dense}, {"trials", b.trials}};
}

Json to_json(const CounterexampleGrowth& g) {
  return Json{{"value_at_e1", g.value_at_e1}, {"value_at_ek", g.value_at_ek}, {"ratio", g.ratio}};
}

Json to_json(const ErasureReport& r) {
  Json j{{"erased", r.erased},
         {"erased_period", opt(r.erased_period)},
         {"mixed_choices", r.mixed.choices()},
         {"mixed_window", to_json(r.mixed.window())},
         {"mixed_periodic", r.mixed.extension() == Extension::Periodic},
         {"relative_error", r.relative_error},
         {"bounds", to_json(r.bounds)},
         {"certificate", to_json(r.certificate)},
         {"tolerance", r.tolerance},
         {"within_certificate", r.within_certificate}};
  return j;
}

std::string curve_csv(const std::vector<double>& xs, const std::vector<double>& values,
                      const std::string& x_name) {
  if (xs.size() != values.size()) throw std::invalid_argument("curve columns differ in length");
  std::string out = x_name + ",value\n";
  char buf[96];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", xs[i], values[i]);
    out += buf;
  }
  return out;
}

std::string witness_csv(const std::vector<WitnessRow>& rows) {
  std::string out = "gamma,min_sum,max_sum,first_row,argmin_choices\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,", r.gamma, r.min_sum, r.max_sum,
                  r.first_row);
    out += buf;
    for (std::size_t c = 0; c < r.argmin_choices.size(); ++c) {
      if (c) out += ' ';
      out += std::to_string(r.argmin_choices[c]);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
  out << content;
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path));
}

}  // namespace frameweave
