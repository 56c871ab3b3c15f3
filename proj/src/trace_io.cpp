#include <charconv>
#include <system_error>

#include "slamobs/experiment.hpp"

namespace slamobs {

std::string format_double(double value) {
  char buf[64];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc()) {
    throw std::runtime_error("double formatting failed");
  }
  return std::string(buf, res.ptr);
}

namespace {

constexpr char kTraceHeader[] =
    "t,j,q,att_err_rad,pos_err_m,lmk_err_m,bias_w_err,bias_v_err,lyapunov,"
    "measured_cost";

void append_row(std::string& out, const TraceRow& row) {
  out += format_double(row.t);
  out += ',';
  out += std::to_string(row.j);
  out += ',';
  out += std::to_string(row.q);
  const double fields[] = {row.m.attitude_error, row.m.position_error,
                           row.m.landmark_error, row.m.bias_omega_error,
                           row.m.bias_v_error,   row.m.lyapunov_value,
                           row.m.measured_cost};
  for (double f : fields) {
    out += ',';
    out += format_double(f);
  }
  out += '\n';
}

}  // namespace

std::string trace_to_csv(const std::vector<TraceRow>& rows) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const TraceRow& row : rows) {
    append_row(out, row);
  }
  return out;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "angle_rad,observer,jumps,att_err_rad,pos_err_m,lyapunov,converged\n";
  for (const SweepRow& row : rows) {
    out += format_double(row.angle_rad);
    out += ',';
    out += row.observer;
    out += ',';
    out += std::to_string(row.jumps);
    out += ',';
    out += format_double(row.att_err_rad);
    out += ',';
    out += format_double(row.pos_err_m);
    out += ',';
    out += format_double(row.lyapunov_value);
    out += ',';
    out += row.converged ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace slamobs
