#include "twave/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "twave/errors.hpp"

namespace twave {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string metadata_line(const Metadata& meta) {
  std::string line = "#";
  for (const auto& [k, v] : meta) {
    line += ' ';
    line += k;
    line += '=';
    line += v;
  }
  return line;
}

Metadata trajectory_metadata(const Trajectory& traj) {
  const auto& o = traj.opts;
  Metadata m{
      {"phi_minus", format_double(traj.cfg.phi_minus)},
      {"phi_plus", format_double(traj.cfg.phi_plus)},
      {"alpha", format_double(traj.cfg.alpha)},
      {"tau", format_double(traj.tau)},
      {"dx", format_double(o.dx)},
      {"length", format_double(o.length)},
      {"epsilon", format_double(o.epsilon)},
      {"blowdown_floor", format_double(o.blowdown_floor)},
      {"xi_start", format_double(traj.grid.xi_start)},
      {"lambda", format_double(traj.grid.tail.lambda)},
      {"flux", o.flux == FluxVariant::Modified ? "modified" : "original"},
  };
  if (traj.modified) {
    m.emplace_back("cap_A", format_double(traj.modified->quartic[0]));
    m.emplace_back("cap_B", format_double(traj.modified->quartic[1]));
  }
  m.emplace_back("terminated", to_string(traj.terminated));
  if (traj.xi_star) m.emplace_back("xi_star", format_double(*traj.xi_star));
  return m;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string s = metadata_line(trajectory_metadata(traj));
  s += "\nxi,phi,psi,dalpha,h,energy_residual\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    s += format_double(traj.xi(k));
    s += ',';
    s += format_double(traj.phi[k]);
    s += ',';
    s += format_double(traj.grid.psi[k]);
    s += ',';
    s += format_double(traj.dalpha[k]);
    s += ',';
    s += format_double(traj.flux(traj.phi[k]));
    s += ',';
    s += format_double(traj.energy_residual[k]);
    s += '\n';
  }
  return s;
}

std::string kernel_csv(std::span<const KernelEval> rows, double alpha) {
  Metadata m{{"alpha", format_double(alpha)}, {"points", std::to_string(rows.size())}};
  if (!rows.empty()) {
    m.emplace_back("tau", format_double(rows.front().tau));
    m.emplace_back("a", format_double(rows.front().a));
    m.emplace_back("eta_max", format_double(rows.back().eta));
  }
  std::string s = metadata_line(m);
  s += "\neta,v,v_prime,v_second\n";
  for (const auto& r : rows) {
    s += format_double(r.eta);
    s += ',';
    s += format_double(r.v);
    s += ',';
    s += format_double(r.v_prime);
    s += ',';
    s += format_double(r.v_second);
    s += '\n';
  }
  return s;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw Error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace twave
