#include "wtg/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace wtg {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

void put(std::ofstream& out, double v) { out << format_number(v); }
void put(std::ofstream& out, int v) { out << v; }
void put(std::ofstream& out, bool v) { out << (v ? 1 : 0); }

template <typename T, typename... Rest>
void row(std::ofstream& out, T first, Rest... rest) {
  put(out, first);
  ((out << ',', put(out, rest)), ...);
  out << '\n';
}

constexpr double k_rad_to_deg = 180.0 / M_PI;

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(const std::string& path, const std::vector<trajectory_sample>& trace) {
  std::ofstream out = open_out(path);
  out << "t,x,y,z,vx,vy,vz,phi,theta,psi,gamma_des,chi_des,"
         "alpha1,alpha2,alpha3,alpha4,beta1,beta2,beta3,beta4,"
         "S_gamma,S_chi,D_x,D_z,W,W_dot\n";
  for (const trajectory_sample& s : trace)
    row(out, s.t, s.pos.x, s.pos.y, s.pos.z, s.vel.x, s.vel.y, s.vel.z, s.att.x, s.att.y,
        s.att.z, s.gamma_des, s.chi_des, s.bearings.alpha[0], s.bearings.alpha[1],
        s.bearings.alpha[2], s.bearings.alpha[3], s.bearings.beta[0], s.bearings.beta[1],
        s.bearings.beta[2], s.bearings.beta[3], s.s_gamma, s.s_chi, s.D_x, s.D_z, s.W,
        s.W_dot);
}

void write_stats_csv(const std::string& path, const std::vector<sigma_stats>& rows) {
  std::ofstream out = open_out(path);
  out << "sigma_deg,mean_miss_m,std_miss_m,success_rate,n\n";
  for (const sigma_stats& r : rows)
    row(out, r.sigma * k_rad_to_deg, r.mean_miss, r.std_miss, r.success_rate, r.n);
}

void write_runs_csv(const std::string& path, const std::vector<per_run_record>& runs,
                    const std::vector<double>& sigma_list) {
  std::ofstream out = open_out(path);
  out << "sigma_deg,run,start_x,start_y,start_z,crossed,success,miss_m,t_T_s\n";
  for (const per_run_record& r : runs)
    row(out, sigma_list.at(static_cast<std::size_t>(r.sigma_index)) * k_rad_to_deg,
        r.run_index, r.start.x, r.start.y, r.start.z, r.crossed, r.success, r.miss, r.t_T);
}

void write_portrait_csv(const std::string& path, const phase_portrait& p) {
  std::ofstream out = open_out(path);
  out << "trajectory_id,t,angle_a_deg,angle_b_deg\n";
  for (std::size_t id = 0; id < p.trajectories.size(); ++id)
    for (const phase_portrait::point& pt : p.trajectories[id])
      row(out, static_cast<int>(id), pt.t, pt.angle_a, pt.angle_b);
}

void write_portrait_equilibrium_csv(const std::string& path, const phase_portrait& p) {
  std::ofstream out = open_out(path);
  out << "angle_a_deg,angle_b_deg\n";
  row(out, p.equilibrium_a, p.equilibrium_b);
}

}  // namespace wtg
