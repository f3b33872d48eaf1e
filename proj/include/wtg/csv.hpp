#pragma once

#include <string>
#include <vector>

#include "wtg/experiments.hpp"

namespace wtg {

/// Locale-independent decimal formatting: up to 9 significant digits,
/// printf %g style ('.' decimal point, no grouping).
std::string format_number(double v);

/// Column layout shared by every trajectory trace (kinematic runs leave the
/// attitude columns at zero):
/// t,x,y,z,vx,vy,vz,phi,theta,psi,gamma_des,chi_des,
/// alpha1,alpha2,alpha3,alpha4,beta1,beta2,beta3,beta4,
/// S_gamma,S_chi,D_x,D_z,W,W_dot
void write_trajectory_csv(const std::string& path, const std::vector<trajectory_sample>& trace);

/// sigma_deg,mean_miss_m,std_miss_m,success_rate,n
void write_stats_csv(const std::string& path, const std::vector<sigma_stats>& rows);

/// sigma_deg,run,start_x,start_y,start_z,crossed,success,miss_m,t_T_s
void write_runs_csv(const std::string& path, const std::vector<per_run_record>& runs,
                    const std::vector<double>& sigma_list);

/// trajectory_id,t,angle_a_deg,angle_b_deg
void write_portrait_csv(const std::string& path, const phase_portrait& p);

/// Single-row annotation with the attractor of the portrait plane:
/// angle_a_deg,angle_b_deg
void write_portrait_equilibrium_csv(const std::string& path, const phase_portrait& p);

}  // namespace wtg
