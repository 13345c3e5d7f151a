#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mstokes/csr.hpp"
#include "mstokes/dynamics.hpp"
#include "mstokes/gmres.hpp"
#include "mstokes/point_cloud.hpp"

namespace mstokes {

// All writers format reals with 17 significant digits and write atomically
// (temporary file in the same directory, then rename).
void atomic_write(const std::string& path, const std::string& content);

std::string format_g17(double x);

// x,y,u,v,p
void write_field_csv(const std::string& path, const PointCloud& pc,
                     const Eigen::VectorXd& u, const Eigen::VectorXd& p);

// x,y,region,nx,ny,spacing,eps
void write_cloud_csv(const std::string& path, const PointCloud& pc);

struct ConvergenceRow {
  int N = 0;
  double h = 0.0, err_u = 0.0, err_p = 0.0;
};
// N,h,err_u,err_p
void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows);

// t,colloid_id,x,y,theta,vx,vy,omega
void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec);

struct KrylovRow {
  int dofs = 0, iters = 0;
  double setup_s = 0.0, solve_s = 0.0;
};
// dofs,iters,setup_s,solve_s,total_s
void write_krylov_csv(const std::string& path, const std::vector<KrylovRow>& rows);

// One JSON object per line, appended.
void append_summary_jsonl(const std::string& path, const std::string& json_line);

// Matrix Market coordinate format (general, real).
void write_matrix_market(const std::string& path, const Csr& A);

}  // namespace mstokes
