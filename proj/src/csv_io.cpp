#include "mstokes/csv_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mstokes/errors.hpp"

namespace mstokes {

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("rename failed for " + target.string() + ": " + ec.message());
}

void write_field_csv(const std::string& path, const PointCloud& pc,
                     const Eigen::VectorXd& u, const Eigen::VectorXd& p) {
  std::ostringstream o;
  o << "x,y,u,v,p\n";
  for (int i = 0; i < pc.n(); ++i) {
    o << format_g17(pc.pos[i].x) << ',' << format_g17(pc.pos[i].y) << ','
      << format_g17(u[2 * i]) << ',' << format_g17(u[2 * i + 1]) << ','
      << format_g17(p[i]) << '\n';
  }
  atomic_write(path, o.str());
}

void write_cloud_csv(const std::string& path, const PointCloud& pc) {
  std::ostringstream o;
  o << "x,y,region,nx,ny,spacing,eps\n";
  for (int i = 0; i < pc.n(); ++i) {
    double eps = pc.eps.empty() ? 0.0 : pc.eps[i];
    o << format_g17(pc.pos[i].x) << ',' << format_g17(pc.pos[i].y) << ','
      << pc.region[i] << ',' << format_g17(pc.normal[i].x) << ','
      << format_g17(pc.normal[i].y) << ',' << format_g17(pc.spacing[i]) << ','
      << format_g17(eps) << '\n';
  }
  atomic_write(path, o.str());
}

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows) {
  std::ostringstream o;
  o << "N,h,err_u,err_p\n";
  for (const auto& r : rows)
    o << r.N << ',' << format_g17(r.h) << ',' << format_g17(r.err_u) << ','
      << format_g17(r.err_p) << '\n';
  atomic_write(path, o.str());
}

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec) {
  std::ostringstream o;
  o << "t,colloid_id,x,y,theta,vx,vy,omega\n";
  for (std::size_t s = 0; s < rec.time.size(); ++s)
    for (std::size_t k = 0; k < rec.colloid.size(); ++k)
      o << format_g17(rec.time[s]) << ',' << rec.colloid[k] << ','
        << format_g17(rec.pos[s][k].x) << ',' << format_g17(rec.pos[s][k].y) << ','
        << format_g17(rec.theta[s][k]) << ',' << format_g17(rec.vel[s][k].x) << ','
        << format_g17(rec.vel[s][k].y) << ',' << format_g17(rec.omega[s][k]) << '\n';
  atomic_write(path, o.str());
}

void write_krylov_csv(const std::string& path, const std::vector<KrylovRow>& rows) {
  std::ostringstream o;
  o << "dofs,iters,setup_s,solve_s,total_s\n";
  for (const auto& r : rows)
    o << r.dofs << ',' << r.iters << ',' << format_g17(r.setup_s) << ','
      << format_g17(r.solve_s) << ',' << format_g17(r.setup_s + r.solve_s) << '\n';
  atomic_write(path, o.str());
}

void append_summary_jsonl(const std::string& path, const std::string& json_line) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::ofstream out(target, std::ios::app);
  if (!out) throw IoError("cannot open for append: " + path);
  out << json_line << '\n';
  if (!out) throw IoError("append failed: " + path);
}

void write_matrix_market(const std::string& path, const Csr& A) {
  std::ostringstream o;
  o << "%%MatrixMarket matrix coordinate real general\n";
  o << A.nrows << ' ' << A.ncols << ' ' << A.nnz() << '\n';
  for (int r = 0; r < A.nrows; ++r)
    for (int k = A.rowptr[r]; k < A.rowptr[r + 1]; ++k)
      o << r + 1 << ' ' << A.col[k] + 1 << ' ' << format_g17(A.val[k]) << '\n';
  atomic_write(path, o.str());
}

}  // namespace mstokes
