#include "polysurf/io.hpp"

#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "polysurf/bezier.hpp"

namespace polysurf {

namespace {

void append(std::string& out, const char* fmt, ...) {
  char buf[160];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  out += buf;
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

std::string format_bbs(const SplineComplex& complex) {
  std::string out = "BBS 1\n";
  for (int p = 0; p < complex.patch_count(); ++p) {
    append(out, "patch %d 3 3 %s\n", p, complex.patch_kind_name(p).c_str());
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const Vec3& c = complex.patches[p].at(i, j);
        append(out, "%.17g %.17g %.17g\n", c.x(), c.y(), c.z());
      }
  }
  for (const EdgeContact& c : complex.contacts)
    append(out, "adj %d %d %d %d %d\n", c.patch_a, c.edge_a, c.patch_b, c.edge_b, c.flip ? 1 : 0);
  return out;
}

std::string format_bbf(const std::vector<PatchXd>& field) {
  std::string out = "BBF 1\n";
  for (size_t p = 0; p < field.size(); ++p) {
    append(out, "patch %zu 3 3\n", p);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) append(out, "%.17g\n", field[p].at(i, j));
  }
  return out;
}

std::string format_vtk(const SplineComplex& complex, const std::vector<PatchXd>& field,
                       int samples) {
  if (samples < 2) samples = 2;
  const int np = complex.patch_count();
  const int pts_per = samples * samples, cells_per = (samples - 1) * (samples - 1);
  std::string out =
      "# vtk DataFile Version 3.0\n"
      "sampled spline field\n"
      "ASCII\n"
      "DATASET UNSTRUCTURED_GRID\n";
  append(out, "POINTS %d double\n", np * pts_per);
  for (int p = 0; p < np; ++p)
    for (int i = 0; i < samples; ++i)
      for (int j = 0; j < samples; ++j) {
        const double u = double(i) / (samples - 1), v = double(j) / (samples - 1);
        const Vec3 q = eval(complex.patches[p], u, v);
        append(out, "%.17g %.17g %.17g\n", q.x(), q.y(), q.z());
      }
  append(out, "CELLS %d %d\n", np * cells_per, 5 * np * cells_per);
  for (int p = 0; p < np; ++p) {
    const int base = p * pts_per;
    for (int i = 0; i + 1 < samples; ++i)
      for (int j = 0; j + 1 < samples; ++j) {
        const int a = base + i * samples + j;
        append(out, "4 %d %d %d %d\n", a, a + samples, a + samples + 1, a + 1);
      }
  }
  append(out, "CELL_TYPES %d\n", np * cells_per);
  for (int c = 0; c < np * cells_per; ++c) out += "9\n";
  append(out, "POINT_DATA %d\n", np * pts_per);
  out += "SCALARS temperature double 1\nLOOKUP_TABLE default\n";
  for (int p = 0; p < np; ++p)
    for (int i = 0; i < samples; ++i)
      for (int j = 0; j < samples; ++j) {
        const double u = double(i) / (samples - 1), v = double(j) / (samples - 1);
        append(out, "%.17g\n", eval(field[size_t(p)], u, v));
      }
  return out;
}

std::string format_error_csv(const SplineComplex& complex, const ErrorReport& report) {
  std::string out = "patch,config,max_abs_err\n";
  for (size_t p = 0; p < report.per_patch.size(); ++p)
    append(out, "%zu,%s,%.17g\n", p, complex.patch_kind_name(int(p)).c_str(),
           report.per_patch[p]);
  append(out, "global,all,%.17g\n", report.global_max);
  return out;
}

}  // namespace polysurf
