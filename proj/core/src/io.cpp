#include "bipi/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bipi/errors.hpp"

namespace bipi {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double to_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

void write_particles_csv(const ParticleSet& p, const std::filesystem::path& path) {
  std::string out = "id,x1,x2,gamma,C,gradC1,gradC2,frozen,packable\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += std::to_string(i) + ',' + fmt17(p.position[i].x1) + ',' + fmt17(p.position[i].x2) + ',' +
           fmt17(p.gamma[i]) + ',' + fmt17(p.conc[i]) + ',' + fmt17(p.grad_c[i].x1) + ',' +
           fmt17(p.grad_c[i].x2) + ',' + (p.frozen[i] ? '1' : '0') + ',' + (p.packable[i] ? '1' : '0') +
           '\n';
  }
  write_text(path, out);
}

ParticleSet read_particles_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(f, line)) throw IoError(path.string() + ": empty file");
  ParticleSet p;
  std::size_t ln = 1;
  while (std::getline(f, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c = split_csv(line);
    if (c.size() != 9) throw IoError(path.string() + ":" + std::to_string(ln) + ": expected 9 columns");
    const Vec2 x{to_double(c[1], path, ln), to_double(c[2], path, ln)};
    p.add(x);
    p.gamma.back() = to_double(c[3], path, ln);
    p.conc.back() = to_double(c[4], path, ln);
    p.grad_c.back() = {to_double(c[5], path, ln), to_double(c[6], path, ln)};
    p.frozen.back() = c[7] == "1" ? 1 : 0;
    p.packable.back() = c[8] == "1" ? 1 : 0;
  }
  return p;
}

void write_vtk(const ParticleSet& p, const std::filesystem::path& path) {
  std::string out = "# vtk DataFile Version 3.0\nbipi particles\nASCII\nDATASET POLYDATA\n";
  out += "POINTS " + std::to_string(p.size()) + " double\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += fmt17(p.position[i].x1) + ' ' + fmt17(p.position[i].x2) + " 0\n";
  }
  out += "VERTICES " + std::to_string(p.size()) + ' ' + std::to_string(2 * p.size()) + '\n';
  for (std::size_t i = 0; i < p.size(); ++i) out += "1 " + std::to_string(i) + '\n';
  out += "POINT_DATA " + std::to_string(p.size()) + '\n';
  out += "SCALARS gamma double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < p.size(); ++i) out += fmt17(p.gamma[i]) + '\n';
  out += "SCALARS gradC_mag double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < p.size(); ++i) out += fmt17(norm(p.grad_c[i])) + '\n';
  write_text(path, out);
}

void write_metrics_csv(std::span<const IterationRecord> records, const std::filesystem::path& path) {
  std::string out = "phase,iter,tpd_avg,gradc_avg,n_pack\n";
  for (const auto& r : records) {
    out += std::string(to_string(r.phase)) + ',' + std::to_string(r.iter) + ',' + fmt17(r.tpd_avg) + ',' +
           fmt17(r.gradc_avg) + ',' + std::to_string(r.n_pack) + '\n';
  }
  write_text(path, out);
}

namespace {

struct Rgb {
  double r, g, b;
};

std::string color_for(double value) {
  static constexpr std::array<Rgb, 5> stops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  double l = value > 0.0 ? std::log10(value) : -8.0;
  l = std::clamp(l, -8.0, 0.0);
  const double t = (l + 8.0) / 8.0 * 4.0;
  const auto k = std::min<std::size_t>(3, static_cast<std::size_t>(t));
  const double f = t - static_cast<double>(k);
  const Rgb& a = stops[k];
  const Rgb& b = stops[k + 1];
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<unsigned>(std::lround(a.r + f * (b.r - a.r))),
                static_cast<unsigned>(std::lround(a.g + f * (b.g - a.g))),
                static_cast<unsigned>(std::lround(a.b + f * (b.b - a.b))));
  return buf;
}

}  // namespace

void render_svg_scatter(const ParticleSet& p, const BoundarySet& b, ColorField field,
                        const std::filesystem::path& path) {
  const double w = b.bbox.width();
  const double h = b.bbox.height();
  const double px = 0.05 * w;
  const double py = 0.05 * h;
  // y is flipped by plotting (x1, -x2).
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt6(b.bbox.min.x1 - px) + ' ' +
                    fmt6(-(b.bbox.max.x2 + py)) + ' ' + fmt6(w + 2 * px) + ' ' + fmt6(h + 2 * py) + "\">\n";
  out += "<rect x=\"" + fmt6(b.bbox.min.x1 - px) + "\" y=\"" + fmt6(-(b.bbox.max.x2 + py)) + "\" width=\"" +
         fmt6(w + 2 * px) + "\" height=\"" + fmt6(h + 2 * py) + "\" fill=\"white\"/>\n";
  const std::string r = fmt6(0.4 * p.dx);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double v = field == ColorField::Gamma ? p.gamma[i] : norm(p.grad_c[i]);
    out += "<circle cx=\"" + fmt6(p.position[i].x1) + "\" cy=\"" + fmt6(-p.position[i].x2) + "\" r=\"" + r +
           "\" fill=\"" + color_for(v) + "\"/>\n";
  }
  const std::string stroke = fmt6(0.002 * std::max(w, h));
  for (const auto& loop : b.loops) {
    out += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"" + stroke + "\" points=\"";
    for (std::size_t k = 0; k <= loop.vertices.size(); ++k) {
      const Vec2& v = loop.vertices[k % loop.vertices.size()];
      out += (k ? " " : "") + fmt6(v.x1) + ',' + fmt6(-v.x2);
    }
    out += "\"/>\n";
  }
  out += "</svg>\n";
  write_text(path, out);
}

void write_fluid_csv(const FluidState& s, const std::filesystem::path& path) {
  std::string out = "id,x1,x2,v1,v2,rho,p\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += std::to_string(i) + ',' + fmt17(s.position[i].x1) + ',' + fmt17(s.position[i].x2) + ',' +
           fmt17(s.velocity[i].x1) + ',' + fmt17(s.velocity[i].x2) + ',' + fmt17(s.rho[i]) + ',' +
           fmt17(s.p[i]) + '\n';
  }
  write_text(path, out);
}

void write_time_series_csv(std::span<const TimeSample> series, const std::filesystem::path& path) {
  std::string out = "t,ke,max_density_error\n";
  for (const auto& s : series) out += fmt17(s.t) + ',' + fmt17(s.ke) + ',' + fmt17(s.max_density_error) + '\n';
  write_text(path, out);
}

}  // namespace bipi
