#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bipi/geometry.hpp"
#include "bipi/packing.hpp"
#include "bipi/particles.hpp"
#include "bipi/scenarios.hpp"
#include "bipi/wcsph.hpp"

namespace bipi {

/// Shortest text that round-trips a double ("%.17g").
std::string fmt17(double v);

/// Header `id,x1,x2,gamma,C,gradC1,gradC2,frozen,packable`.
void write_particles_csv(const ParticleSet& p, const std::filesystem::path& path);
/// Reads a file written by write_particles_csv. Seeds are set to the positions;
/// dx is left at zero for the caller to fill in.
ParticleSet read_particles_csv(const std::filesystem::path& path);

/// Legacy ASCII POLYDATA with point scalars `gamma` and `gradC_mag`.
void write_vtk(const ParticleSet& p, const std::filesystem::path& path);

/// Header `phase,iter,tpd_avg,gradc_avg,n_pack`.
void write_metrics_csv(std::span<const IterationRecord> records, const std::filesystem::path& path);

enum class ColorField { GradCMag, Gamma };

/// Colored particle scatter over the boundary loops. Colors map log10 of the
/// field, clamped to [-8, 0], through five stops.
void render_svg_scatter(const ParticleSet& p, const BoundarySet& b, ColorField field,
                        const std::filesystem::path& path);

/// Header `id,x1,x2,v1,v2,rho,p`.
void write_fluid_csv(const FluidState& s, const std::filesystem::path& path);

/// Header `t,ke,max_density_error`.
void write_time_series_csv(std::span<const TimeSample> series, const std::filesystem::path& path);

/// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace bipi
