#ifndef SSPF_IO_HPP_
#define SSPF_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "sspf/ellipticity.hpp"
#include "sspf/exact.hpp"
#include "sspf/field.hpp"
#include "sspf/gas.hpp"
#include "sspf/solver.hpp"

namespace sspf::io {

/// Library version string.
std::string_view version() noexcept;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

double parse_double(std::string_view text);

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_text(const std::filesystem::path& path);

/// Sidecar path for a field CSV: same stem, ".json".
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// Field CSV, header "xi1,xi2,value" (or "xi,value" for 1D), row-major node
/// order with the axis-1 index fastest.
std::string field_csv(const ScalarField& field);

/// Sidecar JSON: grid (origin, spacing, dims, walls), variable tag, gas.
std::string field_metadata_json(const ScalarField& field, const GasModel& gas);

void write_field(const std::filesystem::path& csv, const ScalarField& field, const GasModel& gas);

struct LoadedField {
  ScalarField field;
  GasModel gas;
};

/// Reads the CSV and its sidecar; checks coordinates against the metadata.
/// 1D files may carry profile rows "xi,chi,dchi".
LoadedField read_field(const std::filesystem::path& csv);

/// "xi,chi,dchi" rows.
std::string profile_csv(const Profile1D& profile);
/// "r,chi,dchi" rows.
std::string profile_csv(const RadialProfile& profile);

/// Flat key=value file; '#' starts a comment. Unknown keys are a FormatError.
SolverConfig parse_solver_config(std::string_view text);
SolverConfig read_solver_config(const std::filesystem::path& path);
std::string solver_config_text(const SolverConfig& config);

std::string gas_json(const GasModel& gas);
std::string grid_json(const GridSpec& grid);
std::string solver_config_json(const SolverConfig& config);
std::string solve_report_json(const SolveReport& report);
std::string ellipticity_report_json(const EllipticityReport& report);
std::string delta_sweep_json(const DeltaSweep& sweep);
std::string wall_norms_json(const WallNorms& norms);
std::string diagnostics_json(const MaxPointDiagnostics& diag);

}  // namespace sspf::io

#endif  // SSPF_IO_HPP_
