#ifndef QLM_IO_HPP_
#define QLM_IO_HPP_

#include <iosfwd>
#include <string>

#include "qlm/bartnik.hpp"
#include "qlm/extension.hpp"
#include "qlm/poisson.hpp"

namespace qlm {

/// Text formats, one record per line, doubles printed with %.17g so that a
/// read/write cycle of any file this module wrote is byte identical.
///
///   SH coefficients:  "SH L=<L>" then "l m re im"
///   grid samples:     "GRID n_theta=<n> n_phi=<n>" then "i j value"
///   Bartnik data:     "BARTNIK L=<L> n_theta=<n> n_phi=<n>" then four grid
///                     blocks (gamma_tt, gamma_tp, gamma_pp, H)
///   extension:        "LINEXT L=<L>" then "l m v_re v_im xi_re xi_im"
///                     followed by two SH blocks (W potentials)
///   radial profile:   "RADIAL L=<L> R_max=<v> n_r=<n> decay=<v>" then
///                     "l m i value" (sampled representation)
///
/// Parse failures raise InputError naming the line number.

std::string format_double(double v);

void write_sh(std::ostream& os, const ShCoeffs& c);
ShCoeffs read_sh(std::istream& is, int& line_no);

void write_grid_samples(std::ostream& os, const GridSpec& grid,
                        const std::vector<double>& samples);
std::vector<double> read_grid_samples(std::istream& is, const GridSpec& grid, int& line_no);

void write_bartnik(std::ostream& os, const BartnikData& data);
/// Returns the data together with its freshly constructed grid.
struct LoadedBartnik {
    std::shared_ptr<GridSpec> grid;
    std::unique_ptr<BartnikData> data;
};
LoadedBartnik read_bartnik(std::istream& is);

void write_extension(std::ostream& os, const LinearizedExtension& ext);
LinearizedExtension read_extension(std::istream& is, const GridSpec& grid);

void write_radial(std::ostream& os, const RadialProfile& p);
RadialProfile read_radial(std::istream& is);

void write_mass_report(std::ostream& os, const MassReport& r);

/// Path helpers; parse errors are rethrown with the file name attached.
void save_text(const std::string& path, const std::string& contents);
std::string slurp(const std::string& path);

}  // namespace qlm

#endif  // QLM_IO_HPP_
