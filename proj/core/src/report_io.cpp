#include "report_io.hpp"

#include <fstream>

#include "airylat/errors.hpp"
#include "text_format.hpp"

namespace airylat::detail {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigurationError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_density_table(const std::filesystem::path& path, const DensityTable& table,
                         const char* column_name) {
  auto out = open_for_write(path);
  out << "t," << column_name << ",density\n";
  std::string line;
  for (std::size_t r = 0; r < table.times.size(); ++r) {
    const std::string t = format_number(table.times[r]);
    const auto& row = table.rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) {
      line.clear();
      line += t;
      line += ',';
      line += format_number(table.columns[c]);
      line += ',';
      line += format_number(row[c]);
      line += '\n';
      out << line;
    }
  }
}

void write_key_values(const std::filesystem::path& path,
                      const std::map<std::string, std::string>& values) {
  auto out = open_for_write(path);
  for (const auto& [k, v] : values) out << k << " = " << v << '\n';
}

void write_segments(const std::filesystem::path& path,
                    const std::vector<SegmentMotion>& segments) {
  auto out = open_for_write(path);
  out << "t_start,t_end,k0,velocity,max_excursion\n";
  for (const auto& s : segments) {
    out << format_number(s.t_start) << ',' << format_number(s.t_end) << ','
        << format_number(s.k0) << ',' << format_number(s.velocity) << ','
        << format_number(s.max_excursion) << '\n';
  }
}

void write_trajectory_file(const std::filesystem::path& path,
                           const PeakTrajectory& trajectory) {
  auto out = open_for_write(path);
  write_trajectory(out, trajectory);
}

void write_fit_file(const std::filesystem::path& path, const RelativisticFit& fit) {
  auto out = open_for_write(path);
  write_fit(out, fit);
}

}  // namespace airylat::detail
