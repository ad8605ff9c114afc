#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "airylat/scenario.hpp"

namespace airylat::detail {

void write_density_table(const std::filesystem::path& path, const DensityTable& table,
                         const char* column_name);
void write_key_values(const std::filesystem::path& path,
                      const std::map<std::string, std::string>& values);
void write_segments(const std::filesystem::path& path,
                    const std::vector<SegmentMotion>& segments);
void write_trajectory_file(const std::filesystem::path& path,
                           const PeakTrajectory& trajectory);
void write_fit_file(const std::filesystem::path& path, const RelativisticFit& fit);

}  // namespace airylat::detail
