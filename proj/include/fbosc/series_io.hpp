#pragma once

#include <string>
#include <vector>

#include "fbosc/psd.hpp"
#include "fbosc/timedomain.hpp"

namespace fbosc {

/// Binary dumps start with these 8 bytes, then little-endian
/// u64 length, f64 dt, u32 hash length, hash bytes, length f64 q, length f64 p.
inline constexpr char kSeriesMagic[8] = {'F', 'B', 'O', 'S', 'C', 'T', 'S', '1'};

/// Each header line is written as "# <line>". Columns: t, q_out, p_out.
void write_series_csv(const std::string& path, const QuadTimeSeries& series,
                      const std::vector<std::string>& header);
/// Columns: omega_rad_s, psd, stderr. one_sided doubles every bin except DC
/// and Nyquist (real estimates only).
void write_psd_csv(const std::string& path, const PsdEstimate& est, const std::vector<std::string>& header,
                   bool one_sided = false);

void write_series_binary(const std::string& path, const QuadTimeSeries& series);
/// Throws Io on a missing file, bad magic or truncated payload.
QuadTimeSeries read_series_binary(const std::string& path);

}  // namespace fbosc
