#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "zollfins/finsler.hpp"
#include "zollfins/geodesics.hpp"
#include "zollfins/moduli.hpp"
#include "zollfins/profile.hpp"

namespace zollfins {

/// 17 significant digits, round-trip exact.
std::string format_number(double value);

/// Writes through a temporary file in the same directory and renames it into
/// place. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// `x,G` on `points` uniform x in [-1, 1].
std::string curvature_csv(const ZollProfile& profile, int points);

/// `R,Theta,branch,r,v1,v2`.
std::string indicatrix_csv(const IndicatrixCurve& curve);

/// File name `indicatrix_R<value>.csv` with the shortest round-trip form of R.
std::string indicatrix_file_name(double R);

/// `t,r,theta,c,sign`.
std::string zoll_trace_csv(const GeodesicTrace& trace);

/// `t,R,Theta,vR,vTheta,F`.
std::string finsler_trace_csv(const FinslerTrace& trace);

struct PlotOptions {
  int width = 640;
  int height = 640;
  std::string title;
};

/// All curves in one fixed-viewBox SVG with axes and an R legend. Output
/// depends only on the inputs.
std::string indicatrices_svg(const std::vector<IndicatrixCurve>& curves, const PlotOptions& options = {});

}  // namespace zollfins
