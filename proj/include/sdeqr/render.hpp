#pragma once

#include <string>
#include <string_view>

#include "sdeqr/qr.hpp"

namespace sdeqr::render {

enum class Format { Pbm, Svg, Txt, Json };

Format format_from_name(const std::string &name);
const char *format_extension(Format format);

// Deterministic byte rendering. PBM (P1, 1=dark), TXT ('#'/'.') and SVG
// carry a light quiet zone of `quiet_zone` modules; JSON is the raw matrix
// plus metadata and ignores the quiet zone.
std::string render(const qr::ModuleMatrix &matrix, Format format, int quiet_zone = 4);

// Inverse of render for PBM, TXT and JSON; SVG is render-only. The quiet
// zone is stripped (and checked light) using the given border width, and
// the function-module annotations are rebuilt from the version template.
// Errors carry line/column positions.
qr::ModuleMatrix parse_matrix(std::string_view data, Format format, int quiet_zone = 4);

}  // namespace sdeqr::render
