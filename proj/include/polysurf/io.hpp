#pragma once

#include <string>
#include <vector>

#include "polysurf/construct.hpp"
#include "polysurf/solve.hpp"

namespace polysurf {

// Writes via a temp file in the same directory plus rename, so a failed run
// never leaves a partial file behind.
void write_text_atomic(const std::string& path, const std::string& content);

// Patch archive: "BBS 1", then per patch "patch <id> 3 3 <kind>" and 16
// row-major "x y z" lines at 17 significant digits, then one
// "adj <idA> <edgeA> <idB> <edgeB> <flip>" line per contact.
std::string format_bbs(const SplineComplex& complex);

// Scalar field over the same patches: "BBF 1", then 16 coefficient lines per
// patch after a "patch <id> 3 3" header.
std::string format_bbf(const std::vector<PatchXd>& field);

// Legacy VTK (ASCII, unstructured quads) sampling of a scalar field on an
// s x s grid per patch, point scalar named "temperature".
std::string format_vtk(const SplineComplex& complex, const std::vector<PatchXd>& field,
                       int samples);

// "patch,config,max_abs_err" rows plus a trailing global summary row.
std::string format_error_csv(const SplineComplex& complex, const ErrorReport& report);

}  // namespace polysurf
