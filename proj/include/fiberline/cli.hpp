#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fiberline/error.hpp"
#include "fiberline/geometry.hpp"

namespace fiberline::cli {

enum ExitCode : int {
  kPass = 0,
  kStatisticalFail = 1,
  kUsageError = 2,
  kSamplerError = 3,
};

/// Runs the command line `args` (args[0] is the program name). Reports and
/// line records go to `out`, diagnostics to `err`; `in` backs `--lines -`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in);

/// `ball:cx,cy,cz,r` | `box:minx,miny,minz,maxx,maxy,maxz` |
/// `halfspaces:@file.json` where the file holds [{"normal":[x,y,z],"offset":o}, ...].
/// Non-unit normals are normalized together with their offsets.
ConvexBody parse_body(std::string_view spec);

/// Input problems map to 2, sampler failures to 3.
int exit_code_for(ErrorKind kind);

}  // namespace fiberline::cli
