#pragma once

#include <iosfwd>

namespace vnfscale {

// The vnfscale command line. Returns 0 when every requested output was
// written, 1 when a stage failed, 2 on a usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vnfscale
