#pragma once

#include <iosfwd>

namespace froshe {

/// Entry point behind the froshe executable. Runs a single config
/// (--scenario) or an experiment matrix (--matrix) and writes metrics CSVs,
/// summary JSON and a reproduction manifest to the output directory
/// (--out, else $FROSHE_OUT_DIR, else ./froshe_out). Returns the exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace froshe
