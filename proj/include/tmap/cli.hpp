#pragma once

namespace tmap {

// Subcommands: embed (full pipeline), eval (rank reports for a produced
// layout), bench (scaling study). Exit codes: 0 success, 1 usage error,
// 2 data error.
int cli_entry(int argc, const char* const* argv);

}  // namespace tmap
