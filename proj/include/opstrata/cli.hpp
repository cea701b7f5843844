#pragma once

namespace opstrata {

/// Exit codes: 0 success or certificate pass, 1 certificate fail, 2 invalid
/// input, 3 infeasible request. Diagnostics go to standard error.
int cli_main(int argc, char** argv);

}  // namespace opstrata
