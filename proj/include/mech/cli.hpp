#pragma once

namespace mech {

// exit codes: 0 pass, 1 check failure, 2 usage error, 3 numeric/runtime error
int cli_main(int argc, const char* const* argv);

}  // namespace mech
