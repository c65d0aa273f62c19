#ifndef TSCHSIM_CLI_HPP
#define TSCHSIM_CLI_HPP

namespace tschsim {

/// Entry point for the tschsim tool: run / oracle / predict / compare /
/// sweep. Returns the process exit status.
int run_cli(int argc, char** argv);

} // namespace tschsim

#endif
