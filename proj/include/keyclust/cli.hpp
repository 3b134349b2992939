#ifndef KEYCLUST_CLI_HPP
#define KEYCLUST_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace keyclust {

/**
 * Runs one subcommand. `args` excludes the program name. Returns 0 on
 * success, 2 on a usage or configuration error and 1 when a stage fails; the
 * diagnostic is written to `err`.
 */
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int execute(int argc, const char* const* argv);

}  // namespace keyclust

#endif  // KEYCLUST_CLI_HPP
