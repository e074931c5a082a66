// Command-line front end.
//
// Exit codes: 0 clean, 1 findings or failed scenarios, 2 usage or I/O error.

#ifndef CONJTM_CLI_H_
#define CONJTM_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace conjtm {

// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conjtm

#endif  // CONJTM_CLI_H_
