#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcep::cli {

/// Runs one command. Exit codes: 0 success, 1 runtime error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace pcep::cli
