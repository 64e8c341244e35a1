#ifndef ENTMEAS_TOOLS_COMMANDS_HPP
#define ENTMEAS_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <string>

namespace entmeas::cli {

struct GlobalOpts {
  std::uint64_t seed = 0;
  double tol = 1e-6;
  bool json = false;
  bool bits = false;
  std::string out;  // empty writes to stdout
};

int cmd_measures(const std::string& state_path, const GlobalOpts& g);
int cmd_ree(const std::string& state_path, const std::string& distance, const GlobalOpts& g);
int cmd_bell_sweep(std::size_t steps, const GlobalOpts& g);
int cmd_check(const std::string& suite, std::size_t trials, const GlobalOpts& g);
int cmd_split(const std::string& state_path, const GlobalOpts& g);

}  // namespace entmeas::cli

#endif
