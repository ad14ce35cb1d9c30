#pragma once

#include "config.hpp"

#include <iosfwd>

namespace graphred::app {

void cmd_generate(const RunConfig& cfg, std::ostream& log);
void cmd_tune(const RunConfig& cfg, std::ostream& log);
void cmd_denoise(const RunConfig& cfg, std::ostream& log);
void cmd_train(const RunConfig& cfg, std::ostream& log);
void cmd_check(const RunConfig& cfg, std::ostream& log);
void cmd_spectrum(const RunConfig& cfg, std::ostream& log);
void cmd_eval(const RunConfig& cfg, std::ostream& log);

}  // namespace graphred::app
