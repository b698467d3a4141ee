#pragma once

#include <ostream>

// Small seeded invariant checks, one PASS or FAIL line each. True when all pass.
bool run_selftest(std::ostream& out);
