#pragma once

// Umbrella for the library proper. The CLI front end (cli.hpp) is excluded:
// it drags in the vendored flag-parsing and JSON headers.

#include "discrim/engine.hpp"
#include "discrim/exact.hpp"
#include "discrim/numtheory.hpp"
#include "discrim/sequences.hpp"
#include "discrim/verify.hpp"
