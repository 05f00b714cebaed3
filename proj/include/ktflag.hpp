#pragma once

#include "ktflag/error.hpp"
#include "ktflag/gkm.hpp"
#include "ktflag/harness.hpp"
#include "ktflag/lattice.hpp"
#include "ktflag/positivity.hpp"
#include "ktflag/projective.hpp"
#include "ktflag/roots.hpp"
#include "ktflag/serialize.hpp"
