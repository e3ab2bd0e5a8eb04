#pragma once

#include "olpack/advice.hpp"
#include "olpack/applications.hpp"
#include "olpack/core.hpp"
#include "olpack/harness.hpp"
#include "olpack/io.hpp"
#include "olpack/offline.hpp"
#include "olpack/random.hpp"
#include "olpack/scaling.hpp"
#include "olpack/subroutines.hpp"
#include "olpack/switching.hpp"
