#pragma once

#include "klhull/bounds.hpp"
#include "klhull/config.hpp"
#include "klhull/entropic_sdp.hpp"
#include "klhull/error.hpp"
#include "klhull/io.hpp"
#include "klhull/linalg.hpp"
#include "klhull/pipeline.hpp"
#include "klhull/quadmap.hpp"
#include "klhull/random.hpp"
#include "klhull/rounding.hpp"
#include "klhull/suites.hpp"
#include "klhull/verify.hpp"
