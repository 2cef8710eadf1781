#pragma once

#include "twisted/rational.hpp"
#include "twisted/group.hpp"
#include "twisted/multiplier.hpp"
#include "twisted/algebra.hpp"
#include "twisted/linalg.hpp"
#include "twisted/representations.hpp"
#include "twisted/traces.hpp"
#include "twisted/spectral.hpp"
#include "twisted/cohomology.hpp"
#include "twisted/mishchenko.hpp"
#include "twisted/json_io.hpp"
#include "twisted/fixtures.hpp"
#include "twisted/suites.hpp"
