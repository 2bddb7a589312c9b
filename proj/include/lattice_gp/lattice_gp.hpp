#pragma once

#include "analysis.hpp"
#include "combinatorics.hpp"
#include "constructions.hpp"
#include "geometry.hpp"
#include "integer.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "partition.hpp"
#include "point_set.hpp"
#include "primes.hpp"
#include "random.hpp"
#include "vc.hpp"
#include "violations.hpp"
