#pragma once

#include "srg/aco.hpp"
#include "srg/bench.hpp"
#include "srg/catalog.hpp"
#include "srg/check.hpp"
#include "srg/constructive.hpp"
#include "srg/course_set.hpp"
#include "srg/fitness.hpp"
#include "srg/ga.hpp"
#include "srg/io.hpp"
#include "srg/model.hpp"
