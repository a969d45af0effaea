#pragma once

#include "steingauge/scalar.hpp"
#include "steingauge/density.hpp"
#include "steingauge/test_function.hpp"
#include "steingauge/families.hpp"
#include "steingauge/stein.hpp"
#include "steingauge/zoo.hpp"
#include "steingauge/distances.hpp"
#include "steingauge/rank_sampler.hpp"
#include "steingauge/bench.hpp"
#include "steingauge/spec_io.hpp"
#include "steingauge/report.hpp"
