#pragma once

#include "argdec/care_robot.hpp"
#include "argdec/condition.hpp"
#include "argdec/core.hpp"
#include "argdec/deontic.hpp"
#include "argdec/engine.hpp"
#include "argdec/instrumental.hpp"
#include "argdec/random.hpp"
#include "argdec/render.hpp"
#include "argdec/scenario.hpp"
#include "argdec/scenario_io.hpp"
#include "argdec/world.hpp"
