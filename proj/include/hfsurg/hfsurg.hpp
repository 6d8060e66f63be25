/**
 * Umbrella header.
 */
#pragma once

#include "hfsurg/acomplex.hpp"
#include "hfsurg/builtin.hpp"
#include "hfsurg/cfk.hpp"
#include "hfsurg/cfk_text.hpp"
#include "hfsurg/detect.hpp"
#include "hfsurg/grading.hpp"
#include "hfsurg/homology.hpp"
#include "hfsurg/matrix.hpp"
#include "hfsurg/numeric.hpp"
#include "hfsurg/surgery.hpp"
