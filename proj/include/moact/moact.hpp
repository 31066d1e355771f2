#ifndef MOACT_MOACT_HPP
#define MOACT_MOACT_HPP

#include "moact/block_matching.hpp"
#include "moact/error.hpp"
#include "moact/evaluation.hpp"
#include "moact/frame.hpp"
#include "moact/frame_io.hpp"
#include "moact/grid.hpp"
#include "moact/motion_activity.hpp"
#include "moact/serialize.hpp"
#include "moact/shot_detector.hpp"

#endif // MOACT_MOACT_HPP
