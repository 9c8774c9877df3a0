#pragma once

// Gaze-typing keystroke inference from (yaw, pitch, EAR) traces:
// session detection, keystroke segmentation, keyboard localization,
// key decoding, text recovery, and the synthetic oracle that checks
// all of it end to end.

#include "gazetype/clicks.hpp"
#include "gazetype/config.hpp"
#include "gazetype/dictionary.hpp"
#include "gazetype/error.hpp"
#include "gazetype/evaluate.hpp"
#include "gazetype/gaussian.hpp"
#include "gazetype/geometry.hpp"
#include "gazetype/layout.hpp"
#include "gazetype/mapper.hpp"
#include "gazetype/metrics.hpp"
#include "gazetype/passcode.hpp"
#include "gazetype/pipeline.hpp"
#include "gazetype/posterior.hpp"
#include "gazetype/random.hpp"
#include "gazetype/recover.hpp"
#include "gazetype/rnn.hpp"
#include "gazetype/session.hpp"
#include "gazetype/stability.hpp"
#include "gazetype/synth.hpp"
#include "gazetype/trace_io.hpp"
#include "gazetype/types.hpp"
