#pragma once

#include "ddmpc/matcore.hpp"
#include "ddmpc/plants.hpp"
#include "ddmpc/datalab.hpp"
#include "ddmpc/lmi.hpp"
#include "ddmpc/sdp.hpp"
#include "ddmpc/synthesis.hpp"
#include "ddmpc/simloop.hpp"
#include "ddmpc/presets.hpp"
#include "ddmpc/io.hpp"
#include "ddmpc/repro.hpp"
