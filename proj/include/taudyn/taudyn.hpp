#pragma once

#include "taudyn/bohr.hpp"
#include "taudyn/dynamics.hpp"
#include "taudyn/frames.hpp"
#include "taudyn/gauge.hpp"
#include "taudyn/masstau.hpp"
#include "taudyn/walk.hpp"
#include "taudyn/wavepacket.hpp"
