#pragma once

#include "weilsum/finite_field.hpp"
#include "weilsum/cyclotomic.hpp"
#include "weilsum/fft.hpp"
#include "weilsum/group_algebra.hpp"
#include "weilsum/weil_engine.hpp"
#include "weilsum/analysis.hpp"
#include "weilsum/tower.hpp"
#include "weilsum/scan.hpp"
